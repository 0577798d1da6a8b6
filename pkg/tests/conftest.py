import numpy as np
import pytest

from foxforms import kernels

ACCEPTANCE: dict = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split()[0]), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
