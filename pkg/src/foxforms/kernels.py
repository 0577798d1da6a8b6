"""Hot kernels, taken from the compiled extension when it is importable.

``BACKEND`` is ``"cython"`` or ``"python"``. Both modules expose the same
functions; :func:`use_backend` switches between them at runtime (tests and the
benchmark compare the two).
"""
import numpy as np

from foxforms import _kernels_py

try:
    from foxforms import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _kernels_py


def available_backends():
    return ["python"] + (["cython"] if _compiled is not None else [])


def use_backend(name):
    global BACKEND, _impl
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _impl = _compiled
    elif name == "python":
        _impl = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


def reduce_letters(letters):
    return _impl.reduce_letters(letters)


def word_eval_diff(letters, X, Xinv, V):
    X = np.ascontiguousarray(X, dtype=np.complex128)
    Xinv = np.ascontiguousarray(Xinv, dtype=np.complex128)
    V = np.ascontiguousarray(V, dtype=np.complex128)
    return _impl.word_eval_diff(letters, X, Xinv, V)
