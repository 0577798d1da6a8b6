"""Verification suites behind the command-line interface.

Each suite returns a :class:`VerificationReport`. Randomized suites draw one
generator per trial from ``SeedSequence([seed, trial])`` so results do not
depend on how trials are scheduled.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from foxforms import barcomplex as bar
from foxforms import forms, liegroup
from foxforms.freegroup import (
    FormalWordSum,
    Word,
    format_word,
    fox_derivative,
    gamma,
    reduce,
    relator,
    telescope,
    z_identities,
)

GROUPS = {"su2": 2, "su3": 3}


@dataclass
class SuiteConfig:
    suite: str
    genus: int = 2
    group: str = "su2"
    seed: int = 0
    trials: int = 100
    h: float = 1e-5
    tol: float | None = None
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.group not in GROUPS:
            raise ValueError(f"unsupported group {self.group!r}")

    @property
    def n(self) -> int:
        return GROUPS[self.group]


@dataclass
class VerificationReport:
    suite: str
    genus: int
    group: str
    seed: int
    trials: int
    h: float | None
    max_residual: float | None
    calibrated_mu: float | None
    tolerance: float | None
    passed: bool
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _parallel(fn, args, jobs):
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, args))


def _run(fn, args, cfg):
    if cfg.jobs > 1:
        return _parallel(fn, args, cfg.jobs)
    return [fn(a) for a in args]


def _report(cfg: SuiteConfig, passed: bool, **kw) -> VerificationReport:
    kw.setdefault("h", None)
    kw.setdefault("max_residual", None)
    kw.setdefault("calibrated_mu", None)
    kw.setdefault("tolerance", cfg.tol)
    return VerificationReport(cfg.suite, cfg.genus, cfg.group, cfg.seed, cfg.trials, passed=bool(passed), **kw)


# --- symbolic suites ----------------------------------------------------------


def verify_fox(cfg: SuiteConfig) -> VerificationReport:
    g = cfg.genus
    R = relator(g)
    checks = []
    for i in range(1, 2 * g + 1):
        got = fox_derivative(R, i)
        want = FormalWordSum.of((1, gamma(0, i, g)), (-1, gamma(1, i, g)))
        checks.append({"generator": i, "fox_derivative": str(got), "gamma_difference": str(want),
                       "pass": got == want})
    failures = [c for c in checks if not c["pass"]]
    return _report(cfg, not failures, checks=checks, failures=failures,
                   details={"relator": format_word(R), "exact_matches": len(checks) - len(failures)})


def verify_telescope(cfg: SuiteConfig) -> VerificationReport:
    g = cfg.genus
    total = telescope(g)
    want = FormalWordSum.of((1, relator(g)), (-1, Word.identity(g)))
    checks = [{"name": "telescope = [R] - [1]", "value": str(total), "pass": total == want}]
    for name, a, b in z_identities(g):
        checks.append({"name": name, "lhs": format_word(a), "rhs": format_word(b), "pass": a == b})
    failures = [c for c in checks if not c["pass"]]
    return _report(cfg, not failures, checks=checks, failures=failures,
                   details={"final_sum": str(total), "terms_before_collection": 12 * g})


def verify_cycle(cfg: SuiteConfig) -> VerificationReport:
    g = cfg.genus
    free = bar.free_group_oracle(g)
    d_free = bar.boundary(bar.fundamental_chain(g, free))
    expected_free = -bar.relator_endpoints(g, free)
    d_surface = bar.boundary(bar.fundamental_chain(g, bar.surface_group_oracle(g)))
    checks = [
        {"name": "boundary over F equals (1) - (R)", "value": bar.chain_to_json(d_free),
         "pass": d_free.equals(expected_free)},
        {"name": "boundary over surface group is zero", "value": f"{len(d_surface)} surviving terms",
         "pass": d_surface.is_zero()},
    ]
    failures = [c for c in checks if not c["pass"]]
    return _report(cfg, not failures, checks=checks, failures=failures)


def random_word(rng: random.Random, g: int, max_len: int) -> Word:
    letters = [rng.choice([1, -1]) * rng.randint(1, 2 * g) for _ in range(rng.randint(0, max_len))]
    return reduce(letters, g)


def verify_bar(cfg: SuiteConfig) -> VerificationReport:
    g = cfg.genus
    oracle = bar.free_group_oracle(g)
    rng = random.Random(cfg.seed)
    failures = []
    for t in range(cfg.trials):
        degree = rng.randint(2, 4)
        chain = bar.BarChain(degree, oracle, [
            (tuple(random_word(rng, g, 6) for _ in range(degree)), rng.choice([-2, -1, 1, 2, 3]))
            for _ in range(rng.randint(1, 4))
        ])
        dd = bar.boundary(bar.boundary(chain))
        if not dd.is_zero():
            failures.append({"trial": t, "check": "dd=0", "chain": bar.chain_to_json(chain)})
        tup = next(iter(chain.terms()))[0]
        m = len(tup)
        for j in range(1, m + 1):
            for i in range(j):
                lhs = bar.face(i, bar.face(j, tup, oracle), oracle)
                rhs = bar.face(j - 1, bar.face(i, tup, oracle), oracle)
                if lhs != rhs:
                    failures.append({"trial": t, "check": f"face {i},{j}",
                                     "tuple": [format_word(w) for w in tup]})
    return _report(cfg, not failures, failures=failures,
                   checks=[{"name": "boundary squared and face identities", "trials": cfg.trials,
                            "pass": not failures}])


# --- numerical suites ---------------------------------------------------------


def _pw_trial(args):
    seed, t, n, mu, h = args
    rng = trial_rng(seed, t)
    p = liegroup.haar_configuration(rng, 2, n)
    T = liegroup.random_algebra(rng, (3, 2), n)
    r, scale = forms.shulman_residual(p, T, mu, h)
    r_half, _ = forms.shulman_residual(p, T, mu, h / 2)
    return r, r_half, scale


def verify_pw(cfg: SuiteConfig) -> VerificationReport:
    tol = cfg.tol if cfg.tol is not None else 1e-5
    cal = forms.calibrate_pw(seed=cfg.seed, h=cfg.h, n=cfg.n)
    rows = _run(_pw_trial, [(cfg.seed, t, cfg.n, cal.mu, cfg.h) for t in range(cfg.trials)], cfg)
    rel = [r / s for r, _, s in rows]
    total, total_half = sum(r for r, _, _ in rows), sum(rh for _, rh, _ in rows)
    ratio = total / total_half if total_half > 0 else float("inf")
    failures = [{"trial": t, "relative_residual": x} for t, x in enumerate(rel) if x > tol]
    passed = not failures and ratio >= 3.5
    return _report(cfg, passed, h=cfg.h, max_residual=max(rel), calibrated_mu=cal.mu, tolerance=tol,
                   failures=failures,
                   checks=[{"name": "delta omega3 + d(mu omega2) = 0", "pass": not failures},
                           {"name": "residual ratio when h halves", "ratio": ratio, "pass": ratio >= 3.5}],
                   details={"calibration_residual": cal.residual, "sign_relation": "delta c1 = -d c2"})


def _main_trial(args):
    seed, t, g, n, mu, h = args
    rng = trial_rng(seed, t)
    c = liegroup.haar_configuration(rng, 2 * g, n)
    T = liegroup.random_algebra(rng, (3, 2 * g), n)
    chk = forms.verify_main_identity(c, T, h, mu)
    return chk.relative, chk.residual


def verify_main(cfg: SuiteConfig) -> VerificationReport:
    tol = cfg.tol if cfg.tol is not None else 1e-5
    mu = forms.calibrated_mu(cfg.n)
    rows = _run(_main_trial, [(cfg.seed, t, cfg.genus, cfg.n, mu, cfg.h) for t in range(cfg.trials)], cfg)
    rel = [r for r, _ in rows]
    failures = [{"trial": t, "trial_seed": [cfg.seed, t], "relative_residual": x}
                for t, x in enumerate(rel) if x > tol]
    return _report(cfg, not failures, h=cfg.h, max_residual=max(rel), calibrated_mu=mu, tolerance=tol,
                   failures=failures,
                   checks=[{"name": "d(moment primitive) = moment_map^* omega3", "pass": not failures}])


def verify_moment(cfg: SuiteConfig) -> VerificationReport:
    g, n = cfg.genus, cfg.n
    tol = cfg.tol if cfg.tol is not None else 1e-12
    c = liegroup.fixture_configuration(g, n)
    beta = liegroup.central_element(1, n)
    phi = liegroup.moment_map(c)
    fixture_err = float(np.linalg.norm(phi - beta))
    rank = liegroup.jacobian_rank(c, beta)
    equiv = []
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, t)
        x = liegroup.haar_configuration(rng, 2 * g, n)
        k = liegroup.haar_sample(rng, n)
        lhs = liegroup.moment_map(liegroup.conjugate(x, k))
        rhs = k @ liegroup.moment_map(x) @ k.conj().T
        equiv.append(float(np.linalg.norm(lhs - rhs)))
    checks = [
        {"name": "fixture maps to central element", "error": fixture_err, "pass": fixture_err <= tol},
        {"name": "jacobian rank equals dim K", "rank": rank, "dim": n * n - 1, "pass": rank == n * n - 1},
        {"name": "conjugation equivariance", "max_error": max(equiv), "pass": max(equiv) <= tol},
    ]
    failures = [c for c in checks if not c["pass"]]
    return _report(cfg, not failures, max_residual=max([fixture_err] + equiv), tolerance=tol,
                   checks=checks, failures=failures, details={"beta": liegroup.configuration_to_json(beta[None])})


def _fiber_trial(args):
    seed, t, g, n, tol = args
    rng = trial_rng(seed, t)
    base = liegroup.random_fiber_point(rng, g, n)
    beta = liegroup.moment_map(base)
    start = liegroup.perturb(base, rng, 1e-2)
    res = liegroup.project_to_fiber(start, beta, max_iter=50, tol=tol)
    return res.converged, res.iterations, res.residual, res.message


def project_fiber(cfg: SuiteConfig) -> VerificationReport:
    tol = cfg.tol if cfg.tol is not None else 1e-10
    rows = _run(_fiber_trial, [(cfg.seed, t, cfg.genus, cfg.n, tol) for t in range(cfg.trials)], cfg)
    ok = sum(1 for r in rows if r[0])
    rate = ok / len(rows)
    failures = [{"trial": t, "trial_seed": [cfg.seed, t], "iterations": it, "residual": res, "message": msg}
                for t, (conv, it, res, msg) in enumerate(rows) if not conv]
    return _report(cfg, rate >= 0.95, max_residual=max(r[2] for r in rows), tolerance=tol,
                   failures=failures,
                   checks=[{"name": "converged fraction >= 0.95", "rate": rate, "pass": rate >= 0.95}],
                   details={"max_iterations_used": max(r[1] for r in rows)})


def calibrate(cfg: SuiteConfig) -> VerificationReport:
    tol = cfg.tol if cfg.tol is not None else 1e-5
    try:
        cal = forms.calibrate_pw(seed=cfg.seed, samples=max(cfg.trials, 50), h=cfg.h, n=cfg.n,
                                 max_residual=tol)
    except ArithmeticError as exc:
        return _report(cfg, False, h=cfg.h, tolerance=tol, failures=[{"error": str(exc)}])
    return _report(cfg, True, h=cfg.h, max_residual=cal.residual, calibrated_mu=cal.mu, tolerance=tol,
                   checks=[{"name": "calibration residual", "residual": cal.residual, "pass": True}],
                   details={"samples_used": cal.samples, "excluded": cal.excluded})


SUITES: dict[str, Callable[[SuiteConfig], VerificationReport]] = {
    "verify-fox": verify_fox,
    "verify-telescope": verify_telescope,
    "verify-cycle": verify_cycle,
    "verify-bar": verify_bar,
    "verify-pw": verify_pw,
    "verify-main": verify_main,
    "verify-moment": verify_moment,
    "project-fiber": project_fiber,
    "calibrate": calibrate,
}
