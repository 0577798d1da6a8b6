"""Numerical SU(n): word evaluation, left-trivialized differentials, the
commutator-product moment map, Haar sampling and projection onto its fibers.

Group points are ``(n, n)`` complex arrays; a configuration of ``m`` points is
an ``(m, n, n)`` array. Tangents are left-trivialized: ``xi`` in su(n) stands
for the tangent vector ``U @ xi`` at ``U``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.linalg

from foxforms.freegroup import Word, relator
from foxforms.kernels import word_eval_diff

UNITARY_TOL = 1e-10


class BranchCutError(ArithmeticError):
    """Principal logarithm requested too close to an eigenvalue -1."""


class FiberError(ValueError):
    pass


# --- points and algebra -----------------------------------------------------


def is_group_point(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    n = U.shape[0]
    return (
        np.linalg.norm(U.conj().T @ U - np.eye(n)) <= tol
        and abs(np.linalg.det(U) - 1) <= tol
    )


def is_algebra_element(xi: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return np.linalg.norm(xi + xi.conj().T) <= tol and abs(np.trace(xi)) <= tol


@lru_cache(maxsize=None)
def _basis(n: int) -> np.ndarray:
    """Orthonormal basis of su(n) for the inner product Re tr(a^H b)."""
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            mats.append(1j * s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            mats.append(1j * a)
    for d in range(1, n):
        h = np.zeros((n, n), dtype=complex)
        h[np.arange(d), np.arange(d)] = 1
        h[d, d] = -d
        mats.append(1j * h)
    B = np.array(mats)
    norms = np.sqrt(np.einsum("kij,kij->k", B.conj(), B).real)
    B = B / norms[:, None, None]
    B.setflags(write=False)
    return B


def algebra_basis(n: int = 2) -> np.ndarray:
    return _basis(n)


def algebra_dim(n: int = 2) -> int:
    return n * n - 1


def to_coords(xi: np.ndarray) -> np.ndarray:
    """Real coordinates of su(n) elements (last two axes) in :func:`algebra_basis`."""
    B = _basis(xi.shape[-1])
    return np.einsum("kij,...ij->...k", B.conj(), xi).real


def from_coords(v: np.ndarray, n: int = 2) -> np.ndarray:
    return np.einsum("...k,kij->...ij", v, _basis(n))


def project_algebra(A: np.ndarray) -> np.ndarray:
    """Nearest su(n) element: anti-Hermitian part, trace removed."""
    n = A.shape[-1]
    S = 0.5 * (A - np.swapaxes(A.conj(), -1, -2))
    tr = np.trace(S, axis1=-2, axis2=-1)[..., None, None]
    return S - tr / n * np.eye(n)


def random_algebra(rng: np.random.Generator, shape=(), n: int = 2) -> np.ndarray:
    return from_coords(rng.standard_normal(tuple(shape) + (algebra_dim(n),)), n)


def expm(xi: np.ndarray) -> np.ndarray:
    """Exponential of anti-Hermitian matrices (batched) by Hermitian eigendecomposition."""
    H = -1j * xi
    H = 0.5 * (H + np.swapaxes(H.conj(), -1, -2))
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)[..., None, :]) @ np.swapaxes(V.conj(), -1, -2)


def logm(U: np.ndarray, margin: float = 1e-6) -> np.ndarray:
    """Principal logarithm of a unitary matrix, anti-Hermitian result.

    Raises :class:`BranchCutError` when an eigenangle is within ``margin`` of pi.
    """
    T, Z = scipy.linalg.schur(U, output="complex")
    lam = np.diag(T)
    theta = np.angle(lam)
    if np.any(np.pi - np.abs(theta) < margin):
        raise BranchCutError(f"eigenangle {theta[np.argmax(np.abs(theta))]:.3g} at the branch cut")
    L = (Z * (1j * theta)[None, :]) @ Z.conj().T
    return 0.5 * (L - L.conj().T)


def haar_sample(seed, n: int = 2) -> np.ndarray:
    """Haar-random SU(n) element, deterministic in ``seed`` (int or Generator)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    Q = Q * (d / np.abs(d))[None, :]
    det = np.linalg.det(Q)
    return Q / det ** (1.0 / n)


def haar_configuration(rng: np.random.Generator, m: int, n: int = 2) -> np.ndarray:
    return np.array([haar_sample(rng, n) for _ in range(m)])


def central_element(k: int = 1, n: int = 2) -> np.ndarray:
    """``exp(2 pi i k / n) * I``; ``k=1, n=2`` gives ``-I``."""
    return np.exp(2j * np.pi * k / n) * np.eye(n)


# --- configurations ----------------------------------------------------------


def check_configuration(c: np.ndarray, g: int) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.ndim != 3 or c.shape[0] != 2 * g or c.shape[1] != c.shape[2]:
        raise ValueError(f"expected a configuration of shape ({2 * g}, n, n), got {c.shape}")
    return c


def _inverses(c: np.ndarray) -> np.ndarray:
    return np.swapaxes(c.conj(), -1, -2)


def evaluate_word(w: Word, c: np.ndarray) -> np.ndarray:
    c = check_configuration(c, w.genus)
    E, _ = word_eval_diff(w.letters, c, _inverses(c), np.zeros((0,) + c.shape, dtype=complex))
    return E


def word_differential(w: Word, c: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Left-trivialized differential of the evaluation map.

    ``v`` has shape ``(2g, n, n)`` or a batch ``(B, 2g, n, n)``; returns the
    matching ``(n, n)`` or ``(B, n, n)`` algebra element(s).
    """
    _, xi = word_eval_and_differential(w, c, v)
    return xi


def word_eval_and_differential(w: Word, c: np.ndarray, v: np.ndarray):
    c = check_configuration(c, w.genus)
    v = np.asarray(v, dtype=complex)
    single = v.ndim == 3
    V = v[None] if single else v
    if V.shape[1:] != c.shape:
        raise ValueError(f"tangent shape {v.shape} does not match configuration {c.shape}")
    E, xi = word_eval_diff(w.letters, c, _inverses(c), V)
    return E, (xi[0] if single else xi)


def moment_map(c: np.ndarray) -> np.ndarray:
    """Ordered product of commutators ``X1 X2 X1^-1 X2^-1 ... X_{2g-1} X_{2g} ...``."""
    c = np.asarray(c, dtype=complex)
    n = c.shape[-1]
    out = np.eye(n, dtype=complex)
    for j in range(c.shape[0] // 2):
        A, B = c[2 * j], c[2 * j + 1]
        out = out @ A @ B @ A.conj().T @ B.conj().T
    return out


def moment_jacobian(c: np.ndarray) -> np.ndarray:
    """Real matrix of the left-trivialized differential of the moment map.

    Rows index su(n) coordinates of the output, columns the factor-major
    basis directions of the input.
    """
    m, n = c.shape[0], c.shape[-1]
    g = m // 2
    B = _basis(n)
    d = len(B)
    V = np.zeros((m * d, m, n, n), dtype=complex)
    for f in range(m):
        V[f * d:(f + 1) * d, f] = B
    xi = word_differential(relator(g), c, V)
    return to_coords(xi).T


def jacobian_rank(c: np.ndarray, beta: Optional[np.ndarray] = None, tol: float = 1e-8,
                  fiber_tol: float = 1e-8) -> int:
    c = np.asarray(c, dtype=complex)
    if beta is not None and np.linalg.norm(moment_map(c) - beta) > fiber_tol:
        raise FiberError("configuration is not on the fiber over beta")
    s = np.linalg.svd(moment_jacobian(c), compute_uv=False)
    return int(np.sum(s > tol))


def conjugate(c: np.ndarray, k: np.ndarray) -> np.ndarray:
    return k @ c @ k.conj().T


def retract(c: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Right-exponential retraction ``X_i -> X_i exp(delta_i)``."""
    return c @ expm(delta)


# --- fiber projection --------------------------------------------------------


@dataclass
class FiberProjection:
    configuration: np.ndarray
    converged: bool
    iterations: int
    residual: float
    message: str = ""
    history: list = field(default_factory=list)


def fiber_residual(c: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """``logm(beta^-1 Phi(c))`` as an su(n) matrix."""
    return logm(beta.conj().T @ moment_map(c))


def project_to_fiber(start: np.ndarray, beta: np.ndarray, max_iter: int = 50, tol: float = 1e-10,
                     rcond: float = 1e-8, min_step: float = 2.0 ** -30) -> FiberProjection:
    """Gauss-Newton on the fiber residual with a pseudo-inverse step.

    Step length is halved whenever the residual grows or the logarithm hits
    its branch cut. Failures are returned with ``converged=False``, never raised.
    """
    c = np.array(start, dtype=complex)
    m, n = c.shape[0], c.shape[-1]
    try:
        r = fiber_residual(c, beta)
    except BranchCutError as exc:
        return FiberProjection(c, False, 0, float("inf"), f"start on the logarithm branch cut: {exc}")
    rnorm = float(np.linalg.norm(r))
    history = [rnorm]
    if rnorm <= tol:
        return FiberProjection(c, True, 0, rnorm, "already on fiber", history)

    for it in range(1, max_iter + 1):
        J = moment_jacobian(c)
        s = np.linalg.svd(J, compute_uv=False)
        if s.size == 0 or s[0] <= rcond:
            return FiberProjection(c, False, it - 1, rnorm, "differential vanishes (critical point)", history)
        step = -np.linalg.pinv(J, rcond=rcond) @ to_coords(r)
        delta = from_coords(step.reshape(m, -1), n)
        t = 1.0
        while True:
            trial = retract(c, t * delta)
            try:
                r_trial = fiber_residual(trial, beta)
                trial_norm = float(np.linalg.norm(r_trial))
            except BranchCutError:
                trial_norm = float("inf")
            if trial_norm < rnorm:
                break
            t *= 0.5
            if t < min_step:
                return FiberProjection(c, False, it, rnorm, "damping exhausted without descent", history)
        c, r, rnorm = trial, r_trial, trial_norm
        history.append(rnorm)
        if rnorm <= tol:
            return FiberProjection(c, True, it, rnorm, "converged", history)
    return FiberProjection(c, False, max_iter, rnorm, "max_iter reached", history)


# --- JSON -------------------------------------------------------------------


def configuration_to_json(c: np.ndarray) -> str:
    return json.dumps([[[[z.real, z.imag] for z in row] for row in M] for M in np.asarray(c)])


def configuration_from_json(text: str) -> np.ndarray:
    data = np.array(json.loads(text), dtype=float)
    return data[..., 0] + 1j * data[..., 1]


# --- fixtures ----------------------------------------------------------------


def quaternion_pair() -> tuple[np.ndarray, np.ndarray]:
    """Two anticommuting SU(2) elements whose commutator is ``-I``."""
    return np.diag([1j, -1j]), np.array([[0, 1], [-1, 0]], dtype=complex)


def clock_shift_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    """SU(n) pair with commutator a generator of the centre; n=2 gives the quaternion pair."""
    if n == 2:
        return quaternion_pair()
    w = np.exp(2j * np.pi / n)
    clock = np.diag(w ** np.arange(n))
    shift = np.roll(np.eye(n), 1, axis=0).astype(complex)
    # fix determinants into SU(n)
    clock = clock / np.linalg.det(clock) ** (1.0 / n)
    shift = shift / np.linalg.det(shift) ** (1.0 / n)
    return clock, shift


def fixture_configuration(g: int, n: int = 2) -> np.ndarray:
    """``(A, B, I, ..., I)`` with ``(A, B)`` from :func:`clock_shift_pair`."""
    a, b = clock_shift_pair(n)
    c = np.array([np.eye(n, dtype=complex)] * (2 * g))
    c[0], c[1] = a, b
    return c


def quaternion_configuration(g: int) -> np.ndarray:
    return fixture_configuration(g, 2)


def random_torus_element(rng: np.random.Generator, k: np.ndarray) -> np.ndarray:
    n = k.shape[0]
    phases = rng.uniform(-np.pi, np.pi, n)
    phases -= phases.mean()
    return k @ np.diag(np.exp(1j * phases)) @ k.conj().T


def random_fiber_point(rng: np.random.Generator, g: int, n: int = 2) -> np.ndarray:
    """Point in the fiber over ``moment_map(fixture_configuration(g, n))``.

    Conjugated fixture pair, followed by commuting pairs from a common random torus.
    """
    c = fixture_configuration(g, n)
    for j in range(1, g):
        k = haar_sample(rng, n)
        c[2 * j] = random_torus_element(rng, k)
        c[2 * j + 1] = random_torus_element(rng, k)
    return conjugate(c, haar_sample(rng, n))


def perturb(c: np.ndarray, rng: np.random.Generator, size: float) -> np.ndarray:
    """Right-multiply by ``exp(xi)`` with total Frobenius norm of ``xi`` equal to ``size``."""
    xi = random_algebra(rng, (c.shape[0],), c.shape[-1])
    xi *= size / np.linalg.norm(xi)
    return retract(c, xi)
