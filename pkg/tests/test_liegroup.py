import numpy as np
import pytest

from foxforms import liegroup as lg
from foxforms.freegroup import Word, parse_word, reduce, relator


def rand_word(rng, g, max_len=12):
    k = int(rng.integers(0, max_len + 1))
    return reduce([int(s) * int(i) for s, i in zip(rng.choice([-1, 1], k), rng.integers(1, 2 * g + 1, k))], g)


# --- points, exp, log, Haar -------------------------------------------------------

def test_basis_orthonormal():
    for n in (2, 3):
        B = lg.algebra_basis(n)
        assert len(B) == n * n - 1
        gram = np.einsum("aij,bij->ab", B.conj(), B).real
        assert np.allclose(gram, np.eye(len(B)), atol=1e-14)
        assert all(lg.is_algebra_element(b) for b in B)


def test_exp_log_roundtrip(rng):
    for n in (2, 3):
        xi = lg.random_algebra(rng, (20,), n) * 0.5
        U = lg.expm(xi)
        for u, x in zip(U, xi):
            assert lg.is_group_point(u)
            assert np.allclose(lg.logm(u), x, atol=1e-12)


def test_logm_branch_cut():
    with pytest.raises(lg.BranchCutError):
        lg.logm(-np.eye(2, dtype=complex))


def test_haar_invariants_and_determinism():
    for n in (2, 3):
        U = lg.haar_sample(11, n)
        assert lg.is_group_point(U)
        assert np.array_equal(U, lg.haar_sample(11, n))


def test_haar_trace_moments():
    # Weyl integration on SU(2): E tr U = 0 and E |tr U|^2 = 1
    rng = np.random.default_rng(5)
    tr = np.array([np.trace(lg.haar_sample(rng)) for _ in range(10_000)])
    assert abs(tr.mean()) < 0.05
    assert abs(np.mean(np.abs(tr) ** 2) - 1) < 0.05


# --- word evaluation ------------------------------------------------------------------

def test_evaluate_word_examples(rng):
    c = lg.haar_configuration(rng, 4)
    assert np.array_equal(lg.evaluate_word(Word.identity(2), c), np.eye(2))
    assert np.allclose(lg.evaluate_word(Word.generator(1, 2), c), c[0], atol=1e-15)
    assert np.allclose(lg.evaluate_word(relator(2), c), lg.moment_map(c), atol=1e-13)


def test_evaluate_word_is_homomorphism(rng):
    for _ in range(200):
        g = int(rng.integers(1, 4))
        c = lg.haar_configuration(rng, 2 * g)
        u, v = rand_word(rng, g), rand_word(rng, g)
        assert np.linalg.norm(lg.evaluate_word(u * v, c) - lg.evaluate_word(u, c) @ lg.evaluate_word(v, c)) < 1e-12


def test_word_differential_examples(rng):
    c = lg.haar_configuration(rng, 2)
    v = lg.random_algebra(rng, (2,))
    assert np.allclose(lg.word_differential(Word.generator(1, 1), c, v), v[0])
    assert np.array_equal(lg.word_differential(Word.identity(1), c, v), np.zeros((2, 2)))


def _fd_differential(w, c, v, h=1e-5):
    E = lg.evaluate_word(w, c)
    plus = lg.evaluate_word(w, lg.retract(c, h * v))
    minus = lg.evaluate_word(w, lg.retract(c, -h * v))
    return E.conj().T @ (plus - minus) / (2 * h)


def test_word_differential_matches_finite_difference(rng, backend):
    for _ in range(200):
        g = int(rng.integers(1, 4))
        c = lg.haar_configuration(rng, 2 * g)
        v = lg.random_algebra(rng, (2 * g,))
        v /= np.linalg.norm(v)
        w = rand_word(rng, g)
        exact = lg.word_differential(w, c, v)
        fd = _fd_differential(w, c, v)
        assert np.linalg.norm(exact - fd) <= 1e-8 * max(1.0, np.linalg.norm(exact))


def test_word_differential_cocycle(rng):
    for _ in range(200):
        g = 2
        c = lg.haar_configuration(rng, 2 * g)
        v = lg.random_algebra(rng, (2 * g,))
        u, w = rand_word(rng, g), rand_word(rng, g)
        ev = lg.evaluate_word(w, c)
        lhs = lg.word_differential(u * w, c, v)
        rhs = ev.conj().T @ lg.word_differential(u, c, v) @ ev + lg.word_differential(w, c, v)
        assert np.linalg.norm(lhs - rhs) < 1e-12


def test_word_differential_batched(rng):
    c = lg.haar_configuration(rng, 4)
    V = lg.random_algebra(rng, (5, 4))
    w = rand_word(rng, 2) * relator(2)
    batched = lg.word_differential(w, c, V)
    for k in range(5):
        assert np.allclose(batched[k], lg.word_differential(w, c, V[k]), atol=1e-14)
    with pytest.raises(ValueError):
        lg.word_differential(w, c, V[:, :3])


# --- moment map -----------------------------------------------------------------------

def test_moment_map_identity_and_quaternion_fixture():
    assert np.array_equal(lg.moment_map(np.array([np.eye(2)] * 4, dtype=complex)), np.eye(2))
    # i j i^-1 j^-1 = k k = -1 for unit quaternions i = diag(i,-i), j = [[0,1],[-1,0]]
    i, j = lg.quaternion_pair()
    assert np.allclose(i @ j, -j @ i)
    assert np.linalg.norm(lg.moment_map(np.array([i, j])) + np.eye(2)) <= 1e-12


def test_moment_map_equivariance_and_abelian(rng):
    for _ in range(50):
        c = lg.haar_configuration(rng, 4)
        k = lg.haar_sample(rng)
        lhs = lg.moment_map(lg.conjugate(c, k))
        rhs = k @ lg.moment_map(c) @ k.conj().T
        assert np.linalg.norm(lhs - rhs) <= 1e-12
        assert abs(np.linalg.det(lg.moment_map(c)) - 1) <= 1e-12
        diag = np.array([np.diag(np.exp(1j * np.array([a, -a]))) for a in rng.uniform(-3, 3, 4)])
        assert np.linalg.norm(lg.moment_map(diag) - np.eye(2)) <= 1e-12


def test_fiber_conjugation_invariant(rng):
    beta = lg.central_element(1, 2)
    for _ in range(20):
        c = lg.random_fiber_point(rng, 2)
        assert np.linalg.norm(lg.moment_map(c) - beta) <= 1e-12
        k = lg.haar_sample(rng)
        assert np.linalg.norm(lg.moment_map(lg.conjugate(c, k)) - beta) <= 1e-12


# --- jacobian rank -------------------------------------------------------------------

def _fd_jacobian_rank(c, h=1e-6, tol=1e-6):
    cols = []
    m = c.shape[0]
    for f in range(m):
        for b in lg.algebra_basis(2):
            d = np.zeros_like(c)
            d[f] = b
            plus, minus = lg.moment_map(lg.retract(c, h * d)), lg.moment_map(lg.retract(c, -h * d))
            cols.append(lg.to_coords(lg.moment_map(c).conj().T @ (plus - minus) / (2 * h)))
    return int(np.sum(np.linalg.svd(np.array(cols).T, compute_uv=False) > tol))


def test_jacobian_rank_fixtures():
    beta = -np.eye(2)
    c1 = lg.quaternion_configuration(1)
    c2 = lg.quaternion_configuration(2)
    assert lg.jacobian_rank(c1, beta) == 3 == _fd_jacobian_rank(c1)
    assert lg.jacobian_rank(c2, beta) == 3 == _fd_jacobian_rank(c2)
    ident = np.array([np.eye(2)] * 4, dtype=complex)
    assert lg.jacobian_rank(ident, np.eye(2)) == 0 == _fd_jacobian_rank(ident)


def test_jacobian_rank_off_fiber():
    with pytest.raises(lg.FiberError):
        lg.jacobian_rank(lg.quaternion_configuration(1), np.eye(2))


# --- fiber projection -----------------------------------------------------------------

def test_projection_already_on_fiber():
    c = lg.quaternion_configuration(1)
    res = lg.project_to_fiber(c, -np.eye(2))
    assert res.converged and res.iterations == 0
    assert np.array_equal(res.configuration, c)


def test_projection_from_perturbed_quaternion_point(rng):
    base = lg.quaternion_configuration(1)
    for _ in range(10):
        start = lg.perturb(base, rng, 1e-2)
        res = lg.project_to_fiber(start, -np.eye(2), max_iter=10)
        assert res.converged and res.residual <= 1e-10 and res.iterations <= 10
        assert all(lg.is_group_point(x) for x in res.configuration)
        assert np.linalg.norm(lg.moment_map(res.configuration) + np.eye(2)) <= 1e-9


def test_projection_from_identity_never_silent():
    res = lg.project_to_fiber(np.array([np.eye(2)] * 2, dtype=complex), -np.eye(2))
    assert not res.converged
    assert res.message


def test_projection_from_random_start_reports(rng):
    # far starts either converge for real or say why they stopped
    for _ in range(5):
        res = lg.project_to_fiber(lg.haar_configuration(rng, 4), -np.eye(2), max_iter=50)
        if res.converged:
            assert np.linalg.norm(lg.moment_map(res.configuration) + np.eye(2)) <= 1e-9
        else:
            assert res.message


def test_configuration_json_roundtrip(rng):
    c = lg.haar_configuration(rng, 4)
    assert np.array_equal(lg.configuration_from_json(lg.configuration_to_json(c)), c)
