import itertools
import json
import random

import numpy as np
import pytest

from foxforms import barcomplex as bar
from foxforms.freegroup import Word, parse_word, reduce, relator, telescope
from foxforms.surfacegroup import UnsupportedGenusError

G = 2


def random_word(rnd, g=G, max_len=6):
    return reduce([rnd.choice([1, -1]) * rnd.randint(1, 2 * g) for _ in range(rnd.randint(0, max_len))], g)


def test_face_examples():
    F = bar.free_group_oracle(G)
    a, b = parse_word("x1", G), parse_word("x2 x3", G)
    assert bar.face(1, (a, b), F) == (a * b,)
    assert bar.face(0, (a, b), F) == (b,)
    assert bar.face(2, (a, b), F) == (a,)
    with pytest.raises(IndexError):
        bar.face(3, (a, b), F)


def test_boundary_example():
    F = bar.free_group_oracle(G)
    a, b = parse_word("x1", G), parse_word("x4", G)
    d = bar.boundary(bar.BarChain(2, F, [((a, b), 1)]))
    assert d.equals(bar.BarChain(1, F, [((b,), 1), ((a * b,), -1), ((a,), 1)]))


def test_boundary_squared_random():
    F = bar.free_group_oracle(G)
    rnd = random.Random(0)
    for _ in range(1000):
        m = rnd.randint(2, 4)
        c = bar.BarChain(m, F, [(tuple(random_word(rnd) for _ in range(m)), rnd.randint(-3, 3))
                                for _ in range(rnd.randint(1, 3))])
        assert bar.boundary(bar.boundary(c)).is_zero()


def test_face_identities_random():
    F = bar.free_group_oracle(G)
    rnd = random.Random(1)
    for _ in range(500):
        m = rnd.randint(2, 4)
        t = tuple(random_word(rnd) for _ in range(m))
        for j in range(1, m + 1):
            for i in range(j):
                assert bar.face(i, bar.face(j, t, F), F) == bar.face(j - 1, bar.face(i, t, F), F)


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_fundamental_boundary_over_free_group(g):
    F = bar.free_group_oracle(g)
    d = bar.boundary(bar.fundamental_chain(g, F))
    # the boundary is the negative of the telescoped sum: (1) - (R)
    assert d.equals(-bar.relator_endpoints(g, F))
    as_sum = {t[0]: c for t, c in d.terms()}
    assert as_sum == {w: -c for w, c in telescope(g).terms.items()}


@pytest.mark.parametrize("g", [2, 3, 4])
def test_fundamental_chain_is_cycle_over_surface_group(g):
    assert bar.is_cycle_mod_relator(g)
    Pi = bar.surface_group_oracle(g)
    assert bar.boundary(bar.fundamental_chain(g, Pi)).is_zero()


def test_not_a_cycle_over_free_group():
    for g in (2, 3):
        F = bar.free_group_oracle(g)
        assert not bar.boundary(bar.fundamental_chain(g, F)).is_zero()


def test_cycle_needs_genus_two():
    with pytest.raises(UnsupportedGenusError):
        bar.is_cycle_mod_relator(1)


def test_coboundary_indices():
    assert bar.coboundary_indices(1) == [(1, 0), (-1, 1), (1, 2)]
    assert bar.coboundary_indices(0) == [(1, 0), (-1, 1)]


def test_pairing_duality_over_finite_group():
    # <delta f, c> = <f, dc> on Z/5, every q-cochain sampled as a random table
    Z = bar.cyclic_group_oracle(5)
    rnd = random.Random(2)
    for q in (1, 2, 3):
        for _ in range(20):
            table = {t: rnd.randint(-4, 4) for t in itertools.product(range(5), repeat=q)}
            f = lambda t: table[t]
            c = bar.BarChain(q + 1, Z, [(tuple(rnd.randrange(5) for _ in range(q + 1)), rnd.randint(-3, 3))
                                        for _ in range(4)])
            lhs = bar.pair(bar.coboundary(f, q, Z), c)
            rhs = bar.pair(f, bar.boundary(c))
            assert lhs == rhs


def test_delta_squared_zero_on_finite_group():
    Z = bar.cyclic_group_oracle(3)
    rnd = random.Random(3)
    table = {t: rnd.randint(-4, 4) for t in itertools.product(range(3), repeat=1)}
    dd = bar.coboundary(bar.coboundary(lambda t: table[t], 1, Z), 2, Z)
    assert all(dd(t) == 0 for t in itertools.product(range(3), repeat=3))


def test_matrix_oracle_collection(rng):
    from foxforms.liegroup import haar_sample

    M = bar.matrix_group_oracle(2)
    a, b, c = (haar_sample(rng) for _ in range(3))
    chain = bar.BarChain(3, M, [((a, b, c), 1)])
    assert bar.boundary(bar.boundary(chain)).is_zero()
    # tolerance equality merges numerically equal entries
    near = bar.BarChain(1, M, [((a,), 1), ((a + 1e-12,), -1)])
    assert near.is_zero()


def test_homogeneous_projection_commutes_with_faces():
    F = bar.free_group_oracle(G)
    rnd = random.Random(4)
    for _ in range(100):
        m = rnd.randint(2, 4)
        ks = tuple(random_word(rnd) for _ in range(m + 1))
        q = bar.homogeneous_to_inhomogeneous(ks, F)
        assert len(q) == m
        for i in range(m + 1):
            dropped = ks[:i] + ks[i + 1:]
            assert bar.homogeneous_to_inhomogeneous(dropped, F) == bar.face(i, q, F)


def test_chain_json_roundtrip():
    F = bar.free_group_oracle(3)
    c = bar.fundamental_chain(3, F)
    text = bar.chain_to_json(c)
    rows = json.loads(text)
    assert {"coefficient", "tuple"} == set(rows[0])
    assert bar.chain_from_json(text, 3, F).equals(c)
