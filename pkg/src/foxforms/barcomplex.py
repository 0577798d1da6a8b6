"""Inhomogeneous bar complex: face maps, boundary, coboundary signs.

Chains are parameterized by a :class:`GroupOracle`, so the same code runs over
the free group (exact), the surface group (exact, Dehn) and matrix groups
(tolerance equality).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Optional, Sequence

import numpy as np

from foxforms.freegroup import Word, format_word, fundamental_cycle, parse_word, relator
from foxforms.surfacegroup import equal_in_surface_group, surface_presentation, _require_dehn


@dataclass(frozen=True)
class GroupOracle:
    name: str
    multiply: Callable[[Any, Any], Any]
    invert: Callable[[Any], Any]
    identity: Any
    equals: Callable[[Any, Any], bool]
    # canonical hashable form when equality is syntactic; enables dict collection
    key: Optional[Callable[[Any], Hashable]] = None


def free_group_oracle(g: int) -> GroupOracle:
    return GroupOracle(
        name=f"F{2 * g}",
        multiply=lambda a, b: a * b,
        invert=lambda a: ~a,
        identity=Word.identity(g),
        equals=lambda a, b: a == b,
        key=lambda a: a,
    )


def surface_group_oracle(g: int) -> GroupOracle:
    p = surface_presentation(g)
    _require_dehn(p, Word.identity(g))
    return GroupOracle(
        name=f"Pi{g}",
        multiply=lambda a, b: a * b,
        invert=lambda a: ~a,
        identity=Word.identity(g),
        equals=lambda a, b: equal_in_surface_group(a, b, p),
    )


def matrix_group_oracle(n: int = 2, tol: float = 1e-9) -> GroupOracle:
    return GroupOracle(
        name=f"U({n})",
        multiply=lambda a, b: a @ b,
        invert=lambda a: np.linalg.inv(a),
        identity=np.eye(n, dtype=complex),
        equals=lambda a, b: bool(np.linalg.norm(a - b) <= tol),
    )


def cyclic_group_oracle(order: int) -> GroupOracle:
    """Z/order; small finite group for brute-force pairing checks."""
    return GroupOracle(
        name=f"Z{order}",
        multiply=lambda a, b: (a + b) % order,
        invert=lambda a: (-a) % order,
        identity=0,
        equals=lambda a, b: a == b,
        key=lambda a: a,
    )


def face(i: int, tup: Sequence, oracle: GroupOracle) -> tuple:
    m = len(tup)
    if m < 1 or not 0 <= i <= m:
        raise IndexError(f"face index {i} out of range for degree {m}")
    if i == 0:
        return tuple(tup[1:])
    if i == m:
        return tuple(tup[:-1])
    return tuple(tup[: i - 1]) + (oracle.multiply(tup[i - 1], tup[i]),) + tuple(tup[i + 1:])


class BarChain:
    """Integer combination of m-tuples of group elements, collected under ``oracle.equals``."""

    def __init__(self, degree: int, oracle: GroupOracle, terms=()):
        self.degree = degree
        self.oracle = oracle
        self._reps: list[tuple] = []
        self._coeffs: list[int] = []
        self._index: dict = {}
        for tup, c in terms:
            self.add(tuple(tup), c)

    def _tuple_key(self, tup):
        return tuple(self.oracle.key(x) for x in tup)

    def _same(self, s, t) -> bool:
        return all(self.oracle.equals(a, b) for a, b in zip(s, t))

    def add(self, tup: tuple, c: int) -> None:
        if len(tup) != self.degree:
            raise ValueError(f"tuple of length {len(tup)} in a degree-{self.degree} chain")
        if c == 0:
            return
        if self.oracle.key is not None:
            k = self._tuple_key(tup)
            pos = self._index.get(k)
            if pos is None:
                self._index[k] = len(self._reps)
                self._reps.append(tup)
                self._coeffs.append(c)
            else:
                self._coeffs[pos] += c
            return
        for pos, rep in enumerate(self._reps):
            if self._same(rep, tup):
                self._coeffs[pos] += c
                return
        self._reps.append(tup)
        self._coeffs.append(c)

    def terms(self) -> list[tuple[tuple, int]]:
        return [(t, c) for t, c in zip(self._reps, self._coeffs) if c != 0]

    def is_zero(self) -> bool:
        return not self.terms()

    def __len__(self) -> int:
        return len(self.terms())

    def __add__(self, other: "BarChain") -> "BarChain":
        out = BarChain(self.degree, self.oracle, self.terms())
        for t, c in other.terms():
            out.add(t, c)
        return out

    def __neg__(self) -> "BarChain":
        return BarChain(self.degree, self.oracle, [(t, -c) for t, c in self.terms()])

    def __sub__(self, other: "BarChain") -> "BarChain":
        return self + (-other)

    def equals(self, other: "BarChain") -> bool:
        return self.degree == other.degree and (self - other).is_zero()

    def __repr__(self) -> str:
        return f"BarChain(degree={self.degree}, terms={self.terms()!r})"


def boundary(c: BarChain) -> BarChain:
    """Alternating sum of faces."""
    if c.degree < 1:
        raise ValueError("boundary needs degree >= 1")
    out = BarChain(c.degree - 1, c.oracle)
    for tup, coeff in c.terms():
        for i in range(c.degree + 1):
            out.add(face(i, tup, c.oracle), (-1) ** i * coeff)
    return out


def coboundary_indices(q: int) -> list[tuple[int, int]]:
    """Signed face list ``((-1)^i, i)`` for i = 0..q+1."""
    if q < 0:
        raise ValueError("degree must be >= 0")
    return [((-1) ** i, i) for i in range(q + 2)]


def coboundary(f: Callable[[tuple], float], q: int, oracle: GroupOracle) -> Callable[[tuple], float]:
    """Cochain coboundary on (q+1)-tuples, built from :func:`coboundary_indices`."""

    def delta_f(tup):
        return sum(s * f(face(i, tup, oracle)) for s, i in coboundary_indices(q))

    return delta_f


def pair(f: Callable[[tuple], float], c: BarChain) -> float:
    return sum(coeff * f(t) for t, coeff in c.terms())


def fundamental_chain(g: int, oracle: GroupOracle) -> BarChain:
    return BarChain(2, oracle, [(pr, s) for s, pr in fundamental_cycle(g)])


def is_cycle_mod_relator(g: int) -> bool:
    """Whether the boundary of the fundamental 2-chain vanishes in the surface group."""
    return boundary(fundamental_chain(g, surface_group_oracle(g))).is_zero()


def relator_endpoints(g: int, oracle: GroupOracle) -> BarChain:
    """The 1-chain ``(R) - (1)``."""
    return BarChain(1, oracle, [((relator(g),), 1), ((Word.identity(g),), -1)])


def homogeneous_to_inhomogeneous(ks: Sequence, oracle: GroupOracle) -> tuple:
    """Projection from the homogeneous model: ``(k0..km) -> (k0 k1^-1, ..., k_{m-1} k_m^-1)``.

    Conversion helper only; every computation here lives in the inhomogeneous model.
    """
    return tuple(oracle.multiply(ks[j], oracle.invert(ks[j + 1])) for j in range(len(ks) - 1))


# --- JSON -------------------------------------------------------------------


def chain_to_json(c: BarChain) -> str:
    rows = [{"coefficient": coeff, "tuple": [format_word(w) for w in t]} for t, coeff in c.terms()]
    return json.dumps(rows)


def chain_from_json(text: str, g: int, oracle: GroupOracle) -> BarChain:
    rows = json.loads(text)
    if not rows:
        raise ValueError("empty chain has no recoverable degree")
    degree = len(rows[0]["tuple"])
    return BarChain(
        degree,
        oracle,
        [(tuple(parse_word(s, g) for s in row["tuple"]), int(row["coefficient"])) for row in rows],
    )
