"""Free group on 2g generators, Fox calculus and the surface-relator word tables.

Letters are stored as signed integers: ``k`` is ``x_k`` and ``-k`` is ``x_k^-1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Union

from foxforms.kernels import reduce_letters


class GenusError(ValueError):
    pass


class Letter(NamedTuple):
    index: int
    sign: int = 1

    def as_int(self) -> int:
        return self.index * self.sign


def check_genus(g: int) -> int:
    if not isinstance(g, int) or isinstance(g, bool) or g < 1:
        raise GenusError(f"genus must be an integer >= 1, got {g!r}")
    return g


LetterLike = Union[int, Letter, tuple]


def _letter_int(x: LetterLike) -> int:
    if isinstance(x, tuple):
        index, sign = x
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign}")
        return int(index) * sign
    return int(x)


@dataclass(frozen=True)
class Word:
    """Freely reduced word of the free group of rank ``2 * genus``."""

    letters: tuple[int, ...]
    genus: int

    def __post_init__(self):
        check_genus(self.genus)

    @classmethod
    def identity(cls, genus: int) -> "Word":
        return cls((), genus)

    @classmethod
    def generator(cls, i: int, genus: int, sign: int = 1) -> "Word":
        return reduce([Letter(i, sign)], genus)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return (Letter(abs(a), 1 if a > 0 else -1) for a in self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, genus={self.genus})"


def reduce(raw: Iterable[LetterLike], genus: int) -> Word:
    """Free reduction to the unique reduced representative."""
    check_genus(genus)
    letters = [_letter_int(x) for x in raw]
    rank = 2 * genus
    for a in letters:
        if a == 0 or abs(a) > rank:
            raise IndexError(f"generator index {abs(a)} out of range 1..{rank}")
    return Word(tuple(reduce_letters(letters)), genus)


def _same_genus(u: Word, v: Word) -> None:
    if u.genus != v.genus:
        raise GenusError(f"genus mismatch: {u.genus} vs {v.genus}")


def multiply(u: Word, v: Word) -> Word:
    _same_genus(u, v)
    a, b = u.letters, v.letters
    # cancel across the seam only; both halves are already reduced
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
        k += 1
    return Word(a[: len(a) - k] + b[k:], u.genus)


def invert(u: Word) -> Word:
    return Word(tuple(-a for a in reversed(u.letters)), u.genus)


def commutator(u: Word, v: Word) -> Word:
    return u * v * ~u * ~v


# --- word grammar -----------------------------------------------------------

_TOKEN = re.compile(r"\[|\]|,|x\d+(?:\^-?1)?|1")


def _token_letter(tok: str) -> int:
    if "^" in tok:
        base, exp = tok.split("^")
        k = int(base[1:])
        return k if exp == "1" else -k
    return int(tok[1:])


def parse_word(text: str, genus: int) -> Word:
    """Parse ``"x1 x2 x1^-1 x2^-1"``, ``"1"`` or ``"[x1,x2] [x3,x4]"``."""
    check_genus(genus)
    stripped = re.sub(r"\s+", " ", text.strip())
    pos = 0
    tokens = []
    while pos < len(stripped):
        if stripped[pos] == " ":
            pos += 1
            continue
        m = _TOKEN.match(stripped, pos)
        if m is None:
            raise ValueError(f"cannot parse word {text!r} at offset {pos}")
        tokens.append(m.group())
        pos = m.end()

    letters: list[int] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "[":
            if i + 4 >= len(tokens) or tokens[i + 2] != "," or tokens[i + 4] != "]":
                raise ValueError(f"malformed commutator in {text!r}")
            u, v = _token_letter(tokens[i + 1]), _token_letter(tokens[i + 3])
            letters += [u, v, -u, -v]
            i += 5
        elif tok == "1":
            i += 1
        elif tok in ("]", ","):
            raise ValueError(f"unexpected {tok!r} in {text!r}")
        else:
            letters.append(_token_letter(tok))
            i += 1
    return reduce(letters, genus)


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in w.letters)


# --- formal sums ------------------------------------------------------------


@dataclass(frozen=True)
class FormalWordSum:
    """Integer combination of reduced words; zero coefficients are never stored."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {w: int(c) for w, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def of(cls, *pairs: tuple[int, Word]) -> "FormalWordSum":
        acc: dict = {}
        for c, w in pairs:
            acc[w] = acc.get(w, 0) + c
        return cls(acc)

    def __add__(self, other: "FormalWordSum") -> "FormalWordSum":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, 0) + c
        return FormalWordSum(acc)

    def __neg__(self) -> "FormalWordSum":
        return FormalWordSum({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FormalWordSum") -> "FormalWordSum":
        return self + (-other)

    def left_multiply(self, u: Word) -> "FormalWordSum":
        acc: dict = {}
        for w, c in self.terms.items():
            uw = u * w
            acc[uw] = acc.get(uw, 0) + c
        return FormalWordSum(acc)

    def __rmul__(self, u: Word) -> "FormalWordSum":
        return self.left_multiply(u)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalWordSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, w: Word) -> int:
        return self.terms.get(w, 0)

    def sorted_terms(self) -> list[tuple[Word, int]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0].letters))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            sign = "+" if c > 0 else "-"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign} {mag}[{format_word(w)}]")
        return " ".join(parts).lstrip("+ ")


# --- Fox calculus -----------------------------------------------------------


def fox_derivative(w: Word, i: int) -> FormalWordSum:
    """Fox derivative of ``w`` with respect to ``x_i``.

    Walks the word once, keeping the current prefix: an ``x_i`` at position p
    contributes ``+[prefix]``, an ``x_i^-1`` contributes ``-[prefix x_i^-1]``.
    """
    if not 1 <= i <= 2 * w.genus:
        raise IndexError(f"generator index {i} out of range 1..{2 * w.genus}")
    acc: dict = {}
    prefix: list[int] = []
    for a in w.letters:
        if a == i:
            key = Word(tuple(prefix), w.genus)
            acc[key] = acc.get(key, 0) + 1
        elif a == -i:
            key = Word(tuple(prefix) + (a,), w.genus)
            acc[key] = acc.get(key, 0) - 1
        prefix.append(a)
    return FormalWordSum(acc)


# --- surface relator tables -------------------------------------------------


def relator(g: int) -> Word:
    check_genus(g)
    letters = []
    for j in range(1, g + 1):
        a, b = 2 * j - 1, 2 * j
        letters += [a, b, -a, -b]
    return reduce(letters, g)


def _check_index(i: int, g: int) -> None:
    check_genus(g)
    if not 1 <= i <= 2 * g:
        raise IndexError(f"generator index {i} out of range 1..{2 * g}")


def _check_tau(tau: int) -> None:
    if tau not in (0, 1):
        raise ValueError(f"tau must be 0 or 1, got {tau}")


def gamma(tau: int, i: int, g: int) -> Word:
    """Prefix words whose difference is the Fox derivative of the relator."""
    _check_tau(tau)
    _check_index(i, g)
    block = (i + 1) // 2
    a, b = 2 * block - 1, 2 * block
    base = []
    for l in range(1, block):
        base += [2 * l - 1, 2 * l, -(2 * l - 1), -2 * l]
    if i % 2 == 1:
        tail = [] if tau == 0 else [a, b, -a]
    else:
        tail = [a] if tau == 0 else [a, b, -a, -b]
    return reduce(base + tail, g)


def fundamental_cycle(g: int) -> list[tuple[int, tuple[Word, Word]]]:
    """Signed pairs ``(-1)^tau (gamma^tau_i, x_i)`` in generator order."""
    check_genus(g)
    out = []
    for i in range(1, 2 * g + 1):
        xi = Word.generator(i, g)
        for tau in (0, 1):
            out.append(((-1) ** tau, (gamma(tau, i, g), xi)))
    return out


def z_word(tau: int, i: int, l: int, g: int) -> Word:
    _check_tau(tau)
    _check_index(i, g)
    xi = Word.generator(i, g)
    if l == 0:
        return xi
    if l == 1:
        return gamma(tau, i, g) * xi
    if l == 2:
        return gamma(tau, i, g)
    raise ValueError(f"l must be 0, 1 or 2, got {l}")


def telescope_terms(g: int) -> list[tuple[int, Word]]:
    """The 12g signed z-words before collection."""
    check_genus(g)
    return [
        ((-1) ** (1 + tau + l), z_word(tau, i, l, g))
        for i in range(1, 2 * g + 1)
        for tau in (0, 1)
        for l in range(3)
    ]


def telescope(g: int) -> FormalWordSum:
    return FormalWordSum.of(*telescope_terms(g))


def z_identities(g: int) -> list[tuple[str, Word, Word]]:
    """The pairwise z-word coincidences driving the cancellation, one row per instance."""
    check_genus(g)
    rows = []
    for i in range(1, 2 * g + 1):
        rows.append((f"z0[{i},0]=z1[{i},0]", z_word(0, i, 0, g), z_word(1, i, 0, g)))
    for i in range(1, g + 1):
        rows.append((f"z1[{2*i},1]=z1[{2*i-1},2]", z_word(1, 2 * i, 1, g), z_word(1, 2 * i - 1, 2, g)))
        rows.append((f"z0[{2*i-1},1]=z0[{2*i},2]", z_word(0, 2 * i - 1, 1, g), z_word(0, 2 * i, 2, g)))
        rows.append((f"z0[{2*i},1]=z1[{2*i-1},1]", z_word(0, 2 * i, 1, g), z_word(1, 2 * i - 1, 1, g)))
    for i in range(1, g):
        rows.append((f"z0[{2*i+1},2]=z1[{2*i},2]", z_word(0, 2 * i + 1, 2, g), z_word(1, 2 * i, 2, g)))
    return rows


def abelianize(w: Word) -> list[int]:
    """Exponent-sum vector in Z^(2g)."""
    vec = [0] * (2 * w.genus)
    for a in w.letters:
        vec[abs(a) - 1] += 1 if a > 0 else -1
    return vec
