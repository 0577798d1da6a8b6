"""Word problem in the closed surface group via Dehn's algorithm."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from foxforms.freegroup import Word, abelianize, check_genus, invert, relator


class UnsupportedGenusError(ValueError):
    """Dehn's algorithm needs the small-cancellation regime, genus >= 2."""


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int
    relator_cyclic_forms: tuple[tuple[int, ...], ...]

    @property
    def relator_length(self) -> int:
        return 4 * self.genus


@lru_cache(maxsize=None)
def surface_presentation(g: int) -> SurfacePresentation:
    check_genus(g)
    forms = []
    for r in (relator(g).letters, invert(relator(g)).letters):
        for k in range(len(r)):
            forms.append(r[k:] + r[:k])
    return SurfacePresentation(g, tuple(forms))


def _require_dehn(p: SurfacePresentation, w: Word) -> None:
    if w.genus != p.genus:
        raise ValueError(f"genus mismatch: word {w.genus}, presentation {p.genus}")
    if p.genus < 2:
        raise UnsupportedGenusError("Dehn's algorithm is not valid for the genus-1 relator")


def _free_reduce(letters: list[int]) -> list[int]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return out


def _cyclic_reduce(letters: list[int]) -> list[int]:
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == -letters[hi - 1]:
        lo += 1
        hi -= 1
    return letters[lo:hi]


def _find_match(w: list[int], p: SurfacePresentation, cyclic: bool):
    """Leftmost start, longest piece of a relator form longer than half of it."""
    half = 2 * p.genus
    n = len(w)
    for start in range(n):
        best_len, best_form = 0, None
        for form in p.relator_cyclic_forms:
            k = 0
            limit = len(form) if cyclic else min(len(form), n - start)
            limit = min(limit, n)
            while k < limit and w[(start + k) % n] == form[k]:
                k += 1
            if k > best_len:
                best_len, best_form = k, form
        if best_len > half:
            return start, best_len, best_form
    return None


def dehn_reduce(w: Word, p: SurfacePresentation, cyclic: bool = False) -> Word:
    """Shorten ``w`` by Dehn replacements until none applies.

    A subword ``s`` with ``r = s t`` for a stored relator form ``r`` and
    ``len(s) > 2g`` is replaced by ``t^-1``. In the default mode the result
    equals ``w`` in the surface group. With ``cyclic=True`` the word is
    cyclically reduced before every scan and matches may wrap around, so the
    result is only a conjugate of ``w``; triviality is unaffected.
    """
    _require_dehn(p, w)
    cur = list(w.letters)
    while True:
        if cyclic:
            cur = _cyclic_reduce(cur)
        m = _find_match(cur, p, cyclic)
        if m is None:
            return Word(tuple(cur), w.genus)
        start, k, form = m
        replacement = [-a for a in reversed(form[k:])]
        n = len(cur)
        if start + k <= n:
            cur = cur[:start] + replacement + cur[start + k:]
        else:
            # wrapped match: rotate so the piece starts at 0 (conjugation)
            rotated = cur[start:] + cur[:start]
            cur = replacement + rotated[k:]
        new = _free_reduce(cur)
        assert len(new) < n
        cur = new


def is_trivial(w: Word, p: SurfacePresentation | None = None) -> bool:
    p = p if p is not None else surface_presentation(w.genus)
    return not dehn_reduce(w, p, cyclic=True).letters


def equal_in_surface_group(u: Word, v: Word, p: SurfacePresentation | None = None) -> bool:
    return is_trivial(u * invert(v), p)


def abelian_image_is_zero(w: Word) -> bool:
    return not any(abelianize(w))
