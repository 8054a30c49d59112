"""Weyl group actions on Dynkin-label weights."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rootsys import RootSystem, Weight


class OrbitTooLarge(RuntimeError):
    """Raised when an orbit would exceed the caller's cap."""


@dataclass(frozen=True)
class OrbitReport:
    representative: Weight
    size: int
    elements: tuple[Weight, ...] | None = None


def reflect(rs: RootSystem, w: Sequence[int], i: int) -> Weight:
    """Simple reflection ``s_i`` (1-based index) applied to ``w``."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"reflection index {i} out of range 1..{rs.rank}")
    return _reflect0(rs, tuple(w), i - 1)


def _reflect0(rs: RootSystem, w: Weight, i: int) -> Weight:
    c = w[i]
    if c == 0:
        return w
    cartan = rs.cartan
    return tuple(x - c * cartan[j][i] for j, x in enumerate(w))


def to_dominant(rs: RootSystem, w: Sequence[int]) -> tuple[Weight, int, int]:
    """Dominant Weyl conjugate of ``w`` with the sign and length of the reflection word.

    Reflects at the most negative label (lowest index on ties) until no
    label is negative.  The sign is ``(-1)**length``, except that it is 0
    when ``w`` is fixed by some reflection, i.e. when the dominant
    representative has a zero label.
    """
    w = tuple(w)
    if len(w) != rs.rank:
        raise ValueError(f"weight length mismatch: expected {rs.rank}, got {len(w)}")
    length = 0
    while True:
        low = min(w)
        if low >= 0:
            break
        i = w.index(low)
        w = _reflect0(rs, w, i)
        length += 1
    sign = 0 if 0 in w else (-1) ** length
    return w, sign, length


def dominant(rs: RootSystem, w: Sequence[int]) -> Weight:
    """Dominant Weyl conjugate of ``w``."""
    w = tuple(w)
    while True:
        low = min(w)
        if low >= 0:
            return w
        w = _reflect0(rs, w, w.index(low))


def dagger(rs: RootSystem, lam: Sequence[int]) -> Weight:
    """The dual weight ``-w0(lam)``, i.e. the dominant conjugate of ``-lam``."""
    lam = tuple(lam)
    if len(lam) != rs.rank:
        raise ValueError(f"weight length mismatch: expected {rs.rank}, got {len(lam)}")
    if any(x < 0 for x in lam):
        raise ValueError(f"dagger needs a dominant weight, got {lam}")
    return dominant(rs, tuple(-x for x in lam))


def orbit(rs: RootSystem, w: Sequence[int], cap: int = 10**6, keep: bool = True) -> OrbitReport:
    """Weyl orbit of ``w``.

    Elements are generated from the dominant representative by reflecting
    only along positive labels, which walks each orbit element once per
    incoming edge; a set removes repeats.  Raises :class:`OrbitTooLarge`
    instead of truncating.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    rep = dominant(rs, w)
    seen = {rep}
    frontier = [rep]
    while frontier:
        nxt = []
        for v in frontier:
            for i, c in enumerate(v):
                if c > 0:
                    u = _reflect0(rs, v, i)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
        if len(seen) > cap:
            raise OrbitTooLarge(f"orbit of {rep} exceeds cap {cap}")
        frontier = nxt
    elements = tuple(sorted(seen, reverse=True)) if keep else None
    return OrbitReport(rep, len(seen), elements)


def orbit_with_signs(rs: RootSystem, w: Sequence[int], cap: int = 10**6) -> list[tuple[Weight, int]]:
    """Orbit of a regular dominant weight paired with ``det`` of the Weyl element reaching it.

    For a regular weight the orbit is a torsor for the Weyl group, so each
    element carries a well-defined sign; the sign flips on every reflection
    step away from the dominant chamber.
    """
    rep = tuple(w)
    if any(x <= 0 for x in rep):
        raise ValueError(f"signed orbits need a regular dominant weight, got {rep}")
    signs = {rep: 1}
    frontier = [rep]
    while frontier:
        nxt = []
        for v in frontier:
            s = signs[v]
            for i, c in enumerate(v):
                if c > 0:
                    u = _reflect0(rs, v, i)
                    if u not in signs:
                        signs[u] = -s
                        nxt.append(u)
        if len(signs) > cap:
            raise OrbitTooLarge(f"orbit of {rep} exceeds cap {cap}")
        frontier = nxt
    return list(signs.items())
