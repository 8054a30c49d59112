"""Root systems of simple and semisimple Lie algebras.

Weights are tuples of Dynkin labels (coordinates in the basis of
fundamental weights, Bourbaki numbering).  A semisimple system is the
concatenation of its simple components; labels are concatenated in the
same order.  The invariant form is normalized so that every long root
has squared length 2, hence ``(theta, theta) == 2`` on each component.

Everything here is exact: integers and :class:`fractions.Fraction`.
"""
from __future__ import annotations

import json
import os
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

Weight = tuple[int, ...]

_SERIES = "ABCDEFG"

# Order of the Weyl group for exceptional types.
_EXCEPTIONAL_WEYL_ORDER = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


class LieTypeError(ValueError):
    """Invalid (series, rank) combination or unparsable type string."""


@dataclass(frozen=True)
class LieType:
    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.components:
            raise LieTypeError("a Lie type needs at least one simple component")
        for series, rank in self.components:
            _check_component(series, rank)

    @classmethod
    def parse(cls, text: str) -> "LieType":
        """Parse strings like ``"E8"``, ``"A4+A4"`` or ``"a2+e6"``."""
        parts = [p.strip() for p in re.split(r"[+,]", text) if p.strip()]
        comps = []
        for part in parts:
            m = re.fullmatch(r"([A-Ga-g])(\d+)", part)
            if m is None:
                raise LieTypeError(f"cannot parse Lie type component {part!r}")
            comps.append((m.group(1).upper(), int(m.group(2))))
        return cls(tuple(comps))

    @property
    def is_simple(self) -> bool:
        return len(self.components) == 1

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.components)

    def __str__(self) -> str:
        return "+".join(f"{s}{r}" for s, r in self.components)


def _check_component(series: str, rank: int) -> None:
    if series not in _SERIES:
        raise LieTypeError(f"unknown series {series!r}")
    if not isinstance(rank, int) or rank < 1:
        raise LieTypeError(f"rank must be a positive integer, got {rank!r}")
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }[series]
    if not ok:
        raise LieTypeError(f"{series}{rank} is not a valid simple type")


def _simple_root_gram(series: str, n: int) -> list[list[Fraction]]:
    """Gram matrix ``(alpha_i, alpha_j)`` of the simple roots, long roots of length 2."""
    g = [[Fraction(0)] * n for _ in range(n)]

    def link(i, j, value):
        g[i][j] = g[j][i] = Fraction(value)

    lengths = [Fraction(2)] * n
    if series in "ABCD":
        chain = n - 1 if series == "D" else n
        for i in range(chain - 1):
            link(i, i + 1, -1)
        if series == "B":
            lengths[n - 1] = Fraction(1)
            for i in range(n - 2):
                link(i, i + 1, -1)
            link(n - 2, n - 1, -1)
        elif series == "C":
            lengths = [Fraction(1)] * (n - 1) + [Fraction(2)]
            for i in range(n - 2):
                link(i, i + 1, Fraction(-1, 2))
            link(n - 2, n - 1, -1)
        elif series == "D":
            link(n - 3, n - 1, -1)
    elif series == "E":
        link(0, 2, -1)
        link(1, 3, -1)
        for i in range(2, n - 1):
            link(i, i + 1, -1)
    elif series == "F":
        lengths = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
        link(0, 1, -1)
        link(1, 2, -1)
        link(2, 3, Fraction(-1, 2))
    elif series == "G":
        lengths = [Fraction(2, 3), Fraction(2)]
        link(0, 1, -1)
    for i in range(n):
        g[i][i] = lengths[i]
    return g


def weyl_group_order(series: str, n: int) -> int:
    if series == "A":
        return factorial(n + 1)
    if series in "BC":
        return 2**n * factorial(n)
    if series == "D":
        return 2 ** (n - 1) * factorial(n)
    return _EXCEPTIONAL_WEYL_ORDER[(series, n)]


def _invert(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class _Component:
    series: str
    rank: int
    offset: int
    cartan: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]  # (alpha_i, alpha_j)
    form: tuple[tuple[Fraction, ...], ...]  # (varpi_i, varpi_j)
    positive_roots: tuple[Weight, ...]
    positive_coeffs: tuple[Weight, ...]
    theta: Weight
    theta_coeffs: Weight
    weyl_order: int

    @property
    def dual_coxeter_marks(self) -> int:
        # sum of comarks of theta, plus one
        return 1 + sum(a * self.gram[i][i] / 2 for i, a in enumerate(self.theta_coeffs))


def _enumerate_roots(cartan, n):
    """Breadth-first closure of the simple roots under simple reflections.

    Returns pairs (labels, simple-root coefficients) for all roots.
    """
    simple = [(tuple(cartan[j][i] for j in range(n)), tuple(int(j == i) for j in range(n))) for i in range(n)]
    seen = {s[0]: s[1] for s in simple}
    queue = deque(simple)
    while queue:
        labels, coeffs = queue.popleft()
        for i in range(n):
            c = labels[i]
            if c == 0:
                continue
            new_labels = tuple(labels[j] - c * cartan[j][i] for j in range(n))
            if new_labels in seen:
                continue
            new_coeffs = tuple(coeffs[j] - c * (j == i) for j in range(n))
            seen[new_labels] = new_coeffs
            queue.append((new_labels, new_coeffs))
    return seen


@lru_cache(maxsize=None)
def _component(series: str, n: int, offset: int = 0) -> _Component:
    gram = _simple_root_gram(series, n)
    cartan = tuple(tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(n)) for i in range(n))
    inv = _invert(cartan)
    form = tuple(tuple(gram[i][i] / 2 * inv[i][j] for j in range(n)) for i in range(n))
    roots = _enumerate_roots(cartan, n)
    pos = sorted(
        ((lab, co) for lab, co in roots.items() if all(c >= 0 for c in co)),
        key=lambda rc: (sum(rc[1]), rc[1]),
    )
    theta, theta_coeffs = pos[-1]
    return _Component(
        series=series,
        rank=n,
        offset=offset,
        cartan=cartan,
        gram=tuple(tuple(r) for r in gram),
        form=form,
        positive_roots=tuple(p[0] for p in pos),
        positive_coeffs=tuple(p[1] for p in pos),
        theta=theta,
        theta_coeffs=theta_coeffs,
        weyl_order=weyl_group_order(series, n),
    )


class RootSystem:
    """Cartan data, normalized form and root data of a (semi)simple Lie algebra.

    Instances are immutable and cached per type string; use :func:`build`.
    """

    def __init__(self, lie_type: LieType):
        self.type = lie_type
        comps = []
        offset = 0
        for series, n in lie_type.components:
            comps.append(_component(series, n))
            offset += n
        self._comps = tuple(comps)
        self.rank = lie_type.rank
        self.offsets = tuple(sum(c.rank for c in comps[:i]) for i in range(len(comps)))
        r = self.rank
        cartan = [[0] * r for _ in range(r)]
        form = [[Fraction(0)] * r for _ in range(r)]
        for c, off in zip(comps, self.offsets):
            for i in range(c.rank):
                for j in range(c.rank):
                    cartan[off + i][off + j] = c.cartan[i][j]
                    form[off + i][off + j] = c.form[i][j]
        self.cartan = tuple(tuple(row) for row in cartan)
        self.form = tuple(tuple(row) for row in form)
        self.positive_roots = tuple(self._embed(ci, root) for ci, c in enumerate(comps) for root in c.positive_roots)
        self.positive_root_coeffs = tuple(
            self._embed(ci, co) for ci, c in enumerate(comps) for co in c.positive_coeffs
        )
        self.rho: Weight = (1,) * r
        self.highest_roots = tuple(self._embed(ci, c.theta) for ci, c in enumerate(comps))
        self.marks = tuple(self._embed(ci, c.theta_coeffs) for ci, c in enumerate(comps))
        self.dual_coxeter = tuple(int(self.inner(self.rho, th) + 1) for th in self.highest_roots)
        self.dimension = r + 2 * len(self.positive_roots)
        self.simple_root_lengths = tuple(c.gram[i][i] for c in comps for i in range(c.rank))
        self.weyl_order = 1
        for c in comps:
            self.weyl_order *= c.weyl_order

    def _embed(self, ci: int, vec: Sequence[int]) -> Weight:
        out = [0] * self.rank
        off = self.offsets[ci]
        out[off : off + len(vec)] = vec
        return tuple(out)

    @property
    def components(self) -> tuple[tuple[str, int], ...]:
        return self.type.components

    @property
    def is_simple(self) -> bool:
        return self.type.is_simple

    @property
    def theta(self) -> Weight:
        if not self.is_simple:
            raise ValueError(f"{self.type} is not simple; use highest_roots")
        return self.highest_roots[0]

    def component_slices(self) -> list[slice]:
        return [slice(off, off + n) for off, (_, n) in zip(self.offsets, self.components)]

    def component(self, i: int) -> "RootSystem":
        return build(LieType((self.components[i],)))

    def split(self, weight: Sequence[int]) -> list[Weight]:
        """Cut a concatenated weight into its per-component pieces."""
        return [tuple(weight[s]) for s in self.component_slices()]

    @property
    def roots(self) -> tuple[Weight, ...]:
        neg = tuple(tuple(-x for x in a) for a in self.positive_roots)
        return self.positive_roots + neg

    def inner(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        return inner(self, a, b)

    def simple_root(self, i: int) -> Weight:
        """Labels of the i-th simple root (0-based): column i of the Cartan matrix."""
        return tuple(self.cartan[j][i] for j in range(self.rank))

    def is_dominant(self, w: Sequence[int]) -> bool:
        return all(x >= 0 for x in w)

    def to_json(self) -> str:
        """Byte-stable JSON description, suitable for an on-disk cache."""
        data = {
            "type": str(self.type),
            "cartan": [list(r) for r in self.cartan],
            "form": [[str(x) for x in r] for r in self.form],
            "positive_roots": [list(r) for r in self.positive_roots],
            "rho": list(self.rho),
            "highest_roots": [list(t) for t in self.highest_roots],
            "dual_coxeter": list(self.dual_coxeter),
            "dimension": self.dimension,
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def __repr__(self) -> str:
        return f"RootSystem({str(self.type)!r})"

    def __eq__(self, other):
        return isinstance(other, RootSystem) and other.type == self.type

    def __hash__(self):
        return hash(self.type)


@lru_cache(maxsize=None)
def _build(lie_type: LieType) -> RootSystem:
    return RootSystem(lie_type)


def build(lie_type: LieType | str) -> RootSystem:
    """Return the root system of ``lie_type`` (a :class:`LieType` or a string like ``"A4+A4"``)."""
    if isinstance(lie_type, str):
        lie_type = LieType.parse(lie_type)
    return _build(lie_type)


def inner(rs: RootSystem, a: Sequence[int], b: Sequence[int]) -> Fraction:
    """Normalized invariant form ``(a, b)`` of two weights given by Dynkin labels."""
    if len(a) != rs.rank or len(b) != rs.rank:
        raise ValueError(f"weight length mismatch: expected {rs.rank}, got {len(a)} and {len(b)}")
    total = Fraction(0)
    for i, x in enumerate(a):
        if x:
            row = rs.form[i]
            total += x * sum(row[j] * y for j, y in enumerate(b) if y)
    return total


def dual_coxeter(rs: RootSystem) -> tuple[int, ...]:
    """Dual Coxeter number of each simple component, ``(rho, theta) + 1``."""
    return rs.dual_coxeter


def dual_coxeter_from_marks(rs: RootSystem) -> tuple[int, ...]:
    """Dual Coxeter numbers as ``1 + sum of comarks`` of each highest root."""
    out = []
    for coeffs, (s, e) in zip(rs.marks, [(sl.start, sl.stop) for sl in rs.component_slices()]):
        total = 1 + sum(coeffs[i] * rs.simple_root_lengths[i] / 2 for i in range(s, e))
        if total.denominator != 1:
            raise ArithmeticError("comark sum is not an integer")
        out.append(int(total))
    return tuple(out)


def fundamental_weight(rs: RootSystem, i: int) -> Weight:
    """The i-th fundamental weight, 1-based over the concatenated numbering."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"fundamental weight index {i} out of range 1..{rs.rank}")
    return tuple(int(j == i - 1) for j in range(rs.rank))


def load_cached(type_str: str, cache_dir: str | os.PathLike | None = None) -> RootSystem:
    """Build a root system, writing its JSON description into ``cache_dir``.

    The cache only records what was built; the returned object is always
    constructed from the closed-form Cartan data, and a cache entry that
    disagrees with it is rewritten.
    """
    rs = build(type_str)
    if cache_dir is None:
        return rs
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"rootsys-{rs.type}.json")
    text = rs.to_json()
    try:
        with open(path, encoding="utf-8") as fh:
            if fh.read() == text:
                return rs
    except FileNotFoundError:
        pass
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return rs
