"""Verlinde dimensions from the modular S-matrix.

Two routes compute the same matrix up to one overall constant:

* ``orbit``: the Kac-Peterson signed sum over the Weyl orbit of
  ``lambda + rho``.  Only practical for small Weyl groups.
* ``character``: the Weyl denominator identity turns the signed sum into
  ``chi_lambda(-2 pi i (mu+rho)/K) * prod_{alpha>0} sin(pi (alpha, mu+rho)/K)``,
  which only needs the weights of ``V_lambda``.  Used for large groups such
  as e7, e8 and so(16).

Both are normalized so that ``S[0][0]`` is real positive and row 0 has unit
norm.
"""
from __future__ import annotations

import cmath
from contextlib import nullcontext
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .affine import LevelWeight, alcove, finite_character, level_weight
from .rootsys import LieType, RootSystem, Weight, build, inner
from .weyl import dagger, orbit_with_signs

ROUNDING_TOLERANCE = 1e-6
UNITARITY_TOLERANCE = 1e-9
DEFAULT_MAX_ALCOVE = 500
ORBIT_ROUTE_MAX_WEYL = 2000


class VerlindeError(ArithmeticError):
    """A Verlinde sum failed to be an integer, or the S-matrix lost unitarity."""


class FactorizationMismatch(VerlindeError):
    pass


@dataclass(frozen=True)
class Precision:
    """``digits=None`` means double precision; otherwise mpmath with that many digits."""

    digits: int | None = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 15:
            raise ValueError("high precision mode needs at least 15 digits")

    @property
    def high(self) -> bool:
        return self.digits is not None

    @classmethod
    def parse(cls, text: str | None) -> "Precision":
        if text in (None, "", "double"):
            return cls()
        if text.startswith("high"):
            digits = text[4:].strip("():= ") or "30"
            return cls(int(digits))
        return cls(int(text))


DOUBLE = Precision()


@dataclass(frozen=True)
class SMatrix:
    rs: RootSystem
    level: tuple[int, ...]
    alcove: tuple[LevelWeight, ...]
    entries: tuple[tuple[complex, ...], ...]
    precision: Precision = DOUBLE

    def index(self, weight: Sequence[int] | LevelWeight) -> int:
        w = weight.weight if isinstance(weight, LevelWeight) else tuple(weight)
        for i, lw in enumerate(self.alcove):
            if lw.weight == w:
                return i
        raise VerlindeError(f"{w} is not in the level-{self.level} alcove of {self.rs.type}")

    def __len__(self) -> int:
        return len(self.alcove)

    def as_array(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.entries], dtype=complex)

    def to_json(self) -> str:
        data = {
            "system": str(self.rs.type),
            "level": list(self.level),
            "alcove": [list(lw.weight) for lw in self.alcove],
            "entries": [[[_round12(complex(x).real), _round12(complex(x).imag)] for x in row] for row in self.entries],
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _round12(x: float) -> float:
    if x == 0 or not math.isfinite(x):
        return 0.0 if x == 0 else x
    return float(f"{x:.12g}")


class _Numeric:
    """Small arithmetic shim over double precision or mpmath."""

    def __init__(self, precision: Precision):
        self.high = precision.high
        self.digits = precision.digits

    def phase(self, frac: Fraction):
        """``exp(-2 pi i frac)`` with ``frac`` reduced mod 1 before rounding."""
        f = frac - math.floor(frac)
        if self.high:
            return mpmath.expjpi(-2 * mpmath.mpf(f.numerator) / f.denominator)
        return cmath.exp(-2j * math.pi * (f.numerator / f.denominator))

    def sin_pi(self, frac: Fraction):
        if self.high:
            return mpmath.sinpi(mpmath.mpf(frac.numerator) / frac.denominator)
        return math.sin(math.pi * frac.numerator / frac.denominator)

    def sqrt(self, x):
        return mpmath.sqrt(x) if self.high else math.sqrt(x)

    def abs(self, x):
        return mpmath.fabs(x) if self.high else abs(x)

    def conj(self, x):
        return mpmath.conj(x) if self.high else x.conjugate()

    def zero(self):
        return mpmath.mpc(0) if self.high else 0j


def _shifted(rs: RootSystem, w: Weight) -> Weight:
    return tuple(x + r for x, r in zip(w, rs.rho))


def _raw_orbit(rs: RootSystem, weights: list[Weight], K: int, num: _Numeric):
    rows = []
    for lam in weights:
        signed = orbit_with_signs(rs, _shifted(rs, lam))
        row = []
        for mu in weights:
            mr = _shifted(rs, mu)
            total = num.zero()
            for v, sign in signed:
                total += sign * num.phase(inner(rs, v, mr) / K)
            row.append(total)
        rows.append(row)
    return rows


def _raw_character(rs: RootSystem, weights: list[Weight], K: int, num: _Numeric):
    chars = [finite_character(rs, lam) for lam in weights]
    rows = [[None] * len(weights) for _ in weights]
    for j, mu in enumerate(weights):
        mr = _shifted(rs, mu)
        denom = 1
        for alpha in rs.positive_roots:
            denom *= num.sin_pi(inner(rs, alpha, mr) / K)
        for i, ch in enumerate(chars):
            total = num.zero()
            for nu, m in ch.items():
                total += m * num.phase(inner(rs, nu, mr) / K)
            rows[i][j] = total * denom
    return rows


def _normalize(rows, num: _Numeric):
    norm = num.sqrt(sum(num.abs(x) ** 2 for x in rows[0]))
    s00 = rows[0][0]
    c = num.conj(s00) / num.abs(s00) / norm
    return [[x * c for x in row] for row in rows]


def _simple_s(rs: RootSystem, k: int, route: str, precision: Precision):
    weights = [lw.weight for lw in alcove(rs, k)]
    if len(weights) == 1:
        return [[mpmath.mpc(1) if precision.high else 1 + 0j]]
    K = k + rs.dual_coxeter[0]
    if route == "auto":
        route = "orbit" if rs.weyl_order <= ORBIT_ROUTE_MAX_WEYL else "character"
    ctx = mpmath.workdps(precision.digits) if precision.high else nullcontext()
    with ctx:
        num = _Numeric(precision)
        if route == "orbit":
            raw = _raw_orbit(rs, weights, K, num)
        elif route == "character":
            raw = _raw_character(rs, weights, K, num)
        else:
            raise ValueError(f"unknown S-matrix route {route!r}")
        return _normalize(raw, num)


def s_matrix(
    rs: RootSystem | str,
    k=1,
    route: str = "auto",
    precision: Precision = DOUBLE,
    max_alcove: int = DEFAULT_MAX_ALCOVE,
    cache_dir: str | os.PathLike | None = None,
) -> SMatrix:
    """Modular S-matrix on the level-``k`` alcove.

    Semisimple systems get the Kronecker product of the component matrices,
    indexed by the (lexicographically sorted) product alcove.
    """
    if isinstance(rs, str):
        rs = build(rs)
    lws = tuple(alcove(rs, k))
    if len(lws) > max_alcove:
        raise VerlindeError(f"alcove of size {len(lws)} exceeds the bound {max_alcove}")
    levels = lws[0].level
    if cache_dir is not None and not precision.high:
        cached = _read_cache(rs, levels, route, cache_dir)
        if cached is not None:
            return cached
    sm = _s_matrix_cached(rs, levels, route, precision)
    if cache_dir is not None and not precision.high:
        _write_cache(sm, route, cache_dir)
    return sm


@lru_cache(maxsize=128)
def _s_matrix_cached(rs: RootSystem, levels: tuple[int, ...], route: str, precision: Precision) -> SMatrix:
    mats = [_simple_s(rs.component(i), kk, route, precision) for i, kk in enumerate(levels)]
    entries = mats[0]
    for m in mats[1:]:
        entries = [[a * b for a in ra for b in rb] for ra in entries for rb in m]
    sm = SMatrix(rs, levels, tuple(alcove(rs, levels)), tuple(tuple(r) for r in entries), precision)
    check_unitary(sm)
    return sm


def check_unitary(sm: SMatrix, tol: float = UNITARITY_TOLERANCE) -> float:
    """Largest deviation from unitarity and symmetry; raises past ``tol``."""
    a = sm.as_array()
    dev = max(
        float(np.max(np.abs(a @ a.conj().T - np.eye(len(a))))),
        float(np.max(np.abs(a - a.T))),
        abs(a[0].imag).max(),
    )
    if dev > tol or (a[0].real <= 0).any():
        raise VerlindeError(
            f"S-matrix for {sm.rs.type} level {sm.level} is off by {dev:.2e}; try a higher precision mode"
        )
    return dev


def _cache_path(rs, levels, route, cache_dir):
    name = f"S_{rs.type}_{'-'.join(map(str, levels))}_{route}.json"
    return os.path.join(cache_dir, name)


def _read_cache(rs, levels, route, cache_dir):
    path = _cache_path(rs, levels, route, cache_dir)
    if not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    entries = tuple(tuple(complex(re, im) for re, im in row) for row in data["entries"])
    return SMatrix(rs, levels, tuple(alcove(rs, levels)), entries)


def _write_cache(sm: SMatrix, route, cache_dir):
    os.makedirs(cache_dir, exist_ok=True)
    data = {
        "system": str(sm.rs.type),
        "level": list(sm.level),
        "entries": [[[complex(x).real, complex(x).imag] for x in row] for row in sm.entries],
    }
    with open(_cache_path(sm.rs, sm.level, route, cache_dir), "w", encoding="utf-8") as fh:
        json.dump(data, fh)


def charge_conjugation(sm: SMatrix) -> list[int]:
    """Permutation ``lambda -> lambda^dagger`` on alcove indices."""
    return [sm.index(dagger(sm.rs, lw.weight)) for lw in sm.alcove]


# ---------------------------------------------------------------------------
# Verlinde formula


@dataclass(frozen=True)
class FusionQuery:
    genus: int
    labels: tuple[Weight, ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")


def _label(x) -> Weight:
    return x.weight if isinstance(x, LevelWeight) else tuple(x)


def fusion_value(sm: SMatrix, q: FusionQuery):
    """The unrounded Verlinde sum ``sum_mu prod_i S[l_i][mu] * S[0][mu]^(2-2g-s)``."""
    idx = [sm.index(_label(x)) for x in q.labels]
    exponent = 2 - 2 * q.genus - len(idx)
    total = 0
    for j in range(len(sm)):
        term = sm.entries[0][j] ** exponent
        for i in idx:
            term *= sm.entries[i][j]
        total += term
    return total


def fusion_dim(rs: RootSystem | str, k, q: FusionQuery, precision: Precision = DOUBLE, **kw) -> int:
    """Dimension of the genus-``g`` space of conformal blocks with the given labels."""
    if isinstance(rs, str):
        rs = build(rs)
    for lab in q.labels:
        level_weight(rs, _label(lab), k)
    sm = s_matrix(rs, k, precision=precision, **kw)
    with mpmath.workdps(precision.digits) if precision.high else nullcontext():
        val = complex(fusion_value(sm, q))
    n = round(val.real)
    dev = max(abs(val.real - n), abs(val.imag))
    if dev > ROUNDING_TOLERANCE:
        raise VerlindeError(f"Verlinde sum {val} is not within {ROUNDING_TOLERANCE} of an integer")
    if n < 0:
        raise VerlindeError(f"Verlinde sum {val} is negative")
    return n


@dataclass
class FactorizationReport:
    system: str
    level: tuple[int, ...]
    genus: int
    labels: tuple[Weight, ...]
    lhs: int
    terms: list[tuple[Weight, int]]

    @property
    def rhs(self) -> int:
        return sum(t for _, t in self.terms)

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "level": list(self.level),
            "genus": self.genus,
            "labels": [list(x) for x in self.labels],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "terms": [{"lambda": list(w), "dimension": d} for w, d in self.terms],
            "ok": self.ok,
        }


def factorization_check(rs: RootSystem | str, k, genus: int, labels=(), strict: bool = True, **kw) -> FactorizationReport:
    """Compare ``dim(g; labels)`` with ``sum_lambda dim(g-1; labels, lambda, lambda^dagger)``."""
    if isinstance(rs, str):
        rs = build(rs)
    if genus < 1:
        raise ValueError("factorization needs genus >= 1")
    labels = tuple(_label(x) for x in labels)
    lhs = fusion_dim(rs, k, FusionQuery(genus, labels), **kw)
    terms = []
    for lw in alcove(rs, k):
        q = FusionQuery(genus - 1, labels + (lw.weight, dagger(rs, lw.weight)))
        terms.append((lw.weight, fusion_dim(rs, k, q, **kw)))
    levels = alcove(rs, k)[0].level
    report = FactorizationReport(str(rs.type), levels, genus, labels, lhs, terms)
    if strict and not report.ok:
        raise FactorizationMismatch(f"factorization fails for {rs.type}: {report.lhs} != {report.rhs}")
    return report


# ---------------------------------------------------------------------------
# strange duality pairs

GROUP_TYPES = {
    "SL2": "A1",
    "SL3": "A2",
    "SL5": "A4",
    "SL9": "A8",
    "SPIN8": "D4",
    "SPIN16": "D8",
    "E6": "E6",
    "E7": "E7",
    "E8": "E8",
    "G2": "G2",
    "F4": "F4",
}

DUALITY_PAIRS = {
    ("SL5", "SL5"),
    ("SL3", "E6"),
    ("SL2", "E7"),
    ("SPIN8", "SPIN8"),
    ("G2", "F4"),
}


def g2f4_closed_form(genus: int) -> float:
    """``((5+sqrt5)/2)^(g-1) + ((5-sqrt5)/2)^(g-1)``."""
    r5 = math.sqrt(5)
    return ((5 + r5) / 2) ** (genus - 1) + ((5 - r5) / 2) ** (genus - 1)


def parse_pair(text: str) -> tuple[str, str]:
    parts = [p.strip().upper().replace("(", "").replace(")", "") for p in text.replace(",", ":").split(":")]
    if len(parts) != 2:
        raise ValueError(f"pair {text!r} should look like 'G2:F4'")
    return parts[0], parts[1]


def strange_duality_dims(pair: tuple[str, str] | str, genus: int, precision: Precision = DOUBLE) -> dict:
    """Level-one vacuum dimensions of both groups of a strange-duality pair."""
    a, b = parse_pair(pair) if isinstance(pair, str) else tuple(p.upper() for p in pair)
    if (a, b) not in DUALITY_PAIRS and (b, a) not in DUALITY_PAIRS:
        raise ValueError(f"unsupported pair {a}:{b}; choose from {sorted(DUALITY_PAIRS)}")
    if genus < 0:
        raise ValueError("genus must be non-negative")
    report = {"pair": [a, b], "genus": genus}
    dims = []
    for name in (a, b):
        rs = build(GROUP_TYPES[name])
        sm = s_matrix(rs, 1, precision=precision)
        with mpmath.workdps(precision.digits) if precision.high else nullcontext():
            raw = complex(fusion_value(sm, FusionQuery(genus)))
        dims.append(fusion_dim(rs, 1, FusionQuery(genus), precision=precision))
        report.setdefault("raw", []).append(_round12(raw.real))
    report["dim_a"], report["dim_b"] = dims
    report["equal"] = dims[0] == dims[1]
    if {a, b} == {"G2", "F4"}:
        closed = g2f4_closed_form(genus)
        report["closed_form"] = _round12(closed)
        report["closed_form_ok"] = all(abs(r - closed) < ROUNDING_TOLERANCE for r in report["raw"])
    return report


def center_power(type_str: str, genus: int) -> int:
    """``|Z|^g`` with ``|Z|`` the size of the level-one alcove (simply-laced types)."""
    rs = build(type_str)
    if any(s not in "ADE" for s, _ in rs.components):
        raise ValueError("|Z|^g only applies to simply-laced types")
    return len(alcove(rs, 1)) ** genus


def parse_type(text: str) -> LieType:
    return LieType.parse(text)
