"""Level-k alcoves, anomalies and graded characters of integrable modules.

Grade ``m`` of ``H_lambda`` is the ``L_0`` eigenspace with eigenvalue
``Delta_lambda + m``; the highest weight vector sits in grade 0 and grade 0
is the finite irreducible module ``V_lambda``.  A weight at grade ``m`` is
the affine weight ``mu + k Lambda_0 - m delta``.
"""
from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence

from .rootsys import RootSystem, Weight, inner
from .weyl import dominant, orbit, orbit_with_signs

# Budget for one simple component's character table, counted as
# (grade, dominant weight) cells times the number of roots.  E8 at level 1
# costs 114 * 240 = 27,360 at cutoff 6 and 48,000 at cutoff 7, so the
# default admits cutoffs up to 6 there.
DEFAULT_CHARACTER_BUDGET = 30_000


class CharacterBudgetExceeded(MemoryError):
    """The requested cutoff needs more cells than the configured budget."""


class AlcoveError(ValueError):
    """A weight lies outside ``P_k`` or a level is invalid."""


def _levels(rs: RootSystem, k) -> tuple[int, ...]:
    if isinstance(k, int):
        k = (k,) * len(rs.components)
    k = tuple(int(x) for x in k)
    if len(k) != len(rs.components):
        raise AlcoveError(f"{rs.type} needs {len(rs.components)} levels, got {k}")
    if any(x < 0 for x in k):
        raise AlcoveError(f"levels must be non-negative, got {k}")
    return k


def level_of(rs: RootSystem, weight: Sequence[int]) -> tuple[Fraction, ...]:
    """``(weight, theta)`` on every component."""
    return tuple(inner(rs, weight, th) for th in rs.highest_roots)


@dataclass(frozen=True, order=True)
class LevelWeight:
    weight: Weight
    level: tuple[int, ...]

    def validate(self, rs: RootSystem) -> "LevelWeight":
        if len(self.weight) != rs.rank:
            raise AlcoveError(f"weight {self.weight} has wrong length for {rs.type}")
        if any(x < 0 for x in self.weight):
            raise AlcoveError(f"weight {self.weight} is not dominant")
        for lev, k in zip(level_of(rs, self.weight), _levels(rs, self.level)):
            if lev > k:
                raise AlcoveError(f"weight {self.weight} is outside P_{self.level}({rs.type})")
        return self


@dataclass(frozen=True)
class AffineWeight:
    """``base.weight + k Lambda_0 - shift * delta``."""

    base: LevelWeight
    shift: int = 0

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be a non-negative integer")


def level_weight(rs: RootSystem, weight: Sequence[int], k) -> LevelWeight:
    return LevelWeight(tuple(weight), _levels(rs, k)).validate(rs)


def alcove(rs: RootSystem, k) -> list[LevelWeight]:
    """All dominant weights with ``(lambda, theta) <= k`` per component, in lexicographic order."""
    levels = _levels(rs, k)
    per_comp = []
    for ci, kk in enumerate(levels):
        sl = rs.component_slices()[ci]
        comp = rs.component(ci)
        # comarks: (varpi_i, theta) for each fundamental weight
        comarks = [inner(comp, tuple(int(j == i) for j in range(comp.rank)), comp.theta) for i in range(comp.rank)]
        found = []

        def rec(prefix, budget):
            i = len(prefix)
            if i == comp.rank:
                found.append(tuple(prefix))
                return
            c = 0
            while c * comarks[i] <= budget:
                rec(prefix + [c], budget - c * comarks[i])
                c += 1

        rec([], Fraction(kk))
        per_comp.append(sorted(found))
        assert sl.stop - sl.start == comp.rank
    out = [LevelWeight(tuple(itertools.chain.from_iterable(p)), levels) for p in itertools.product(*per_comp)]
    return sorted(out)


def conformal_anomaly(rs: RootSystem, k) -> Fraction:
    """``sum_i k_i dim g_i / (h_i + k_i)``."""
    levels = _levels(rs, k)
    total = Fraction(0)
    for ci, kk in enumerate(levels):
        comp = rs.component(ci)
        total += Fraction(kk * comp.dimension, comp.dual_coxeter[0] + kk)
    return total


def trace_anomaly(rs: RootSystem, k, lw: LevelWeight | Sequence[int]) -> Fraction:
    """``sum_i (lambda_i, lambda_i + 2 rho_i) / (2 (h_i + k_i))`` for a weight of ``P_k``."""
    levels = _levels(rs, k)
    weight = lw.weight if isinstance(lw, LevelWeight) else tuple(lw)
    LevelWeight(weight, levels).validate(rs)
    return _trace_anomaly_unchecked(rs, levels, weight)


def _trace_anomaly_unchecked(rs: RootSystem, levels, weight) -> Fraction:
    total = Fraction(0)
    for ci, (kk, piece) in enumerate(zip(levels, rs.split(weight))):
        comp = rs.component(ci)
        shifted = tuple(x + 2 for x in piece)
        total += inner(comp, piece, shifted) / (2 * (comp.dual_coxeter[0] + kk))
    return total


def trace_anomaly_affine(rs: RootSystem, aw: AffineWeight) -> Fraction:
    """Trace anomaly of ``mu + k Lambda_0 - n delta``, which is ``Delta_mu - n``."""
    return trace_anomaly(rs, aw.base.level, aw.base) - aw.shift


# ---------------------------------------------------------------------------
# finite weight systems


def weight_system(rs: RootSystem, lam: Sequence[int]) -> dict[Weight, int]:
    """Dominant weights of ``V_lam`` with multiplicities (Freudenthal's formula)."""
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"highest weight {lam} is not dominant")
    pos = rs.positive_roots
    # dominant weights below lam, by descending through positive roots
    doms = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for v in frontier:
            for a in pos:
                u = tuple(x - y for x, y in zip(v, a))
                if min(u) >= 0 and u not in doms:
                    doms.add(u)
                    nxt.append(u)
        frontier = nxt
    rho = rs.rho
    lr = tuple(x + r for x, r in zip(lam, rho))
    top = inner(rs, lr, lr)
    order = sorted(doms, key=lambda u: -inner(rs, tuple(x + r for x, r in zip(u, rho)), tuple(x + r for x, r in zip(u, rho))))
    mult = {lam: 1}
    for mu in order:
        if mu == lam:
            continue
        mr = tuple(x + r for x, r in zip(mu, rho))
        den = top - inner(rs, mr, mr)
        s = Fraction(0)
        for a in pos:
            j = 1
            while True:
                v = tuple(x + j * y for x, y in zip(mu, a))
                d = dominant(rs, v)
                if d not in doms:
                    break
                m = mult.get(d, 0)
                if m:
                    s += m * inner(rs, v, a)
                j += 1
        val = 2 * s / den
        if val.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {val} at {mu}")
        if val:
            mult[mu] = int(val)
    return mult


def expand_orbits(rs: RootSystem, dominant_mults: Mapping[Weight, int]) -> dict[Weight, int]:
    """Full weight multiset from multiplicities of dominant weights."""
    out: dict[Weight, int] = {}
    for mu, m in dominant_mults.items():
        for v in orbit(rs, mu).elements:
            out[v] = m
    return out


def finite_character(rs: RootSystem, lam: Sequence[int]) -> dict[Weight, int]:
    """All weights of ``V_lam`` with multiplicities."""
    return expand_orbits(rs, weight_system(rs, lam))


def weyl_dimension(rs: RootSystem, lam: Sequence[int]) -> int:
    """Weyl dimension formula."""
    num = Fraction(1)
    lr = tuple(x + 1 for x in lam)
    for a in rs.positive_roots:
        num *= inner(rs, lr, a) / inner(rs, rs.rho, a)
    assert num.denominator == 1
    return int(num)


# ---------------------------------------------------------------------------
# graded characters


@dataclass
class GradedCharacter:
    """Weights of ``H_lambda`` grade by grade, up to and including ``cutoff``.

    ``dominant_grades[m]`` maps dominant weights to multiplicities; the full
    weight multisets are expanded from Weyl orbits on first access.
    """

    rs: RootSystem
    highest_weight: Weight
    level: tuple[int, ...]
    cutoff: int
    dominant_grades: list[dict[Weight, int]]
    _full: dict[int, dict[Weight, int]] = field(default_factory=dict, repr=False)

    def grade(self, m: int) -> dict[Weight, int]:
        if not 0 <= m <= self.cutoff:
            raise IndexError(f"grade {m} outside 0..{self.cutoff}")
        if m not in self._full:
            self._full[m] = expand_orbits(self.rs, self.dominant_grades[m])
        return self._full[m]

    @property
    def grades(self) -> list[dict[Weight, int]]:
        return [self.grade(m) for m in range(self.cutoff + 1)]

    def dims(self) -> list[int]:
        out = []
        for dg in self.dominant_grades:
            out.append(sum(m * _orbit_size(self.rs, mu) for mu, m in dg.items()))
        return out

    def to_json(self) -> str:
        grades = [[[list(w), m] for w, m in sorted(g.items())] for g in self.grades]
        return json.dumps({"cutoff": self.cutoff, "grades": grades}, separators=(",", ":"))


def _orbit_size(rs: RootSystem, mu: Weight) -> int:
    return _orbit_size_cached(rs, mu)


@lru_cache(maxsize=None)
def _orbit_size_cached(rs: RootSystem, mu: Weight) -> int:
    return orbit(rs, mu, keep=False).size


class _Scaled:
    """Integer-scaled form: ``s * (a, b)`` with ``s`` clearing denominators."""

    def __init__(self, rs: RootSystem):
        den = 1
        for row in rs.form:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        self.s = den
        self.f = [[int(x * den) for x in row] for row in rs.form]

    def ip(self, a, b) -> int:
        f = self.f
        return sum(x * sum(f[i][j] * y for j, y in enumerate(b) if y) for i, x in enumerate(a) if x)


def _dominant_in_ball(rs: RootSystem, sc: _Scaled, bound: int, congruent_to: Weight) -> list[Weight]:
    """Dominant weights ``mu`` in ``congruent_to + Q`` with ``s |mu + rho|^2 < bound``."""
    r = rs.rank
    rho = rs.rho
    inv_cartan = _inverse_cartan(rs)
    f = sc.f
    out = []

    # s|mu+rho|^2 increases with every label, so prune on partial sums.
    def rec(prefix, partial):
        i = len(prefix)
        if i == r:
            if partial < bound and _congruent(inv_cartan, tuple(prefix), congruent_to):
                out.append(tuple(prefix))
            return
        c = 0
        while True:
            vec = prefix + [c] + [0] * (r - i - 1)
            shifted = [x + y for x, y in zip(vec, rho)]
            val = sum(shifted[a] * f[a][b] * shifted[b] for a in range(r) for b in range(r))
            if val >= bound:
                break
            rec(prefix + [c], val)
            c += 1

    rec([], 0)
    return out


@lru_cache(maxsize=None)
def _inverse_cartan(rs: RootSystem):
    from .rootsys import _invert

    return tuple(tuple(row) for row in _invert([[Fraction(x) for x in row] for row in rs.cartan]))


def _congruent(inv_cartan, a: Weight, b: Weight) -> bool:
    diff = [x - y for x, y in zip(a, b)]
    for row in inv_cartan:
        if sum(c * d for c, d in zip(row, diff)).denominator != 1:
            return False
    return True


def graded_character(
    rs: RootSystem,
    lw: LevelWeight,
    cutoff: int,
    budget: int = DEFAULT_CHARACTER_BUDGET,
) -> GradedCharacter:
    """Graded character of ``H_lambda`` up to grade ``cutoff``.

    Simple components use the affine Freudenthal recursion; semisimple
    systems multiply component characters and add grades.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    lw.validate(rs)
    if rs.is_simple:
        grades = _simple_character(rs, lw.weight, lw.level[0], cutoff, budget)
        return GradedCharacter(rs, lw.weight, lw.level, cutoff, grades)
    pieces = []
    for ci, piece in enumerate(rs.split(lw.weight)):
        comp = rs.component(ci)
        pieces.append(_simple_character(comp, piece, lw.level[ci], cutoff, budget))
    grades = [dict() for _ in range(cutoff + 1)]
    for combo in itertools.product(*[range(cutoff + 1)] * len(pieces)):
        m = sum(combo)
        if m > cutoff:
            continue
        slices = [p[g] for p, g in zip(pieces, combo)]
        target = grades[m]
        for items in itertools.product(*[s.items() for s in slices]):
            w = tuple(itertools.chain.from_iterable(it[0] for it in items))
            mult = 1
            for it in items:
                mult *= it[1]
            target[w] = target.get(w, 0) + mult
    return GradedCharacter(rs, lw.weight, lw.level, cutoff, grades)


@lru_cache(maxsize=64)
def _simple_character_cached(rs: RootSystem, lam: Weight, k: int, cutoff: int) -> tuple:
    return tuple(tuple(sorted(g.items())) for g in _freudenthal_affine(rs, lam, k, cutoff, None))


def _simple_character(rs, lam, k, cutoff, budget) -> list[dict[Weight, int]]:
    if budget is not None:
        _check_budget(rs, lam, k, cutoff, budget)
    return [dict(g) for g in _simple_character_cached(rs, tuple(lam), k, cutoff)]


def _check_budget(rs, lam, k, cutoff, budget):
    sc = _Scaled(rs)
    K = k + rs.dual_coxeter[0]
    lr = tuple(x + 1 for x in lam)
    top = sc.ip(lr, lr)
    cells = 0
    nroots = len(rs.roots)
    for m in range(cutoff + 1):
        cells += len(_dominant_in_ball(rs, sc, top + 2 * m * K * sc.s + (1 if m == 0 else 0), tuple(lam)))
        if cells * nroots > budget:
            raise CharacterBudgetExceeded(
                f"{rs.type} level {k} cutoff {cutoff} exceeds the character budget {budget}"
            )


def _freudenthal_affine(rs: RootSystem, lam: Weight, k: int, cutoff: int, budget) -> list[dict[Weight, int]]:
    sc = _Scaled(rs)
    s = sc.s
    r = rs.rank
    K = k + rs.dual_coxeter[0]
    rho = rs.rho
    lr = tuple(x + y for x, y in zip(lam, rho))
    top = sc.ip(lr, lr)  # s |lam + rho|^2
    rho_sq = sc.ip(rho, rho)
    roots = rs.roots
    pos = set(rs.positive_roots)
    root_sq = [sc.ip(a, a) for a in roots]
    inv_cartan = _inverse_cartan(rs)
    dom_cache: dict[Weight, Weight] = {}

    def dom(v):
        d = dom_cache.get(v)
        if d is None:
            d = dominant(rs, v)
            dom_cache[v] = d
        return d

    def height(mu):
        diff = [x - y for x, y in zip(lam, mu)]
        return sum(sum(c * d for c, d in zip(row, diff)) for row in inv_cartan)

    grades: list[dict[Weight, int]] = []
    for m in range(cutoff + 1):
        bound_m = top + 2 * m * K * s
        cands = _dominant_in_ball(rs, sc, bound_m + (1 if m == 0 else 0), lam)
        cands.sort(key=height)
        cur: dict[Weight, int] = {}
        grades.append(cur)
        for mu in cands:
            if m == 0 and mu == lam:
                cur[mu] = 1
                continue
            mr = tuple(x + y for x, y in zip(mu, rho))
            den = bound_m - sc.ip(mr, mr)
            if den <= 0:
                continue
            mu_sq = sc.ip(mu, mu)
            ip_mu = [sc.ip(mu, a) for a in roots]
            total = 0
            for ai, a in enumerate(roots):
                is_pos = a in pos
                ima = ip_mu[ai]
                asq = root_sq[ai]
                for n in range(0 if is_pos else 1, m + 1):
                    j = 1
                    while True:
                        g = m - j * n
                        if g < 0:
                            break
                        # weights at grade g satisfy s|x|^2 < s|lam+rho|^2 + 2gKs - s|rho|^2
                        xsq = mu_sq + 2 * j * ima + j * j * asq
                        limit = top + 2 * g * K * s - rho_sq
                        if xsq > limit:
                            if n == 0:
                                break
                            j += 1
                            continue
                        x = tuple(p + j * q for p, q in zip(mu, a))
                        mult = grades[g].get(dom(x), 0)
                        if mult:
                            total += mult * (ima + j * asq + k * n * s)
                        j += 1
            for n in range(1, m + 1):
                for j in range(1, m // n + 1):
                    mult = grades[m - j * n].get(mu, 0)
                    if mult:
                        total += r * k * n * s * mult
            val = Fraction(2 * total, den)
            if val.denominator != 1:
                raise ArithmeticError(f"non-integral multiplicity {val} at grade {m}, weight {mu}")
            if val:
                cur[mu] = int(val)
    return grades


# ---------------------------------------------------------------------------
# Weyl-Kac route (independent cross-check, small ranks only)


def _add_into(target: dict, source: Mapping, factor: int = 1) -> None:
    for w, c in source.items():
        v = target.get(w, 0) + factor * c
        if v:
            target[w] = v
        else:
            target.pop(w, None)


def _divide_by_one_minus(rs: RootSystem, f: Mapping[Weight, int], alpha: Weight) -> dict[Weight, int]:
    """Exact quotient ``f / (1 - e^{-alpha})`` of a finitely supported function."""
    asq = inner(rs, alpha, alpha)
    strings: dict[tuple, dict[int, int]] = defaultdict(dict)
    for w, c in f.items():
        t = inner(rs, w, alpha) / asq
        base = tuple(Fraction(x) - t * y for x, y in zip(w, alpha))
        frac_t = t - (t.numerator // t.denominator)
        key = (base, frac_t)
        strings[key][t.numerator // t.denominator] = c
    out = {}
    for (base, frac_t), vals in strings.items():
        lo, hi = min(vals), max(vals)
        acc = 0
        for pos in range(hi, lo - 1, -1):
            acc += vals.get(pos, 0)
            if acc:
                t = pos + frac_t
                w = tuple(int(b + t * y) for b, y in zip(base, alpha))
                out[w] = acc
        if acc != 0:
            raise ArithmeticError("numerator is not divisible by the Weyl denominator")
    return out


def weyl_kac_character(rs: RootSystem, lw: LevelWeight, cutoff: int) -> list[dict[Weight, int]]:
    """Full weight multisets per grade from the Weyl-Kac formula, truncated at ``cutoff``.

    Enumerates the affine Weyl group as finite Weyl group times translations
    by the long-root lattice, divides by the finite Weyl denominator and
    then by the remaining affine denominator as a power series in ``q``.
    Intended for small simple types.
    """
    if not rs.is_simple:
        raise ValueError("weyl_kac_character handles simple types only")
    lw.validate(rs)
    lam = lw.weight
    k = lw.level[0]
    K = k + rs.dual_coxeter[0]
    rho = rs.rho
    lr = tuple(x + y for x, y in zip(lam, rho))
    lr_sq = inner(rs, lr, lr)
    # basis of the long-root lattice: 2 alpha_i / |alpha_i|^2
    basis = []
    for i in range(rs.rank):
        scale = 2 / rs.simple_root_lengths[i]
        assert scale.denominator == 1
        basis.append(tuple(int(scale) * x for x in rs.simple_root(i)))
    gram = [[inner(rs, a, b) for b in basis] for a in basis]
    from .rootsys import _invert

    ginv = _invert(gram)
    radius_sq = (Fraction(isqrt(int(lr_sq)) + 1) ** 2 + 2 * K * cutoff + lr_sq) / (K * K) * 4
    box = [isqrt(int(radius_sq * ginv[i][i]) + 1) + 1 for i in range(rs.rank)]
    translations = []
    for coeffs in itertools.product(*[range(-b, b + 1) for b in box]):
        gamma = tuple(sum(c * v[j] for c, v in zip(coeffs, basis)) for j in range(rs.rank))
        translations.append(gamma)
    numer = [dict() for _ in range(cutoff + 1)]
    for x, sign in orbit_with_signs(rs, lr):
        for gamma in translations:
            y = tuple(a + K * b for a, b in zip(x, gamma))
            grade = (inner(rs, y, y) - lr_sq) / (2 * K)
            assert grade.denominator == 1 and grade >= 0
            if grade <= cutoff:
                w = tuple(a - b for a, b in zip(y, rho))
                _add_into(numer[int(grade)], {w: sign})
    # divide by the finite Weyl denominator prod_{alpha>0} (1 - e^{-alpha})
    quot = []
    for g in numer:
        for a in rs.positive_roots:
            g = _divide_by_one_minus(rs, g, a)
        quot.append(g)
    # affine part of the denominator: prod_{n>=1} (1-q^n)^r prod_{alpha} (1 - e^alpha q^n)
    denom = [dict() for _ in range(cutoff + 1)]
    denom[0][(0,) * rs.rank] = 1
    factors = [((0,) * rs.rank, n) for n in range(1, cutoff + 1) for _ in range(rs.rank)]
    factors += [(a, n) for n in range(1, cutoff + 1) for a in rs.roots]
    for a, n in factors:
        new = [dict(d) for d in denom]
        for g in range(cutoff + 1 - n):
            shifted = {tuple(x + y for x, y in zip(w, a)): c for w, c in denom[g].items()}
            _add_into(new[g + n], shifted, -1)
        denom = new
    ch: list[dict[Weight, int]] = []
    for m in range(cutoff + 1):
        cur = dict(quot[m])
        for i in range(1, m + 1):
            for w1, c1 in denom[i].items():
                for w2, c2 in ch[m - i].items():
                    w = tuple(x + y for x, y in zip(w1, w2))
                    _add_into(cur, {w: -c1 * c2})
        ch.append(cur)
    return ch


def character_from_json(text: str) -> dict:
    """Parse the JSON produced by :meth:`GradedCharacter.to_json`."""
    data = json.loads(text)
    grades = [{tuple(w): m for w, m in g} for g in data["grades"]]
    return {"cutoff": data["cutoff"], "grades": grades}


def total_dims(grades: Iterable[Mapping[Weight, int]]) -> list[int]:
    return [sum(g.values()) for g in grades]
