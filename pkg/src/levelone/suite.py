"""The reproduction suite: one named check per acceptance criterion."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import affine, embed, heisenberg, verlinde, weyl
from .affine import LevelWeight, level_weight
from .rootsys import build, inner

MAXIMAL_ROWS = ("D8", "A8", "A4+A4", "A2+E6", "A1+E7")

# B(0) of the basic e8 module for each conformal subalgebra, as (labels, shift).
BASIC_BRANCHING = {
    "D8": {((0,) * 8, 0), ((0, 0, 0, 0, 0, 0, 1, 0), 1)},
    "A8": {((0,) * 8, 0), ((0, 0, 1, 0, 0, 0, 0, 0), 1), ((0, 0, 0, 0, 0, 1, 0, 0), 1)},
    "A4+A4": {
        ((0,) * 8, 0),
        ((1, 0, 0, 0, 0, 1, 0, 0), 1),
        ((0, 1, 0, 0, 0, 0, 0, 1), 1),
        ((0, 0, 1, 0, 1, 0, 0, 0), 1),
        ((0, 0, 0, 1, 0, 0, 1, 0), 1),
    },
    "A2+E6": {((0,) * 8, 0), ((1, 0, 1, 0, 0, 0, 0, 0), 1), ((0, 1, 0, 0, 0, 0, 0, 1), 1)},
    "A1+E7": {((0,) * 8, 0), ((1, 0, 0, 0, 0, 0, 0, 1), 1)},
    "G2+F4": {((0,) * 6, 0), ((1, 0, 0, 0, 0, 1), 1)},
}

# the involution column: dagger of each non-trivial entry
BASIC_DAGGER_PAIRS = {
    "D8": {(0, 0, 0, 0, 0, 0, 1, 0): (0, 0, 0, 0, 0, 0, 1, 0)},
    "A8": {(0, 0, 1, 0, 0, 0, 0, 0): (0, 0, 0, 0, 0, 1, 0, 0)},
    "A4+A4": {
        (1, 0, 0, 0, 0, 1, 0, 0): (0, 0, 0, 1, 0, 0, 1, 0),
        (0, 1, 0, 0, 0, 0, 0, 1): (0, 0, 1, 0, 1, 0, 0, 0),
    },
    "A2+E6": {(1, 0, 1, 0, 0, 0, 0, 0): (0, 1, 0, 0, 0, 0, 0, 1)},
    "A1+E7": {(1, 0, 0, 0, 0, 0, 0, 1): (1, 0, 0, 0, 0, 0, 0, 1)},
    "G2+F4": {(1, 0, 0, 0, 0, 1): (1, 0, 0, 0, 0, 1)},
}

VERLINDE_ROWS = (
    [(f"A{n - 1}", n) for n in range(2, 10)]
    + [("D8", 4), ("D4", 4), ("E6", 3), ("E7", 2), ("E8", 1)]
)


@dataclass
class SuiteConfig:
    cutoff: int = 3
    embedding_file: str | None = None
    seed: int = 20240101
    budget: int = affine.DEFAULT_CHARACTER_BUDGET
    precision: verlinde.Precision = field(default_factory=verlinde.Precision)


@dataclass
class CriterionResult:
    number: int
    key: str
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number}. {self.title} ({self.seconds:.2f}s): {self.detail}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "key": self.key,
            "title": self.title,
            "ok": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _embedding(spec: str, cfg: SuiteConfig) -> embed.Embedding:
    if spec == "e8:G2+F4" and cfg.embedding_file:
        return embed.load_embedding_file(cfg.embedding_file)
    return embed.resolve(spec)


def _basic(e: embed.Embedding) -> LevelWeight:
    return level_weight(e.ambient, (0,) * e.ambient.rank, 1)


def check_conformal(cfg: SuiteConfig) -> tuple[bool, str]:
    specs = [f"e8:{s}" for s in MAXIMAL_ROWS] + ["e8:G2+F4", "e8:D4+D4"]
    bad = []
    for spec in specs:
        e = _embedding(spec, cfg)
        c1, c2 = embed.is_conformal(e, 1), embed.is_conformal(e, 2)
        if not (c1 and c1.sub_anomaly == 8 and c1.ambient_anomaly == 8 and not c2):
            bad.append(spec)
    return not bad, f"{len(specs) - len(bad)}/{len(specs)} conformal at k=1 only" + (f"; failing {bad}" if bad else "")


def check_branching(cfg: SuiteConfig) -> tuple[bool, str]:
    bad = []
    for sub in MAXIMAL_ROWS:
        e = _embedding(f"e8:{sub}", cfg)
        b = embed.branch_affine(e, _basic(e), cfg.cutoff, cfg.budget)
        got = {(w, n) for w, n, m in b.as_set()}
        mults = {m for _, _, m in b.as_set()}
        if got != BASIC_BRANCHING[sub] or mults != {1}:
            bad.append(sub)
    return not bad, f"{len(MAXIMAL_ROWS) - len(bad)}/{len(MAXIMAL_ROWS)} rows match at N={cfg.cutoff}" + (
        f"; failing {bad}" if bad else ""
    )


def check_duality(cfg: SuiteConfig) -> tuple[bool, str]:
    bad = []
    rows = MAXIMAL_ROWS + ("G2+F4",)
    for sub in rows:
        e = _embedding(f"e8:{sub}", cfg)
        rep = embed.duality_report(e, _basic(e), cfg.cutoff)
        expected = dict(BASIC_DAGGER_PAIRS[sub])
        expected.update({v: k for k, v in expected.items()})
        expected[(0,) * e.sub.rank] = (0,) * e.sub.rank
        pairs = dict(rep["pairs"])
        if not rep["ok"] or pairs != expected:
            bad.append(sub)
    return not bad, f"{len(rows) - len(bad)}/{len(rows)} rows dagger-closed with the listed involution" + (
        f"; failing {bad}" if bad else ""
    )


def check_verlinde(cfg: SuiteConfig) -> tuple[bool, str]:
    worst = 0.0
    bad = []
    for type_str, z in VERLINDE_ROWS + [("D4+D4", 16)]:
        sm = verlinde.s_matrix(type_str, 1, precision=cfg.precision)
        for g in range(5):
            raw = complex(verlinde.fusion_value(sm, verlinde.FusionQuery(g)))
            dev = abs(raw - z**g) / max(1, z**g)
            worst = max(worst, abs(raw.real - round(raw.real)), abs(raw.imag))
            if verlinde.fusion_dim(type_str, 1, verlinde.FusionQuery(g), precision=cfg.precision) != z**g or dev > 1e-6:
                bad.append((type_str, g))
    n = (len(VERLINDE_ROWS) + 1) * 5
    return not bad and worst < 1e-6, f"{n - len(bad)}/{n} values equal |Z|^g, worst rounding gap {worst:.1e}" + (
        f"; failing {bad}" if bad else ""
    )


def check_g2f4(cfg: SuiteConfig) -> tuple[bool, str]:
    bad = []
    for g in range(5):
        rep = verlinde.strange_duality_dims(("G2", "F4"), g, cfg.precision)
        if not (rep["equal"] and rep["closed_form_ok"]):
            bad.append(g)
    return not bad, "dims agree with ((5+r5)/2)^(g-1) + ((5-r5)/2)^(g-1) for g=0..4" if not bad else f"failing genera {bad}"


def check_factorization(cfg: SuiteConfig) -> tuple[bool, str]:
    rng = random.Random(cfg.seed)
    count, bad = 0, []
    for type_str in ("A1", "A2", "D4", "G2"):
        rs = build(type_str)
        alc = affine.alcove(rs, 1)
        for g in (1, 2, 3):
            for labels in ((), (rng.choice(alc).weight,)):
                rep = verlinde.factorization_check(rs, 1, g, labels, strict=False)
                count += 1
                if not rep.ok:
                    bad.append((type_str, g, labels))
    return not bad, f"{count - len(bad)}/{count} identities exact" + (f"; failing {bad}" if bad else "")


def check_heisenberg(cfg: SuiteConfig) -> tuple[bool, str]:
    rng = random.Random(cfg.seed)
    count, bad = 0, []
    for orders in ((2,), (3,), (5,), (2, 2), (3, 3)):
        A = heisenberg.FiniteAbelian(orders)
        for g in (1, 2):
            if A.order ** (2 * g) > heisenberg.DEFAULT_SIZE_GUARD:
                continue
            model = heisenberg.HeisenbergModel(A, g)
            for _ in range(10):
                L = model.random_maximal_isotropic(rng)
                phases = rng.choice(model.lifts(L))
                count += 1
                if model.invariant_dim(L, phases) != 1:
                    bad.append((orders, g))
    return not bad and count >= 100, f"{count - len(bad)}/{count} random lifted Lagrangians fix a line" + (
        f"; failing {bad}" if bad else ""
    )


def check_schur(cfg: SuiteConfig) -> tuple[bool, str]:
    bad = []
    for orders, g in (((5,), 1), ((3,), 1), ((2,), 2)):
        A = heisenberg.FiniteAbelian(orders)
        rep = heisenberg.strange_duality_map(A, A, heisenberg.Isomorphism((1,)), g)
        if rep["rank"] != A.order**g or not rep["equivariant"]:
            bad.append((orders, g))
    return not bad, "full rank for Z/5 g=1, Z/3 g=1, Z/2 g=2" if not bad else f"failing {bad}"


def check_properties(cfg: SuiteConfig) -> tuple[bool, str]:
    rng = random.Random(cfg.seed)
    failures = []
    # dagger involution and Weyl invariance of the form
    for t in ("A4", "D5", "E6", "B3", "G2", "A2+E6"):
        rs = build(t)
        for _ in range(50):
            lam = tuple(rng.randrange(4) for _ in range(rs.rank))
            if weyl.dagger(rs, weyl.dagger(rs, lam)) != lam:
                failures.append(f"dagger {t}")
            w = tuple(rng.randrange(-4, 5) for _ in range(rs.rank))
            if inner(rs, w, w) != inner(rs, weyl.dominant(rs, w), weyl.dominant(rs, w)):
                failures.append(f"form {t}")
    # trace anomaly is dagger invariant
    for t, k in (("A3", 2), ("E6", 1), ("D5", 2), ("A2+A2", (1, 2))):
        rs = build(t)
        for lw in affine.alcove(rs, k):
            if affine.trace_anomaly(rs, k, lw) != affine.trace_anomaly(rs, k, weyl.dagger(rs, lw.weight)):
                failures.append(f"anomaly {t}")
    # S^2 is charge conjugation
    for t, k in (("A2", 2), ("D4", 1), ("E6", 1), ("G2", 2), ("A1+A2", (1, 1))):
        sm = verlinde.s_matrix(t, k)
        a = sm.as_array()
        perm = verlinde.charge_conjugation(sm)
        sq = a @ a
        for i, j in enumerate(perm):
            row = sq[i].copy()
            row[j] -= 1
            if abs(row).max() > 1e-9:
                failures.append(f"S^2 {t}")
    # shift-0 entries agree with finite branching
    for sub in ("D8", "A2+E6"):
        e = embed.resolve(f"e8:{sub}")
        b = embed.branch_affine(e, _basic(e), 1)
        shift0 = {en.mu.weight: en.mult for en in b.entries if en.shift == 0}
        if shift0 != embed.branch_finite(e, (0,) * 8):
            failures.append(f"shift0 {sub}")
    e = embed.resolve("e8:D8")
    b = embed.branch_affine(e, _basic(e), 2)
    level1 = {en.mu.weight: en.mult for en in b.entries if en.shift == 1}
    adj = embed.branch_finite(e, e.ambient.theta)
    if not set(level1) <= set(adj):
        failures.append("grade1 D8")
    # two character oracles
    for t, k, cutoff in (("A1", 1, 4), ("A2", 1, 4), ("G2", 1, 3), ("B2", 1, 3)):
        rs = build(t)
        for lw in affine.alcove(rs, k):
            f = affine.graded_character(rs, lw, cutoff).grades
            wk = affine.weyl_kac_character(rs, lw, cutoff)
            if f != wk:
                failures.append(f"characters {t}")
    return not failures, "dagger, form, anomaly, S^2, shift-0 and character oracles agree" if not failures else (
        f"failing {sorted(set(failures))}"
    )


CRITERIA: list[tuple[int, str, str, Callable[[SuiteConfig], tuple[bool, str]], float | None]] = [
    (1, "conformal", "conformal classification", check_conformal, 1.0),
    (2, "branching", "branching sets of the basic E8 module", check_branching, 300.0),
    (3, "duality", "duality of branching sets", check_duality, None),
    (4, "verlinde", "level-one Verlinde dimensions", check_verlinde, 30.0),
    (5, "g2f4", "G2/F4 strange duality dimensions", check_g2f4, None),
    (6, "factorization", "factorization identity", check_factorization, None),
    (7, "heisenberg", "Heisenberg invariant lines", check_heisenberg, None),
    (8, "schur", "strange duality map is an isomorphism", check_schur, None),
    (9, "properties", "property suites", check_properties, None),
]


def select(only: str | None = None):
    if not only:
        return list(CRITERIA)
    wanted = {w.strip().lower() for w in only.split(",") if w.strip()}
    return [c for c in CRITERIA if str(c[0]) in wanted or c[1] in wanted]


def run_criterion(entry, cfg: SuiteConfig) -> CriterionResult:
    number, key, title, fn, limit = entry
    start = time.perf_counter()
    try:
        ok, detail = fn(cfg)
    except Exception as exc:  # a crash is a failed criterion, reported by name
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    if ok and limit is not None and seconds > limit:
        ok, detail = False, f"{detail}; runtime {seconds:.1f}s over the {limit:g}s limit"
    return CriterionResult(number, key, title, ok, detail, seconds)


def run(only: str | None = None, cfg: SuiteConfig | None = None) -> list[CriterionResult]:
    cfg = cfg or SuiteConfig()
    return [run_criterion(entry, cfg) for entry in select(only)]
