"""Conformal embeddings, Dynkin indices and branching of level-one modules.

An :class:`Embedding` is given by an integer restriction matrix ``R`` with
one row per simple coroot of the subalgebra: row ``i`` holds the
coordinates of that coroot in the ambient simple coroots, so the sub
Dynkin labels of an ambient weight ``nu`` are ``R @ nu``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

from . import affine
from .affine import LevelWeight, finite_character, graded_character, trace_anomaly
from .rootsys import LieType, RootSystem, Weight, _invert, build, inner
from .weyl import dagger

EMBEDDING_SCHEMA = "levelone.embedding/1"


class EmbeddingError(ValueError):
    """Embedding data is inconsistent (bad restriction matrix, wrong index, ...)."""


class BranchingError(ArithmeticError):
    """Branching left a residue that is not a non-negative sum of characters."""


@dataclass(frozen=True)
class Embedding:
    ambient: RootSystem
    sub: RootSystem
    restriction: tuple[tuple[int, ...], ...]
    index: tuple[int, ...]
    name: str = ""

    def restrict(self, weight: Sequence[int]) -> Weight:
        return tuple(sum(r * x for r, x in zip(row, weight)) for row in self.restriction)

    def sub_levels(self, k: int = 1) -> tuple[int, ...]:
        return tuple(k * d for d in self.index)

    def __str__(self) -> str:
        return self.name or f"{self.sub.type} < {self.ambient.type}"


# ---------------------------------------------------------------------------
# Dynkin diagrams


def _bond_graph(cartan):
    n = len(cartan)
    adj = {i: {} for i in range(n)}
    for i in range(n):
        for j in range(n):
            if i != j and cartan[i][j]:
                adj[i][j] = cartan[i][j] * cartan[j][i]
    return adj


def _components(adj):
    seen, comps = set(), []
    for start in sorted(adj):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def _path_from(adj, start, nodes):
    path, prev = [start], None
    while True:
        nxt = [u for u in adj[path[-1]] if u in nodes and u != prev and u not in path]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def classify(cartan: Sequence[Sequence[int]], lengths: Sequence[Fraction]) -> list[tuple[str, int, list[int]]]:
    """Identify the simple components of a Cartan matrix.

    Returns ``(series, rank, nodes)`` per component, with ``nodes`` listed in
    Bourbaki order.  Where the diagram has symmetries the ordering starting
    from the lowest-numbered admissible end node is chosen.
    """
    adj = _bond_graph(cartan)
    out = []
    for comp in _components(adj):
        nodes = set(comp)
        n = len(comp)
        if n == 1:
            out.append(("A", 1, comp))
            continue
        degree = {v: len(adj[v]) for v in comp}
        bonds = {(i, j): m for i in comp for j, m in adj[i].items()}
        maxbond = max(bonds.values())
        ends = sorted(v for v in comp if degree[v] == 1)
        if maxbond == 1:
            branch = [v for v in comp if degree[v] == 3]
            if not branch:
                out.append(("A", n, _path_from(adj, ends[0], nodes)))
                continue
            c = branch[0]
            arms = sorted((_path_from(adj, u, nodes - {c}) for u in sorted(adj[c])), key=lambda p: (len(p), p[-1]))
            lens = tuple(len(a) for a in arms)
            if lens[:2] == (1, 1):
                long_arm = arms[2]
                out.append(("D", n, list(reversed(long_arm)) + [c, arms[0][0], arms[1][0]]))
            elif lens in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
                short, a2, rest = arms
                out.append(("E", n, [a2[1], short[0], a2[0], c] + rest))
            else:
                raise EmbeddingError(f"unrecognized simply-laced diagram with arms {lens}")
            continue
        if maxbond == 3:
            a, b = comp
            short, long_ = (a, b) if lengths[a] < lengths[b] else (b, a)
            out.append(("G", 2, [short, long_]))
            continue
        (i, j), = {tuple(sorted(k)) for k, m in bonds.items() if m == 2}
        if n == 4 and degree[i] == 2 and degree[j] == 2:
            long_, short = (i, j) if lengths[i] > lengths[j] else (j, i)
            path_long = _path_from(adj, long_, nodes - {short})
            path_short = _path_from(adj, short, nodes - {long_})
            out.append(("F", 4, list(reversed(path_long)) + path_short))
            continue
        leaf = i if degree[i] == 1 else j
        other = j if leaf == i else i
        if n == 2:
            long_, short = (i, j) if lengths[i] > lengths[j] else (j, i)
            out.append(("B", 2, [long_, short]))
            continue
        start = [e for e in ends if e != leaf][0]
        path = _path_from(adj, start, nodes)
        assert path[-1] == leaf and path[-2] == other
        series = "B" if lengths[leaf] < lengths[other] else "C"
        out.append((series, n, path))
    return out


# Extended-diagram deletions of e8 listed in the conformal classification,
# with sub-diagram nodes in Bourbaki order.  Node 0 is the extra node -theta.
# Orientations are fixed so that the labels of the branching sets agree with
# the standard tables (so(16) spinor is varpi_7; sl(5)+sl(5) pairs
# (varpi_i, varpi_{2i mod 5}); sl(3)+e6 pairs (varpi_1, varpi_1)).
E8_MAXIMAL_RANK = {
    "D8": (1, [[0, 8, 7, 6, 5, 4, 3, 2]]),
    "A8": (2, [[1, 3, 4, 5, 6, 7, 8, 0]]),
    "A4+A4": (5, [[0, 8, 7, 6], [1, 3, 4, 2]]),
    "A2+E6": (7, [[0, 8], [1, 2, 3, 4, 5, 6]]),
    "A1+E7": (8, [[0], [1, 2, 3, 4, 5, 6, 7]]),
}

D8_SPLITTINGS = {
    "D4+D4": (4, [[0, 2, 1, 3], [5, 6, 7, 8]]),
}

_DOCUMENTED = {"E8": E8_MAXIMAL_RANK, "D8": D8_SPLITTINGS}


def extended_nodes(rs: RootSystem) -> list[tuple[Weight, Weight]]:
    """Roots of the extended Dynkin diagram as (labels, simple-root coefficients).

    Entry 0 is ``-theta``; entry ``i`` is the simple root ``alpha_i``.
    """
    if not rs.is_simple:
        raise EmbeddingError("the extended diagram needs a simple ambient algebra")
    out = [(tuple(-x for x in rs.theta), tuple(-x for x in rs.marks[0]))]
    for i in range(rs.rank):
        out.append((rs.simple_root(i), tuple(int(j == i) for j in range(rs.rank))))
    return out


def _coroot_row(rs: RootSystem, coeffs: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of the coroot of the root ``sum c_j alpha_j`` in the simple coroots."""
    root_sq = sum(
        ci * cj * rs.simple_root_lengths[i] * rs.cartan[i][j] / 2
        for i, ci in enumerate(coeffs)
        for j, cj in enumerate(coeffs)
        if ci and cj
    )
    row = []
    for j, c in enumerate(coeffs):
        v = Fraction(c) * rs.simple_root_lengths[j] / root_sq
        if v.denominator != 1:
            raise EmbeddingError("coroot is not integral in the ambient coroot lattice")
        row.append(int(v))
    return tuple(row)


def borel_de_siebenthal(
    rs: RootSystem,
    delete_node: int | Sequence[int],
    order: Sequence[Sequence[int]] | None = None,
    name: str = "",
) -> Embedding:
    """Subalgebra generated by the extended-diagram nodes that remain after deletion.

    ``order`` lists the kept nodes per component in Bourbaki order; when
    omitted the diagram is classified and a canonical orientation is used.
    """
    deleted = {delete_node} if isinstance(delete_node, int) else set(delete_node)
    nodes = extended_nodes(rs)
    if any(not 0 <= d < len(nodes) for d in deleted):
        raise EmbeddingError(f"node index out of range 0..{rs.rank}")
    kept = [i for i in range(len(nodes)) if i not in deleted]
    if len(kept) != rs.rank:
        raise EmbeddingError(f"deleting {sorted(deleted)} drops the rank to {len(kept)}")

    def ip(a, b):
        return inner(rs, nodes[a][0], nodes[b][0])

    lengths = {i: ip(i, i) for i in kept}
    if order is None:
        idx = {v: p for p, v in enumerate(kept)}
        local = [[int(2 * ip(a, b) / lengths[a]) for b in kept] for a in kept]
        comps = classify(local, [lengths[v] for v in kept])
        order = [[kept[p] for p in c[2]] for c in comps]
        series = [(c[0], c[1]) for c in comps]
        del idx
    else:
        flat = [v for comp in order for v in comp]
        if sorted(flat) != kept:
            raise EmbeddingError(f"ordering {order} does not match kept nodes {kept}")
        series = []
        for comp in order:
            local = [[int(2 * ip(a, b) / lengths[a]) for b in comp] for a in comp]
            ((s, n, perm),) = classify(local, [lengths[v] for v in comp])
            series.append((s, n))
    sub = build(LieType(tuple(series)))
    flat = [v for comp in order for v in comp]
    cartan = [[int(2 * ip(a, b) / lengths[a]) for b in flat] for a in flat]
    if tuple(tuple(r) for r in cartan) != sub.cartan:
        raise EmbeddingError(f"node ordering {order} is not a Bourbaki ordering for {sub.type}")
    restriction = tuple(_coroot_row(rs, nodes[v][1]) for v in flat)
    index = _compute_index(rs, sub, restriction)
    return Embedding(rs, sub, restriction, index, name or f"{rs.type}:{sub.type}")


def documented_embedding(ambient: str, sub: str) -> Embedding:
    """Embeddings from the documented extended-diagram tables, e.g. ``("E8", "A4+A4")``."""
    return _documented(str(LieType.parse(ambient)), str(LieType.parse(sub)))


@lru_cache(maxsize=None)
def _documented(ambient: str, sub: str) -> Embedding:
    table = _DOCUMENTED.get(ambient, {})
    if sub not in table:
        raise EmbeddingError(f"no documented extended-diagram embedding {sub} < {ambient}")
    node, order = table[sub]
    return borel_de_siebenthal(build(ambient), node, order, name=f"{ambient}:{sub}")


def compose(outer: Embedding, inner_emb: Embedding, name: str = "") -> Embedding:
    """The chain ``inner_emb.sub < inner_emb.ambient = outer.sub < outer.ambient``."""
    if inner_emb.ambient != outer.sub:
        raise EmbeddingError(f"cannot compose {inner_emb} with {outer}")
    r = tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*outer.restriction)) for row in inner_emb.restriction
    )
    index = _compute_index(outer.ambient, inner_emb.sub, r)
    return Embedding(outer.ambient, inner_emb.sub, r, index, name or f"{outer.ambient.type}:{inner_emb.sub.type}")


# ---------------------------------------------------------------------------
# index and conformality


def _compute_index(ambient: RootSystem, sub: RootSystem, restriction) -> tuple[int, ...]:
    r_amb = ambient.rank
    if any(len(row) != r_amb for row in restriction) or len(restriction) != sub.rank:
        raise EmbeddingError(
            f"restriction matrix must be {sub.rank} x {r_amb}, got {len(restriction)} x "
            f"{len(restriction[0]) if restriction else 0}"
        )
    g_inv = _invert([list(r) for r in ambient.form])
    p_inv = _invert([list(r) for r in sub.form])
    pulled = [
        [sum(restriction[i][a] * g_inv[a][b] * restriction[j][b] for a in range(r_amb) for b in range(r_amb)) for j in range(sub.rank)]
        for i in range(sub.rank)
    ]
    slices = sub.component_slices()
    index = []
    for ci, sl in enumerate(slices):
        i0 = sl.start
        d = pulled[i0][i0] / p_inv[i0][i0]
        for i in range(sl.start, sl.stop):
            for j in range(sub.rank):
                in_block = sl.start <= j < sl.stop
                expected = d * p_inv[i][j] if in_block else 0
                if pulled[i][j] != expected:
                    raise EmbeddingError("pulled-back form is not a multiple of the normalized form")
        if d.denominator != 1 or d <= 0:
            raise EmbeddingError(f"Dynkin index {d} is not a positive integer")
        index.append(int(d))
    return tuple(index)


def dynkin_index(e: Embedding) -> tuple[int, ...]:
    """Dynkin (multi-)index recomputed from the restriction matrix."""
    return _compute_index(e.ambient, e.sub, e.restriction)


@dataclass(frozen=True)
class ConformalCertificate:
    conformal: bool
    sub_anomaly: Fraction
    ambient_anomaly: Fraction
    level: int

    def __bool__(self) -> bool:
        return self.conformal


def is_conformal(e: Embedding, k: int = 1) -> ConformalCertificate:
    """Compare ``c(p, k * index)`` with ``c(g, k)`` exactly."""
    if k < 1:
        raise ValueError("level must be positive")
    c_sub = affine.conformal_anomaly(e.sub, e.sub_levels(k))
    c_amb = affine.conformal_anomaly(e.ambient, k)
    return ConformalCertificate(c_sub == c_amb, c_sub, c_amb, k)


# ---------------------------------------------------------------------------
# branching


def _peel(sub: RootSystem, residue: dict[Weight, int]) -> list[tuple[Weight, int]]:
    """Write a weight multiset as a non-negative sum of irreducible characters."""
    residue = {w: m for w, m in residue.items() if m}
    found = []
    while residue:
        if any(m < 0 for m in residue.values()):
            raise BranchingError("negative multiplicity in branching residue")
        doms = [w for w in residue if all(x >= 0 for x in w)]
        if not doms:
            raise BranchingError("residue has no dominant weight")
        top = max(doms, key=lambda w: (inner(sub, w, w), w))
        mult = residue[top]
        found.append((top, mult))
        for w, m in finite_character(sub, top).items():
            v = residue.get(w, 0) - mult * m
            if v:
                residue[w] = v
            else:
                residue.pop(w, None)
    return found


def _restrict_slice(e: Embedding, weights: Mapping[Weight, int]) -> dict[Weight, int]:
    out: dict[Weight, int] = {}
    for w, m in weights.items():
        v = e.restrict(w)
        out[v] = out.get(v, 0) + m
    return out


def branch_finite(e: Embedding, lam: Sequence[int]) -> dict[Weight, int]:
    """Decompose the finite module ``V_lam`` of the ambient algebra under the subalgebra."""
    lam = tuple(lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant")
    restricted = _restrict_slice(e, finite_character(e.ambient, lam))
    return dict(sorted(_peel(e.sub, restricted)))


@dataclass(frozen=True)
class BranchEntry:
    mu: LevelWeight
    shift: int
    mult: int


@dataclass
class BranchingResult:
    ambient_weight: LevelWeight
    entries: list[BranchEntry]
    verified_to_grade: int
    embedding: Embedding = field(repr=False, default=None)

    def as_set(self) -> set[tuple[Weight, int, int]]:
        return {(en.mu.weight, en.shift, en.mult) for en in self.entries}

    def to_dict(self) -> dict:
        return {
            "embedding": str(self.embedding) if self.embedding else None,
            "lambda": list(self.ambient_weight.weight),
            "level": list(self.ambient_weight.level),
            "verified_to_grade": self.verified_to_grade,
            "entries": [
                {"mu": list(en.mu.weight), "shift": en.shift, "mult": en.mult} for en in self.entries
            ],
        }


def branch_affine(e: Embedding, lw: LevelWeight, cutoff: int, budget: int = affine.DEFAULT_CHARACTER_BUDGET) -> BranchingResult:
    """Decompose ``H_lambda`` of the ambient affine algebra grade by grade up to ``cutoff``.

    At each grade the restricted ambient slice, minus the contributions of
    sub-modules already found, must be a non-negative sum of finite
    characters; each highest weight found there starts a new sub-module
    whose shift is that grade.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    k = lw.level[0]
    cert = is_conformal(e, k)
    if not cert:
        raise BranchingError(f"{e} is not conformal at level {k}: {cert.sub_anomaly} != {cert.ambient_anomaly}")
    lw.validate(e.ambient)
    sub_levels = e.sub_levels(k)
    amb_char = graded_character(e.ambient, lw, cutoff, budget)
    delta_amb = trace_anomaly(e.ambient, k, lw)
    entries: list[BranchEntry] = []
    sub_chars = {}
    for m in range(cutoff + 1):
        residue = _restrict_slice(e, amb_char.grade(m))
        for en in entries:
            ch = sub_chars[en.mu.weight]
            for w, mult in ch.grade(m - en.shift).items():
                v = residue.get(w, 0) - en.mult * mult
                if v:
                    residue[w] = v
                else:
                    residue.pop(w, None)
        for mu, mult in _peel(e.sub, residue):
            try:
                mu_lw = affine.level_weight(e.sub, mu, sub_levels)
            except affine.AlcoveError as exc:
                raise BranchingError(f"highest weight {mu} at grade {m} is not integrable: {exc}") from exc
            shift = trace_anomaly(e.sub, sub_levels, mu_lw) - delta_amb
            if shift != m:
                raise BranchingError(f"shift mismatch for {mu}: grade {m}, anomaly difference {shift}")
            entries.append(BranchEntry(mu_lw, m, mult))
            sub_chars[mu] = graded_character(e.sub, mu_lw, cutoff - m, budget)
    entries.sort(key=lambda en: (en.shift, en.mu.weight))
    return BranchingResult(lw, entries, cutoff, e)


def duality_check(e: Embedding, lw: LevelWeight, cutoff: int) -> bool:
    """Whether ``B(lambda^dagger)`` is the entrywise dagger of ``B(lambda)``."""
    return duality_report(e, lw, cutoff)["ok"]


def duality_report(e: Embedding, lw: LevelWeight, cutoff: int) -> dict:
    b = branch_affine(e, lw, cutoff)
    lw_dag = LevelWeight(dagger(e.ambient, lw.weight), lw.level)
    b_dag = branch_affine(e, lw_dag, cutoff)
    image = {(dagger(e.sub, w), n, m) for w, n, m in b.as_set()}
    pairs = sorted((w, dagger(e.sub, w)) for w, _, _ in b.as_set())
    return {"ok": image == b_dag.as_set(), "pairs": pairs, "branching": b, "dual_branching": b_dag}


# ---------------------------------------------------------------------------
# data files


def embedding_to_json(e: Embedding, experimental: bool = False, source: str = "") -> str:
    data = {
        "schema": EMBEDDING_SCHEMA,
        "name": e.name,
        "ambient": str(e.ambient.type),
        "sub": str(e.sub.type),
        "restriction": [list(r) for r in e.restriction],
        "declared_index": list(e.index),
        "experimental": experimental,
        "source": source,
    }
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def embedding_from_json(text: str) -> Embedding:
    """Parse and validate an embedding data file.

    Rejects files whose index does not match the restriction matrix, whose
    highest roots restrict outside the sub alcove, or which are not
    conformal at level one.
    """
    try:
        data = json.loads(text)
        ambient = build(data["ambient"])
        sub = build(data["sub"])
        restriction = tuple(tuple(int(x) for x in row) for row in data["restriction"])
        declared = tuple(int(x) for x in data["declared_index"])
    except (KeyError, TypeError, ValueError) as exc:
        raise EmbeddingError(f"malformed embedding file: {exc}") from exc
    index = _compute_index(ambient, sub, restriction)
    if index != declared:
        raise EmbeddingError(f"declared index {declared} does not match computed index {index}")
    e = Embedding(ambient, sub, restriction, index, data.get("name") or f"{ambient.type}:{sub.type}")
    for theta in ambient.highest_roots:
        restricted = e.restrict(theta)
        for lev, bound in zip(affine.level_of(sub, restricted), e.sub_levels(1)):
            if abs(lev) > bound:
                raise EmbeddingError("highest root restricts outside the level-index alcove")
    if not is_conformal(e, 1):
        raise EmbeddingError(f"{e} is not conformal at level 1")
    return e


def load_embedding_file(path) -> Embedding:
    with open(path, encoding="utf-8") as fh:
        return embedding_from_json(fh.read())


def shipped_embedding(name: str) -> Embedding:
    """Embeddings shipped as data files (``g2f4`` for ``G2+F4 < E8``)."""
    text = resources.files("levelone").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return embedding_from_json(text)


def resolve(spec: str, embedding_file=None) -> Embedding:
    """Resolve an embedding spec like ``e8:D8`` or ``e8:A4+A4``.

    ``embedding_file`` overrides the built-in tables.  ``e8:D4+D4`` is the
    chain through ``D8``; ``e8:G2+F4`` comes from the shipped data file.
    """
    if embedding_file is not None:
        return load_embedding_file(embedding_file)
    try:
        amb, sub = spec.split(":")
    except ValueError as exc:
        raise EmbeddingError(f"embedding spec {spec!r} should look like 'e8:D8'") from exc
    amb = str(LieType.parse(amb))
    sub = str(LieType.parse(sub))
    if amb == sub:
        rs = build(amb)
        ident = tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
        return Embedding(rs, rs, ident, (1,) * len(rs.components), f"{amb}:{amb}")
    if amb == "E8" and sub == "D4+D4":
        return compose(documented_embedding("E8", "D8"), documented_embedding("D8", "D4+D4"), "E8:D4+D4")
    if amb == "E8" and sub == "G2+F4":
        return shipped_embedding("g2f4")
    return documented_embedding(amb, sub)


E8_CONFORMAL_ROWS = ("D8", "A8", "A4+A4", "A2+E6", "A1+E7", "G2+F4")
