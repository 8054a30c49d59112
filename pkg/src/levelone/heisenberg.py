"""Finite Heisenberg groups and their level-one representation.

For a finite abelian group ``A`` (a product of cyclic groups) and a genus
``g`` the symplectic group is ``K = A^g x dual(A^g)``, written as pairs
``(a, b)`` of integer vectors.  The character attached to ``b`` is
``chi_b(x) = prod_i zeta_{n_i}^(s_i b_i x_i)`` with a sign ``s_i = +-1`` per
cyclic factor, so that the pairing can model products of centers whose
Weil pairings have opposite orientation.

The representation lives on functions ``A^g -> C`` with
``(U(a, b) f)(x) = chi_b(x) f(x + a)``.  Then
``U(v) U(w) = beta(v, w) U(v + w)`` with ``beta((a, b), (a', b')) = chi_b'(a)``,
and a lift of a subgroup ``L`` is a phase function with
``c(v + w) = c(v) c(w) beta(v, w)``.

All phases are roots of unity of order dividing ``m = 2 * exponent(A)``
and are stored as exponents mod ``m``; sums of them live in the group ring
and are reduced to exact elements of Q(zeta_m) when compared.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from collections import deque
from dataclasses import dataclass
from functools import reduce
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import CyclotomicField, rank

DEFAULT_SIZE_GUARD = 10**4

Element = tuple[int, ...]


class HeisenbergError(ValueError):
    """Invalid subgroup, lift or tensor for the finite model."""


class SizeGuardExceeded(HeisenbergError):
    pass


@dataclass(frozen=True)
class FiniteAbelian:
    cyclic_orders: tuple[int, ...]
    signs: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "cyclic_orders", tuple(int(n) for n in self.cyclic_orders))
        if any(n < 1 for n in self.cyclic_orders):
            raise HeisenbergError("cyclic orders must be positive")
        signs = self.signs or (1,) * len(self.cyclic_orders)
        object.__setattr__(self, "signs", tuple(int(s) for s in signs))
        if len(self.signs) != len(self.cyclic_orders) or any(s not in (1, -1) for s in self.signs):
            raise HeisenbergError("signs must be +1 or -1, one per cyclic factor")

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.cyclic_orders, 1)

    def power(self, g: int) -> "FiniteAbelian":
        return FiniteAbelian(self.cyclic_orders * g, self.signs * g)

    def __str__(self) -> str:
        return " x ".join(f"Z/{n}" for n in self.cyclic_orders) or "1"


class _Monomial:
    """Matrix sending ``e_y`` to ``zeta^phase[y] e_{rows[y]}``."""

    __slots__ = ("rows", "phase")

    def __init__(self, rows: np.ndarray, phase: np.ndarray):
        self.rows = rows
        self.phase = phase

    def inverse_transpose(self, m: int) -> "_Monomial":
        # a unitary monomial matrix: same pattern, conjugate phases
        return _Monomial(self.rows, (-self.phase) % m)


def _left(mono: _Monomial, x: np.ndarray) -> np.ndarray:
    """``mono @ x`` for a group-ring matrix ``x`` of shape (n, k, m)."""
    m = x.shape[-1]
    out = np.zeros_like(x)
    idx = (np.arange(m)[None, :] - mono.phase[:, None]) % m
    out[mono.rows] = np.take_along_axis(x, np.broadcast_to(idx[:, None, :], x.shape), axis=-1)
    return out


def _right(x: np.ndarray, mono: _Monomial) -> np.ndarray:
    """``x @ mono`` for a group-ring matrix ``x`` of shape (k, n, m)."""
    m = x.shape[-1]
    cols = x[:, mono.rows, :]
    idx = (np.arange(m)[None, :] - mono.phase[:, None]) % m
    return np.take_along_axis(cols, np.broadcast_to(idx[None, :, :], cols.shape), axis=-1)


def _transpose(mono: _Monomial) -> _Monomial:
    inv = np.argsort(mono.rows)
    return _Monomial(inv, mono.phase[inv])


def group_ring_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = a.shape[-1]
    out = np.zeros(a.shape[:1] + b.shape[1:2] + (m,), dtype=np.int64)
    for e in range(m):
        ae = a[..., e]
        if not ae.any():
            continue
        for f in range(m):
            bf = b[..., f]
            if bf.any():
                out[..., (e + f) % m] += ae @ bf
    return out


class HeisenbergModel:
    """The level-one representation of the Heisenberg group of ``A^g x dual(A^g)``."""

    def __init__(self, A: FiniteAbelian, genus: int, size_guard: int = DEFAULT_SIZE_GUARD, m: int | None = None):
        if genus < 0:
            raise HeisenbergError("genus must be non-negative")
        if A.order ** (2 * genus) > size_guard:
            raise SizeGuardExceeded(f"|A|^(2g) = {A.order ** (2 * genus)} exceeds the size guard {size_guard}")
        self.A = A
        self.genus = genus
        self.base = A.power(genus)
        self.orders = self.base.cyclic_orders
        self.signs = self.base.signs
        self.r = len(self.orders)
        self.m = m or 2 * A.exponent
        if self.m % (2 * A.exponent):
            raise HeisenbergError("phase order must be a multiple of twice the exponent")
        self.field = CyclotomicField(self.m)
        self.dim = self.base.order
        self._weights = np.array([self.m // n * s for n, s in zip(self.orders, self.signs)], dtype=np.int64)
        self._points = np.array(list(itertools.product(*[range(n) for n in self.orders])), dtype=np.int64).reshape(
            self.dim, self.r
        )
        self._radix = np.array([math.prod(self.orders[i + 1 :]) for i in range(self.r)], dtype=np.int64)

    # -- group structure --------------------------------------------------

    def normalize(self, v: Sequence[int]) -> Element:
        v = tuple(int(x) for x in v)
        if len(v) != 2 * self.r:
            raise HeisenbergError(f"elements of K have {2 * self.r} coordinates, got {len(v)}")
        return tuple(x % n for x, n in zip(v, self.orders + self.orders))

    def add(self, v: Element, w: Element) -> Element:
        return tuple((x + y) % n for x, y, n in zip(v, w, self.orders + self.orders))

    def elements(self) -> Iterable[Element]:
        return itertools.product(*[range(n) for n in self.orders + self.orders])

    @property
    def order(self) -> int:
        return self.dim**2

    def beta(self, v: Element, w: Element) -> int:
        """Exponent of ``chi_{b_w}(a_v)`` mod m."""
        a = v[: self.r]
        b = w[self.r :]
        return int(sum(int(k) * x * y for k, x, y in zip(self._weights, a, b)) % self.m)

    def commutator(self, v: Element, w: Element) -> int:
        return (self.beta(v, w) - self.beta(w, v)) % self.m

    def closure(self, gens: Sequence[Element]) -> list[Element]:
        gens = [self.normalize(g) for g in gens]
        zero = (0,) * (2 * self.r)
        seen = {zero}
        queue = deque([zero])
        while queue:
            v = queue.popleft()
            for g in gens:
                w = self.add(v, g)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return sorted(seen)

    def is_isotropic(self, gens: Sequence[Element]) -> bool:
        gens = [self.normalize(g) for g in gens]
        return all(self.commutator(v, w) == 0 for v in gens for w in gens)

    # -- lifts ------------------------------------------------------------

    def lift_values(self, gens: Sequence[Element], phases: Sequence[int]) -> dict[Element, int]:
        """Extend generator phases to all of ``L``; raises unless the result is a homomorphism."""
        gens = [self.normalize(g) for g in gens]
        if len(phases) != len(gens):
            raise HeisenbergError("one phase per generator is required")
        zero = (0,) * (2 * self.r)
        c = {zero: 0}
        queue = deque([zero])
        while queue:
            v = queue.popleft()
            for g, p in zip(gens, phases):
                w = self.add(v, g)
                val = (c[v] + p + self.beta(v, g)) % self.m
                if w in c:
                    if c[w] != val:
                        raise HeisenbergError("lift phases do not define a homomorphism")
                else:
                    c[w] = val
                    queue.append(w)
        return c

    def lifts(self, gens: Sequence[Element]) -> list[tuple[int, ...]]:
        """All generator phase vectors that give a valid lift of ``<gens>``.

        Any two differ by a character of ``L``, so there are ``|L|`` of them
        when ``L`` is isotropic and none otherwise.
        """
        gens = [self.normalize(g) for g in gens]
        if not self.is_isotropic(gens):
            return []
        partial = [()]
        for i in range(len(gens)):
            nxt = []
            for pre in partial:
                for p in range(self.m):
                    try:
                        self.lift_values(gens[: i + 1], pre + (p,))
                    except HeisenbergError:
                        continue
                    nxt.append(pre + (p,))
            partial = nxt
        return partial

    def random_maximal_isotropic(self, rng: random.Random) -> list[Element]:
        """Greedy random Lagrangian: keep adding elements of ``L^perp \\ L``."""
        gens: list[Element] = []
        current = {(0,) * (2 * self.r)}
        all_elems = list(self.elements())
        while len(current) < self.dim:
            candidates = [
                w for w in all_elems if w not in current and all(self.commutator(w, g) == 0 for g in gens)
            ]
            if not candidates:
                raise HeisenbergError("isotropic subgroup cannot be extended; pairing is degenerate")
            gens.append(rng.choice(candidates))
            current = set(self.closure(gens))
        return gens

    # -- operators --------------------------------------------------------

    def _index(self, pts: np.ndarray) -> np.ndarray:
        return (pts % np.array(self.orders, dtype=np.int64)) @ self._radix

    def operator(self, v: Element, phase: int = 0) -> _Monomial:
        """``zeta^phase U(v)`` as a monomial matrix."""
        v = self.normalize(v)
        a = np.array(v[: self.r], dtype=np.int64)
        b = np.array(v[self.r :], dtype=np.int64)
        src = self._points - a  # U e_y = chi_b(y - a) e_{y - a}
        rows = self._index(src)
        ph = ((src % np.array(self.orders, dtype=np.int64)) * b * self._weights).sum(axis=1) + phase
        return _Monomial(rows, ph % self.m)

    def projector_numerator(self, gens: Sequence[Element], phases: Sequence[int]) -> tuple[np.ndarray, int]:
        """``(sum_{v in L} c(v) U(v), |L|)`` as a group-ring matrix and its normalizer."""
        lift = self.lift_values(gens, phases)
        out = np.zeros((self.dim, self.dim, self.m), dtype=np.int64)
        cols = np.arange(self.dim)
        for v, c in lift.items():
            op = self.operator(v, c)
            np.add.at(out, (op.rows, cols, op.phase), 1)
        return out, len(lift)

    def validate_subgroup(self, gens: Sequence[Element], maximal: bool = True) -> list[Element]:
        gens = [self.normalize(g) for g in gens]
        if not self.is_isotropic(gens):
            raise HeisenbergError("subgroup is not isotropic for the commutator pairing")
        size = len(self.closure(gens))
        if maximal and size != self.dim:
            raise HeisenbergError(f"isotropic subgroup of order {size} is not maximal (needs {self.dim})")
        return gens

    def invariant_dim(self, gens: Sequence[Element], phases: Sequence[int], maximal: bool = True) -> int:
        """Dimension of the ``L``-invariant subspace as the trace of the averaging projector."""
        gens = self.validate_subgroup(gens, maximal)
        num, size = self.projector_numerator(gens, phases)
        trace = self.field.from_group_ring(np.einsum("iim->m", num), scale=size)
        if not trace.is_rational() or trace.coeffs[0].denominator != 1 or trace.coeffs[0] < 0:
            raise HeisenbergError(f"projector trace {trace} is not a non-negative integer")
        return int(trace.coeffs[0])

    def projector_is_idempotent(self, gens: Sequence[Element], phases: Sequence[int]) -> bool:
        """Check ``P^2 = P`` exactly, i.e. ``N^2 = |L| N`` for the numerator ``N``."""
        num, size = self.projector_numerator(gens, phases)
        sq = group_ring_matmul(num, num)
        return bool(np.array_equal(self.field.reduce_array(sq), self.field.reduce_array(size * num)))

    def invariant_dim_nullspace(self, gens: Sequence[Element], phases: Sequence[int]) -> int:
        """Oracle: ``dim - rank`` of the stacked ``c(g) U(g) - 1`` over generators."""
        lift = self.lift_values(gens, phases)
        rows = []
        for g in gens:
            g = self.normalize(g)
            op = self.operator(g, lift[g])
            mat = np.zeros((self.dim, self.dim, self.m), dtype=np.int64)
            mat[op.rows, np.arange(self.dim), op.phase] += 1
            mat[np.arange(self.dim), np.arange(self.dim), 0] -= 1
            red = self.field.reduce_array(mat)
            rows.extend([[self.field.from_coeffs(red[i, j]) for j in range(self.dim)] for i in range(self.dim)])
        return self.dim - rank(rows)


def invariant_dim(
    A: FiniteAbelian,
    genus: int,
    L: Sequence[Sequence[int]],
    lift_phases: Sequence[int],
    size_guard: int = DEFAULT_SIZE_GUARD,
    maximal: bool = True,
) -> int:
    """Dimension of the subspace fixed by the lifted isotropic subgroup ``L``."""
    return HeisenbergModel(A, genus, size_guard).invariant_dim([tuple(v) for v in L], lift_phases, maximal)


# ---------------------------------------------------------------------------
# strange duality in the finite model


@dataclass(frozen=True)
class Isomorphism:
    """``A -> B`` multiplying cyclic factor ``i`` by the unit ``multipliers[i]``."""

    multipliers: tuple[int, ...]


class DualityModel:
    """Two level-one representations glued along the anti-symplectic graph of ``iota``.

    On ``K_A`` the map is ``(a, b) -> (u a, -s_A s_B u^-1 b)`` factorwise, so
    ``beta_B(iota v, iota w) = beta_A(v, w)^-1``: the graph is isotropic in
    ``K_A x K_B``, maximal, and carries the trivial lift (the central scalar
    is inverted on the second factor).
    """

    def __init__(self, A: FiniteAbelian, B: FiniteAbelian, iota: Isomorphism, genus: int, size_guard: int = DEFAULT_SIZE_GUARD):
        if A.cyclic_orders != B.cyclic_orders:
            raise HeisenbergError("the finite model needs A and B with the same cyclic factors")
        m = 2 * A.exponent
        self.ma = HeisenbergModel(A, genus, size_guard, m)
        self.mb = HeisenbergModel(B, genus, size_guard, m)
        self.m = m
        self.field = self.ma.field
        mult = tuple(iota.multipliers) * genus
        orders = self.ma.orders
        if len(mult) != len(orders) or any(math.gcd(u, n) != 1 for u, n in zip(mult, orders)):
            raise HeisenbergError("iota must multiply each cyclic factor by a unit")
        self._u = mult
        self._uinv = tuple(pow(u, -1, n) if n > 1 else 0 for u, n in zip(mult, orders))
        self._flip = tuple(-sa * sb for sa, sb in zip(self.ma.signs, self.mb.signs))
        self.dim = self.ma.dim

    def iota(self, v: Element) -> Element:
        r = self.ma.r
        a, b = v[:r], v[r:]
        return self.mb.normalize(
            tuple(u * x for u, x in zip(self._u, a)) + tuple(f * ui * y for f, ui, y in zip(self._flip, self._uinv, b))
        )

    def generators(self) -> list[Element]:
        r = self.ma.r
        return [tuple(int(i == j) for j in range(2 * r)) for i in range(2 * r)]

    def graph_lift_is_trivial(self) -> bool:
        gens = self.generators()
        return all(
            (self.ma.beta(v, w) + self.mb.beta(self.iota(v), self.iota(w))) % self.m == 0 for v in gens for w in gens
        )

    def apply(self, v: Element, sigma: np.ndarray) -> np.ndarray:
        """``U_A(v) sigma U_B(iota v)^T`` on a group-ring matrix."""
        ua = self.ma.operator(v)
        ub = self.mb.operator(self.iota(v))
        return _right(_left(ua, sigma), _transpose(ub))

    def is_invariant(self, sigma: np.ndarray) -> bool:
        red = self.field.reduce_array(sigma)
        return all(np.array_equal(self.field.reduce_array(self.apply(g, sigma)), red) for g in self.generators())

    def invariant_tensor(self) -> np.ndarray:
        """The invariant tensor obtained by averaging a seed ``e_x0 (x) e_y0`` over the graph."""
        if not self.graph_lift_is_trivial():
            raise HeisenbergError("graph of iota is not isotropic with trivial lift")
        n = self.dim
        for x0, y0 in itertools.product(range(n), range(n)):
            sigma = np.zeros((n, n, self.m), dtype=np.int64)
            for v in self.ma.elements():
                ua = self.ma.operator(v)
                ub = self.mb.operator(self.iota(v))
                sigma[ua.rows[x0], ub.rows[y0], (ua.phase[x0] + ub.phase[y0]) % self.m] += 1
            if self.field.reduce_array(sigma).any():
                return sigma
        raise HeisenbergError("no invariant tensor found")

    def to_field_matrix(self, arr: np.ndarray):
        red = self.field.reduce_array(arr)
        return [[self.field.from_coeffs(red[i, j]) for j in range(arr.shape[1])] for i in range(arr.shape[0])]

    def induced_map(self, sigma: np.ndarray) -> np.ndarray:
        """The map ``V_A^* -> V_B`` of ``sigma``, i.e. its transpose."""
        return np.swapaxes(sigma, 0, 1)

    def action_pairs(self) -> list[tuple[_Monomial, _Monomial]]:
        """``(rho_A^*(v), rho_B(iota v))`` for generators ``v``."""
        return [
            (self.ma.operator(v).inverse_transpose(self.m), self.mb.operator(self.iota(v))) for v in self.generators()
        ]

    def averaged_reverse_map(self, seed: np.ndarray) -> np.ndarray:
        """Equivariant ``V_B -> V_A^*`` from averaging ``rho_A^*(v)^-1 R rho_B(iota v)``."""
        out = np.zeros_like(seed)
        for v in self.ma.elements():
            ua_t = _transpose(self.ma.operator(v))  # rho_A^*(v)^-1 = U_A(v)^T
            out += _right(_left(ua_t, seed), self.mb.operator(self.iota(v)))
        return out


def equivariance_check(map_arr: np.ndarray, pairs: Sequence[tuple[_Monomial, _Monomial]], field: CyclotomicField) -> bool:
    """Whether ``Y map = map X`` for every generator pair ``(X, Y)``."""
    for x, y in pairs:
        lhs = field.reduce_array(_left(y, map_arr))
        rhs = field.reduce_array(_right(map_arr, x))
        if not np.array_equal(lhs, rhs):
            return False
    return True


def strange_duality_map(
    A: FiniteAbelian,
    B: FiniteAbelian,
    iota: Isomorphism,
    genus: int,
    sigma: np.ndarray | str | None = None,
    size_guard: int = DEFAULT_SIZE_GUARD,
) -> dict:
    """Rank of the map ``V_A^* -> V_B`` induced by an invariant tensor.

    ``sigma=None`` uses the invariant tensor from :meth:`DualityModel.invariant_tensor`;
    ``sigma="zero"`` the zero tensor.  Non-invariant tensors are rejected.
    """
    model = DualityModel(A, B, iota, genus, size_guard)
    n = model.dim
    if sigma is None:
        sigma = model.invariant_tensor()
    elif isinstance(sigma, str):
        if sigma != "zero":
            raise HeisenbergError(f"unknown tensor keyword {sigma!r}")
        sigma = np.zeros((n, n, model.m), dtype=np.int64)
    sigma = np.asarray(sigma, dtype=np.int64)
    if sigma.shape != (n, n, model.m):
        raise HeisenbergError(f"tensor must have shape {(n, n, model.m)}")
    if not model.is_invariant(sigma):
        raise HeisenbergError("tensor is not invariant under the graph of iota")
    fmap = model.induced_map(sigma)
    r = rank(model.to_field_matrix(fmap))
    nonzero = bool(model.field.reduce_array(sigma).any())
    expected = n if nonzero else 0
    if r != expected:
        raise HeisenbergError(f"rank {r} contradicts the Schur argument (expected {expected})")
    return {
        "A": str(A),
        "B": str(B),
        "genus": genus,
        "dimension": n,
        "rank": r,
        "isomorphism": r == n,
        "equivariant": equivariance_check(fmap, model.action_pairs(), model.field),
    }


def schur_scalar(A: FiniteAbelian, genus: int, seed: int = 0, size_guard: int = DEFAULT_SIZE_GUARD):
    """Compose the sigma-induced map with an averaged reverse map; returns the scalar or None."""
    model = DualityModel(A, A, Isomorphism((1,) * len(A.cyclic_orders)), genus, size_guard)
    sigma = model.invariant_tensor()
    fmap = model.induced_map(sigma)
    rng = np.random.default_rng(seed)
    n = model.dim
    seed_mat = np.zeros((n, n, model.m), dtype=np.int64)
    seed_mat[..., 0] = rng.integers(-3, 4, size=(n, n))
    back = model.averaged_reverse_map(seed_mat)
    comp = model.field.reduce_array(group_ring_matmul(back, fmap))
    diag = comp[np.arange(n), np.arange(n)]
    off = comp.copy()
    off[np.arange(n), np.arange(n)] = 0
    if off.any() or not (diag == diag[0]).all():
        return None
    return model.field.from_coeffs(diag[0])


# ---------------------------------------------------------------------------
# scenarios

SCENARIO_SCHEMA = "levelone.heisenberg-scenario/1"


def load_scenario(source) -> dict:
    """Scenario from a path, a JSON string, a dict or a shipped name such as ``sl3_e6``."""
    if isinstance(source, dict):
        return source
    text = None
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, TypeError):
        pass
    if text is None:
        if str(source).lstrip().startswith("{"):
            text = str(source)
        else:
            text = resources.files("levelone").joinpath("data", "scenarios", f"{source}.json").read_text(encoding="utf-8")
    return json.loads(text)


def shipped_scenarios() -> list[str]:
    base = resources.files("levelone").joinpath("data", "scenarios")
    return sorted(p.name[:-5] for p in base.iterdir() if p.name.endswith(".json"))


def run_scenario(source, max_lifts: int = 16, size_guard: int = DEFAULT_SIZE_GUARD) -> dict:
    """Check that ``M(N) = N^(2g)`` is maximal isotropic in ``Z^(2g)`` and every lift fixes a line."""
    sc = load_scenario(source)
    Z = FiniteAbelian(tuple(sc["Z"]), tuple(sc["signs"]) if sc.get("signs") else None)
    g = int(sc["genus"])
    model = HeisenbergModel(Z, g, size_guard)
    r = len(Z.cyclic_orders)
    gens = []
    for nvec in sc.get("N", []):
        for j in range(g):
            for side in (0, 1):
                v = [0] * (2 * r * g)
                for i, x in enumerate(nvec):
                    v[side * r * g + j * r + i] = x
                gens.append(tuple(v))
    size = len(model.closure(gens))
    isotropic = model.is_isotropic(gens)
    report = {
        "name": sc.get("name", ""),
        "Z": str(Z),
        "genus": g,
        "dimension": model.dim,
        "order_MN": size,
        "isotropic": isotropic,
        "maximal": size == model.dim,
    }
    if isotropic:
        lifts = model.lifts(gens) if gens else [()]
        report["lift_count"] = len(lifts)
        dims = sorted({model.invariant_dim(gens, p, maximal=False) for p in lifts[:max_lifts]})
        report["invariant_dims"] = dims
    report["ok"] = bool(isotropic and report["maximal"] and report.get("invariant_dims") == [1])
    return report
