"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are coefficient tuples in the power basis ``1, zeta, ...,
zeta^(phi(m)-1)``.  Sums of roots of unity are usually accumulated in the
group ring Z[C_m] (integer vectors of length m indexed by exponent) and
reduced modulo the cyclotomic polynomial only when a field value is needed.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Polynomial division, coefficients listed from the constant term up."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        c = num[-1] if lead == 1 else Fraction(num[-1]) / lead
        q[shift] = c
        for i, d in enumerate(den):
            num[shift + i] -= c * d
        while num and num[-1] == 0:
            num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, constant term first."""
    if m < 1:
        raise ValueError("m must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(int(c) for c in poly)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


class CyclotomicField:
    def __init__(self, m: int):
        self.m = m
        self.phi = cyclotomic_polynomial(m)
        self.degree = len(self.phi) - 1
        # row e: coefficients of zeta^e in the power basis
        red = np.zeros((m, self.degree), dtype=object)
        for e in range(m):
            _, r = _poly_divmod([0] * e + [1], list(self.phi))
            for i, c in enumerate(r):
                red[e, i] = int(c)
        self._reduction = red.astype(np.int64)
        self.zero = CycElement(self, (Fraction(0),) * self.degree)
        self.one = self.zeta(0)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.m})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.m == self.m

    def __hash__(self):
        return hash(("Q(zeta)", self.m))

    def zeta(self, e: int) -> "CycElement":
        return CycElement(self, tuple(Fraction(int(c)) for c in self._reduction[e % self.m]))

    def rational(self, x) -> "CycElement":
        return CycElement(self, (Fraction(x),) + (Fraction(0),) * (self.degree - 1))

    def reduce_array(self, arr: np.ndarray) -> np.ndarray:
        """Map group-ring arrays ``[..., m]`` to power-basis arrays ``[..., degree]``."""
        return np.asarray(arr, dtype=np.int64) @ self._reduction

    def from_group_ring(self, vec: Sequence[int], scale=1) -> "CycElement":
        coeffs = self.reduce_array(np.asarray(vec))
        return CycElement(self, tuple(Fraction(int(c)) / scale for c in coeffs))

    def from_coeffs(self, coeffs: Sequence) -> "CycElement":
        return CycElement(self, tuple(Fraction(c) for c in coeffs))


class CycElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        return isinstance(other, CycElement) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.m, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c]
        return f"<{' + '.join(terms) or '0'} in Q(zeta_{self.field.m})>"

    def _lift(self, other):
        if isinstance(other, CycElement):
            return other
        return self.field.rational(other)

    def __add__(self, other):
        other = self._lift(other)
        return CycElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        n = self.field.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        phi = self.field.phi
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                # phi is monic of degree n
                for i in range(n + 1):
                    prod[k - n + i] -= c * phi[i]
        return CycElement(self.field, tuple(prod[:n]))

    __rmul__ = __mul__

    def inverse(self) -> "CycElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid: s * self + t * phi = 1
        r0, r1 = [Fraction(c) for c in self.field.phi], _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        inv = [c / r1[0] for c in s1]
        _, inv = _poly_divmod(inv, list(self.field.phi))
        inv = list(inv) + [Fraction(0)] * (self.field.degree - len(inv))
        return CycElement(self.field, tuple(Fraction(c) for c in inv))

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.field.m)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def rank(matrix: Sequence[Sequence[CycElement]]) -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Entries stay in the ring generated by the input entries; the exact
    division by the previous pivot is carried out in the field.
    """
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    prev = None
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        for i in range(r + 1, nrows):
            a = rows[i][c]
            new = []
            for j in range(ncols):
                v = p * rows[i][j] - a * rows[r][j]
                if prev is not None:
                    v = v / prev
                new.append(v)
            rows[i] = new
        prev = p
        r += 1
        if r == nrows:
            break
    return r
