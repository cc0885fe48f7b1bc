"""Exact checks of two terminating q-identities and truncated checks of their limits."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .arith import Poly, RatFunc, Ring

QRING = Ring(("q",))
_q = QRING.gen("q")
ONE = RatFunc(QRING.one)


def qpow(e: int) -> RatFunc:
    """q^e for any integer e."""
    if e >= 0:
        return RatFunc(_q ** e)
    return RatFunc(QRING.one, _q ** (-e))


@lru_cache(maxsize=None)
def _pochhammer_poly(r: int) -> Poly:
    if r == 0:
        return QRING.one
    return _pochhammer_poly(r - 1) * (1 - _q ** r)


def q_pochhammer(r: int) -> RatFunc:
    """(q)_r = (1-q)(1-q^2)...(1-q^r)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return RatFunc(_pochhammer_poly(r))


@lru_cache(maxsize=None)
def h_ratio(n: int) -> RatFunc:
    """H_n = prod_{j=1..n} (1+q^j)/(1-q^j)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ONE
    return h_ratio(n - 1) * RatFunc(1 + _q ** n, 1 - _q ** n)


def _sum(terms) -> RatFunc:
    # group by denominator so most additions are plain polynomial sums
    groups: dict[Poly, Poly] = {}
    for t in terms:
        groups[t.den] = groups.get(t.den, QRING.zero) + t.num
    total = RatFunc(QRING.zero)
    for den, num in groups.items():
        total = total + RatFunc(num, den)
    return total


def identity7_sides(n: int) -> tuple[RatFunc, RatFunc]:
    if n < 0:
        raise ValueError("n must be >= 0")
    qp = q_pochhammer
    lhs = _sum(qpow(r * r) / (qp(r) * qp(n - r)) for r in range(n + 1))
    rhs = _sum(qpow((5 * r * r - r) // 2) * (-1) ** (r % 2) / (qp(n - r) * qp(n + r)) for r in range(-n, n + 1))
    return lhs, rhs


def check_identity7(n: int, perturb=0) -> bool:
    """``perturb`` is added to the left side (a mutation control)."""
    lhs, rhs = identity7_sides(n)
    return lhs + perturb == rhs


def identity8_sides(n: int, h: Callable[[int], RatFunc] | None = None) -> tuple[RatFunc, RatFunc]:
    if n < 0:
        raise ValueError("n must be >= 0")
    H = h or h_ratio
    hn = H(n)
    first = _sum(qpow(k * (n + 1)) * ((-1) ** (k % 2) * 2) / RatFunc(1 + _q ** k) * H(k) for k in range(n + 1))
    second = []
    for k in range(-n, n + 1):
        base = RatFunc(1 + _q ** k) if k >= 0 else RatFunc(_q ** (-k) + 1, _q ** (-k))
        second.append(qpow(k) * ((-1) ** (k % 2) * 4) / (base * base) * (H(n + k) / hn) * (H(n - k) / hn))
    lhs = first ** 4 * _sum(second)
    theta = _sum(qpow(k * k) * (-1) ** ((k * k) % 2) for k in range(-n, n + 1))
    return lhs, theta ** 4


def check_identity8(n: int, h: Callable[[int], RatFunc] | None = None) -> bool:
    lhs, rhs = identity8_sides(n, h)
    return lhs == rhs


# ---------------------------------------------------------------------------------
# truncated power series


class QSeries:
    """c_0 + c_1 q + ... + c_T q^T, exact, truncated at T."""

    __slots__ = ("coeffs", "T")

    def __init__(self, coeffs: Sequence, T: int):
        if T < 0:
            raise ValueError("truncation order must be >= 0")
        c = [Fraction(x) for x in list(coeffs)[: T + 1]]
        c += [Fraction(0)] * (T + 1 - len(c))
        self.coeffs = c
        self.T = T

    @classmethod
    def monomial(cls, e: int, T: int, c=1) -> "QSeries":
        out = [0] * (T + 1)
        if 0 <= e <= T:
            out[e] = c
        return cls(out, T)

    @classmethod
    def from_poly(cls, p: Poly, T: int) -> "QSeries":
        out = [0] * (T + 1)
        for (e,), c in p.items():
            if e <= T:
                out[e] = c
        return cls(out, T)

    def _check(self, other: "QSeries"):
        if other.T != self.T:
            raise ValueError("truncation orders differ")

    def __add__(self, other):
        self._check(other)
        return QSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.T)

    def __sub__(self, other):
        self._check(other)
        return QSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.T)

    def __neg__(self):
        return QSeries([-a for a in self.coeffs], self.T)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([a * other for a in self.coeffs], self.T)
        self._check(other)
        T = self.T
        out = [Fraction(0)] * (T + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(T + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return QSeries(out, T)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = QSeries.monomial(0, self.T)
        for _ in range(e):
            out = out * self
        return out

    def inverse(self) -> "QSeries":
        c = self.coeffs
        if c[0] == 0:
            raise ZeroDivisionError("constant term is zero")
        inv = [Fraction(0)] * (self.T + 1)
        inv[0] = 1 / c[0]
        for m in range(1, self.T + 1):
            s = sum(c[i] * inv[m - i] for i in range(1, m + 1))
            inv[m] = -s / c[0]
        return QSeries(inv, self.T)

    def __eq__(self, other):
        return isinstance(other, QSeries) and self.T == other.T and self.coeffs == other.coeffs

    def ints(self) -> list[int]:
        return [int(c) if c.denominator == 1 else c for c in self.coeffs]

    def __repr__(self):
        return f"QSeries({self.ints()}, T={self.T})"


def rr_sum_series(T: int) -> QSeries:
    """Sum over r of q^{r^2}/(q)_r; terms with r^2 > T cannot reach q^T."""
    R = math.isqrt(T) + 2
    total = QSeries([], T)
    for r in range(R + 1):
        if r * r > T:
            break
        total = total + QSeries.monomial(r * r, T) * QSeries.from_poly(_pochhammer_poly(r), T).inverse()
    return total


def rr_product_series(T: int) -> QSeries:
    out = QSeries.monomial(0, T)
    for m in range(1, T + 1):
        if m % 5 in (1, 4):
            out = out * (QSeries.monomial(0, T) - QSeries.monomial(m, T)).inverse()
    return out


def theta4_series(T: int) -> QSeries:
    K = math.isqrt(T) + 1
    theta = QSeries([], T)
    for k in range(-K, K + 1):
        theta = theta + QSeries.monomial(k * k, T)
    return theta ** 4


def lambert_series(T: int) -> QSeries:
    """1 + 8 sum_{k>=1} q^k / (1 + (-q)^k)^2."""
    out = QSeries.monomial(0, T)
    one = QSeries.monomial(0, T)
    for k in range(1, T + 1):
        d = one + QSeries.monomial(k, T, (-1) ** k)
        out = out + QSeries.monomial(k, T, 8) * (d * d).inverse()
    return out


# independent oracles


def count_partitions(m: int, allowed: Callable[[int], bool], min_gap: int = 0) -> int:
    """Brute-force count of partitions of m into allowed parts; with ``min_gap``,
    consecutive parts must differ by at least that much (distinct-style)."""

    @lru_cache(maxsize=None)
    def go(rest: int, largest: int) -> int:
        if rest == 0:
            return 1
        total = 0
        top = min(rest, largest)
        for p in range(top, 0, -1):
            if allowed(p):
                nxt = p - min_gap if min_gap else p
                total += go(rest - p, nxt)
        return total

    return go(m, m)


def rr_oracle(T: int) -> list[int]:
    return [count_partitions(m, lambda p: p % 5 in (1, 4)) for m in range(T + 1)]


def rr_gap_oracle(T: int) -> list[int]:
    """Partitions with parts differing by at least 2."""
    return [count_partitions(m, lambda p: True, min_gap=2) for m in range(T + 1)]


def r4_divisor(m: int) -> int:
    if m == 0:
        return 1
    return 8 * sum(d for d in range(1, m + 1) if m % d == 0 and d % 4)


def r4_lattice(m: int) -> int:
    """Integer points (a,b,c,d) with a^2+b^2+c^2+d^2 = m, by enumeration."""
    r = math.isqrt(m)
    count = 0
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            s2 = a * a + b * b
            if s2 > m:
                continue
            for c in range(-r, r + 1):
                s3 = s2 + c * c
                if s3 > m:
                    continue
                d2 = m - s3
                d = math.isqrt(d2)
                if d * d == d2:
                    count += 1 if d == 0 else 2
    return count


def check_rr_limit(T: int) -> bool:
    if T < 1:
        raise ValueError("T must be >= 1")
    lhs, rhs = rr_sum_series(T), rr_product_series(T)
    return lhs == rhs and rhs.ints() == rr_oracle(T) and lhs.ints() == rr_gap_oracle(T)


def check_jacobi_limit(T: int) -> bool:
    if T < 1:
        raise ValueError("T must be >= 1")
    lhs, rhs = theta4_series(T), lambert_series(T)
    return lhs == rhs and rhs.ints() == [r4_divisor(m) for m in range(T + 1)]


def series_for(identity: str, T: int) -> list:
    if identity == "rr":
        return rr_product_series(T).ints()
    if identity == "jacobi":
        return theta4_series(T).ints()
    raise ValueError(f"no series for identity {identity!r}")


__all__ = [
    "q_pochhammer", "h_ratio", "qpow", "identity7_sides", "identity8_sides", "check_identity7", "check_identity8",
    "QSeries", "rr_sum_series", "rr_product_series", "theta4_series", "lambert_series", "check_rr_limit",
    "check_jacobi_limit", "rr_oracle", "rr_gap_oracle", "r4_divisor", "r4_lattice", "count_partitions", "series_for",
]
