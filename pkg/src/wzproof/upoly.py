"""Dense univariate helpers over Q (coefficient lists, lowest degree first)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .arith import Poly


def trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def to_dense(p: Poly, var: str) -> list:
    """Coefficients of a polynomial that uses no generator other than ``var``."""
    extra = p.free_symbols() - {var}
    if extra:
        raise ValueError(f"{p} is not univariate in {var}")
    deg = p.degree(var) if p.terms else -1
    out = [0] * (deg + 1)
    i = p.ring.index(var)
    for exps, c in p.items():
        out[exps[i]] = c
    return out


def integerize(c: Sequence) -> list[int]:
    den = 1
    for x in c:
        if isinstance(x, Fraction):
            den = den * x.denominator // math.gcd(den, x.denominator)
    out = [int(x * den) for x in c]
    g = 0
    for x in out:
        g = math.gcd(g, x)
    return [x // g for x in out] if g > 1 else out


def _divmod(f: list, g: list) -> tuple[list, list]:
    f = [Fraction(x) for x in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lg = g[-1]
    while len(f) >= len(g) and f:
        s = len(f) - len(g)
        t = f[-1] / lg
        q[s] = t
        for i, gc in enumerate(g):
            f[s + i] -= t * gc
        trim(f)
    return q, f


def gcd(f: Sequence, g: Sequence) -> list:
    """Primitive integer gcd with positive leading coefficient."""
    a, b = trim(list(f)), trim(list(g))
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    if not a:
        return []
    a = integerize(a)
    if a[-1] < 0:
        a = [-x for x in a]
    return a


def horner(c: Sequence, x):
    v = 0
    for a in reversed(c):
        v = v * x + a
    return v


def _root_bound(c: list[int]) -> int:
    # Fujiwara: |z| <= 2 max |a_{d-i}/a_d|^(1/i)
    d = len(c) - 1
    lead = abs(c[-1])
    best = 0.0
    for i in range(1, d + 1):
        a = abs(c[d - i])
        if a:
            best = max(best, math.exp((math.log(a) - math.log(lead)) / i))
    return int(2 * best) + 2


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def integer_roots(coeffs: Sequence) -> list[int]:
    """Distinct integer roots, ascending."""
    c = trim(list(coeffs))
    if not c:
        raise ValueError("the zero polynomial has every integer as a root")
    c = integerize(c)
    roots = set()
    if c[0] == 0:
        roots.add(0)
        while c and c[0] == 0:
            c.pop(0)
    if len(c) <= 1:
        return sorted(roots)
    a0 = c[0]
    bound = _root_bound(c)
    if bound <= 1_000_000:
        cands = range(1, bound + 1)
    else:
        cands = _divisors(a0)
    for r in cands:
        if a0 % r:
            continue
        for s in (r, -r):
            if horner(c, s) == 0:
                roots.add(s)
    return sorted(roots)


def rational_roots(coeffs: Sequence) -> list[Fraction]:
    """Distinct rational roots, ascending."""
    c = integerize(trim(list(coeffs)))
    if not c:
        raise ValueError("the zero polynomial")
    roots = set()
    if c[0] == 0:
        roots.add(Fraction(0))
        while c[0] == 0:
            c.pop(0)
    d = len(c) - 1
    if d <= 0:
        return sorted(roots)
    for q in _divisors(c[-1]):
        # integer roots of q^d * p(y/q)
        scaled = [a * q ** (d - i) for i, a in enumerate(c)]
        for y in integer_roots(scaled):
            x = Fraction(y, q)
            if horner(c, x) == 0:
                roots.add(x)
    return sorted(roots)


def root_multiplicity(coeffs: Sequence, x) -> int:
    c = [Fraction(v) for v in trim(list(coeffs))]
    m = 0
    while c and horner(c, x) == 0:
        q, r = _divmod(c, [-Fraction(x), Fraction(1)])
        c = trim(q)
        m += 1
    return m


def univariate_content_roots(p: Poly, var: str) -> list[int]:
    """Integers r such that ``p`` vanishes identically (in the other generators) at ``var = r``."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    i = p.ring.index(var)
    groups: dict[tuple, dict[int, object]] = {}
    for exps, c in p.items():
        key = exps[:i] + exps[i + 1:]
        groups.setdefault(key, {})[exps[i]] = c
    g: list = []
    for d in groups.values():
        dense = [0] * (max(d) + 1)
        for e, c in d.items():
            dense[e] = c
        g = gcd(g, dense) if g else integerize(dense)
        if len(g) <= 1:
            return []
    return integer_roots(g)
