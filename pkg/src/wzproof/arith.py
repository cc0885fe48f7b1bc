"""Exact multivariate polynomials and canonical rational functions over Q.

Monomials are packed into a single Python integer: the total degree sits in
the top field and each generator owns a fixed-width field below it, first
generator most significant.  With that layout

* multiplying monomials is integer addition, and
* comparing packed integers is exactly graded-lexicographic order,

which keeps the inner loops of multiplication and division cheap.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from . import _meter

Number = Union[int, Fraction]

_W = 20
_MASK = (1 << _W) - 1
_MAX_EXP = 1 << (_W - 1)


class ArithError(Exception):
    pass


class RingMismatch(ArithError, TypeError):
    """Operands live in rings with different generator lists."""


class DivisionByZero(ArithError, ZeroDivisionError):
    pass


class PoleError(ArithError, ZeroDivisionError):
    """A denominator vanishes at the requested point."""

    def __init__(self, point: Mapping[str, object], message: str = "denominator vanishes"):
        self.point = dict(point)
        super().__init__(f"{message} at {self.point}")


class NotDivisible(ArithError):
    pass


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _qdiv(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r == 0:
            return q
    return _norm(Fraction(a) / b)


class Ring:
    """Ordered generators: variables first, then parameters.

    Rings are interned, so two rings with the same generator lists are the
    same object and compatibility checks are identity tests.
    """

    __slots__ = ("vars", "params", "gens", "ngens", "_index", "_shift", "_unit", "_guard", "_degshift")
    _cache: dict = {}

    def __new__(cls, vars: Iterable[str] = (), params: Iterable[str] = ()):
        key = (tuple(vars), tuple(params))
        ring = cls._cache.get(key)
        if ring is not None:
            return ring
        gens = key[0] + key[1]
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator names in {gens}")
        ring = object.__new__(cls)
        ring.vars, ring.params = key
        ring.gens = gens
        ring.ngens = len(gens)
        ring._index = {g: i for i, g in enumerate(gens)}
        ring._shift = tuple(_W * (len(gens) - 1 - i) for i in range(len(gens)))
        ring._degshift = _W * len(gens)
        ring._unit = tuple((1 << ring._degshift) | (1 << s) for s in ring._shift)
        ring._guard = sum(1 << (s + _W - 1) for s in ring._shift)
        cls._cache[key] = ring
        return ring

    def __reduce__(self):
        return (Ring, (self.vars, self.params))

    def __repr__(self):
        return f"Ring(vars={self.vars!r}, params={self.params!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise RingMismatch(f"{name!r} is not a generator of {self!r}") from None

    def pack(self, exps: Iterable[int]) -> int:
        exps = tuple(exps)
        if len(exps) != self.ngens:
            raise ValueError(f"exponent vector {exps} has wrong arity for {self!r}")
        m = 0
        deg = 0
        for e, s in zip(exps, self._shift):
            if e < 0 or e >= _MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            m |= e << s
            deg += e
        return m | (deg << self._degshift)

    def unpack(self, m: int) -> tuple[int, ...]:
        return tuple((m >> s) & _MASK for s in self._shift)

    def gen(self, name: str) -> "Poly":
        return Poly(self, {self._unit[self.index(name)]: 1}, _clean=True)

    def const(self, c: Number) -> "Poly":
        c = _norm(c)
        return Poly(self, {0: c} if c else {}, _clean=True)

    @property
    def zero(self) -> "Poly":
        return Poly(self, {}, _clean=True)

    @property
    def one(self) -> "Poly":
        return Poly(self, {0: 1}, _clean=True)

    def extend(self, vars: Iterable[str] = (), params: Iterable[str] = ()) -> "Ring":
        return Ring(self.vars + tuple(vars), self.params + tuple(params))


def _as_number(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not ring elements")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _norm(x)
    return None


class Poly:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[int, Number] | None = None, *, _clean: bool = False):
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {m: _norm(c) for m, c in terms.items() if c}
        self._hash = None

    # construction -----------------------------------------------------------------

    @classmethod
    def from_dict(cls, ring: Ring, data: Mapping[tuple, Number]) -> "Poly":
        terms: dict[int, Number] = {}
        for exps, c in data.items():
            if c:
                m = ring.pack(exps)
                v = terms.get(m, 0) + c
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return cls(ring, terms)

    @classmethod
    def parse(cls, text: str, ring: Ring) -> "Poly":
        from .expr import parse, to_poly

        return to_poly(parse(text), ring)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        c = _as_number(other)
        if c is None:
            return NotImplemented
        return self.ring.const(c)

    # inspection -------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(0, 0)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], Number]]:
        """Exponent vectors and coefficients, leading term first."""
        for m in sorted(self.terms, reverse=True):
            yield self.ring.unpack(m), self.terms[m]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.terms) >> self.ring._degshift

    def degree(self, var: str | None = None) -> int:
        if var is None:
            return self.total_degree()
        if not self.terms:
            return -1
        s = self.ring._shift[self.ring.index(var)]
        return max((m >> s) & _MASK for m in self.terms)

    def used_gens(self) -> set[int]:
        acc = 0
        for m in self.terms:
            acc |= m
        return {i for i, s in enumerate(self.ring._shift) if (acc >> s) & _MASK}

    def free_symbols(self) -> set[str]:
        return {self.ring.gens[i] for i in self.used_gens()}

    def leading_monomial(self) -> int:
        return max(self.terms)

    def lc(self) -> Number:
        return self.terms[max(self.terms)] if self.terms else 0

    def trailing_monomial_exps(self) -> tuple[int, ...]:
        return self.ring.unpack(min(self.terms))

    def vars_degree(self) -> int:
        """Total degree counted in the ring's variables only (parameters ignored)."""
        nv = len(self.ring.vars)
        best = -1
        for m in self.terms:
            e = self.ring.unpack(m)
            best = max(best, sum(e[:nv]))
        return best

    # arithmetic -------------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, 0) + c
            if v:
                res[m] = v
            else:
                del res[m]
        return Poly(self.ring, res, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, 0) - c
            if v:
                res[m] = v
            else:
                del res[m]
        return Poly(self.ring, res, _clean=True)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def scale(self, c: Number) -> "Poly":
        c = _norm(c)
        if not c:
            return self.ring.zero
        if c == 1:
            return self
        _meter.add_mults(len(self.terms))
        return Poly(self.ring, {m: _norm(v * c) for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _as_number(other)
            if c is None:
                return NotImplemented
            return self.scale(c)
        if other.ring is not self.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero
        if len(b) == 1:
            (mb, cb), = b.items()
            if mb == 0:
                return self.scale(cb)
            _meter.add_mults(len(a))
            return Poly(self.ring, {m + mb: _norm(c * cb) for m, c in a.items()}, _clean=True)
        if len(a) == 1:
            return other.__mul__(self)
        _meter.add_mults(len(a) * len(b))
        res: dict[int, Number] = {}
        get = res.get
        bl = list(b.items())
        for ma, ca in a.items():
            for mb, cb in bl:
                k = ma + mb
                res[k] = get(k, 0) + ca * cb
        out = {}
        for m, c in res.items():
            if c:
                out[m] = _norm(c) if type(c) is Fraction else c
        _meter.note_terms(len(out))
        return Poly(self.ring, out, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        c = _as_number(other)
        if c is not None:
            if c == 0:
                raise DivisionByZero("division by zero")
            return self.scale(Fraction(1) / c)
        if isinstance(other, Poly):
            return RatFunc(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        c = _as_number(other)
        if c is None:
            return NotImplemented
        return RatFunc(self.ring.const(c), self)

    def mul_monomial(self, m: int) -> "Poly":
        if m == 0:
            return self
        return Poly(self.ring, {k + m: c for k, c in self.terms.items()}, _clean=True)

    def exquo(self, d: "Poly") -> "Poly":
        """Exact quotient; raises :class:`NotDivisible` if ``d`` does not divide."""
        d = self._coerce(d)
        if not d.terms:
            raise DivisionByZero("division by the zero polynomial")
        if d.is_constant():
            return self.scale(Fraction(1) / d.terms[0])
        if not self.terms:
            return self
        guard = self.ring._guard
        r = dict(self.terms)
        dlm = max(d.terms)
        dlc = d.terms[dlm]
        rest = [(m, c) for m, c in d.terms.items() if m != dlm]
        q: dict[int, Number] = {}
        ops = 0
        while r:
            m = max(r)
            diff = (m | guard) - dlm
            if diff & guard != guard or diff < guard:
                raise NotDivisible(f"{d} does not divide {self}")
            t = diff - guard
            c = _qdiv(r.pop(m), dlc)
            q[t] = c
            ops += len(rest)
            for md, cd in rest:
                k = t + md
                v = r.get(k, 0) - c * cd
                if v:
                    r[k] = v
                else:
                    r.pop(k, None)
        _meter.add_mults(ops)
        return Poly(self.ring, {m: _norm(c) for m, c in q.items()}, _clean=True)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exquo(self)
        except NotDivisible:
            return False
        return True

    # comparison -------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring is other.ring and self.terms == other.terms
        c = _as_number(other) if isinstance(other, (int, Fraction)) else None
        if c is None:
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.gens, frozenset(self.terms.items())))
        return self._hash

    # substitution -----------------------------------------------------------------

    def evaluate(self, point: Mapping[str, object]):
        """Value at a point binding every generator this polynomial uses."""
        ring = self.ring
        used = self.used_gens()
        vals = {}
        for i in used:
            g = ring.gens[i]
            if g not in point:
                raise KeyError(f"no value for {g!r}")
            vals[i] = point[g]
        if not used:
            return self.terms.get(0, 0)
        powers: dict[int, list] = {}
        for i in used:
            powers[i] = [1, vals[i]]
        total = 0
        ops = 0
        shifts = ring._shift
        for m, c in self.terms.items():
            term = c
            for i in used:
                e = (m >> shifts[i]) & _MASK
                if e:
                    pw = powers[i]
                    while len(pw) <= e:
                        pw.append(pw[-1] * vals[i])
                        ops += 1
                    term = term * pw[e]
                    ops += 1
            total = total + term
        _meter.add_mults(ops)
        return _norm(total) if isinstance(total, Fraction) else total

    def subs(self, assign: Mapping[str, Number]) -> "Poly":
        """Substitute numbers for some generators, staying in the same ring."""
        ring = self.ring
        idx = [(ring.index(g), v) for g, v in assign.items() if g in ring._index]
        if not idx:
            return self
        res: dict[int, Number] = {}
        cache: dict[tuple[int, int], Number] = {}
        for m, c in self.terms.items():
            k = m
            for i, v in idx:
                e = (m >> ring._shift[i]) & _MASK
                if e:
                    key = (i, e)
                    p = cache.get(key)
                    if p is None:
                        p = cache[key] = v ** e
                    c = c * p
                    k -= e * ring._unit[i]
            if c:
                res[k] = res.get(k, 0) + c
        _meter.add_mults(len(self.terms))
        return Poly(ring, res)

    def to_ring(self, ring: Ring) -> "Poly":
        """Re-express in another ring; every used generator must exist there."""
        if ring is self.ring:
            return self
        src = self.ring
        mapping = []
        for i in self.used_gens():
            g = src.gens[i]
            if g not in ring._index:
                raise RingMismatch(f"generator {g!r} not in {ring!r}")
            mapping.append((src._shift[i], ring._unit[ring._index[g]]))
        terms = {}
        for m, c in self.terms.items():
            k = 0
            for s, unit in mapping:
                e = (m >> s) & _MASK
                if e:
                    k += e * unit
            terms[k] = c
        return Poly(ring, terms, _clean=True)

    def specialize(self, assign: Mapping[str, Number]) -> "Poly":
        """Substitute numbers and drop the substituted generators from the ring."""
        p = self.subs(assign)
        keep_v = tuple(g for g in self.ring.vars if g not in assign)
        keep_p = tuple(g for g in self.ring.params if g not in assign)
        return p.to_ring(Ring(keep_v, keep_p))

    def coeffs_in(self, var: str) -> dict[int, "Poly"]:
        """Coefficients w.r.t. one generator, keyed by its exponent."""
        ring = self.ring
        i = ring.index(var)
        s, unit = ring._shift[i], ring._unit[i]
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = (m >> s) & _MASK
            out.setdefault(e, {})[m - e * unit] = c
        return {e: Poly(ring, t, _clean=True) for e, t in out.items()}

    def coeff_in(self, var: str, e: int) -> "Poly":
        ring = self.ring
        i = ring.index(var)
        s, unit = ring._shift[i], ring._unit[i]
        t = {m - e * unit: c for m, c in self.terms.items() if (m >> s) & _MASK == e}
        return Poly(ring, t, _clean=True)

    @classmethod
    def from_coeffs(cls, var_poly: "Poly", coeffs: Mapping[int, "Poly"]) -> "Poly":
        ring = var_poly.ring
        total = ring.zero
        for e, c in coeffs.items():
            total = total + c * var_poly ** e
        return total

    def shift(self, var: str, s: int) -> "Poly":
        """Substitute ``var -> var + s``."""
        if s == 0 or not self.terms:
            return self
        ring = self.ring
        i = ring.index(var)
        sh, unit = ring._shift[i], ring._unit[i]
        res: dict[int, Number] = {}
        ops = 0
        for m, c in self.terms.items():
            e = (m >> sh) & _MASK
            if e == 0:
                res[m] = res.get(m, 0) + c
                continue
            base = m - e * unit
            sp = 1
            for j in range(e, -1, -1):
                k = base + j * unit
                res[k] = res.get(k, 0) + c * math.comb(e, j) * sp
                sp *= s
                ops += 1
        _meter.add_mults(ops)
        return Poly(ring, res)

    def substitute(self, var: str, value: "Poly") -> "Poly":
        """Substitute a polynomial (same ring) for one generator."""
        coeffs = self.coeffs_in(var)
        if not coeffs:
            return self
        top = max(coeffs)
        result = self.ring.zero
        for e in range(top, -1, -1):
            result = result * value
            c = coeffs.get(e)
            if c is not None:
                result = result + c
        return result

    # normal forms -----------------------------------------------------------------

    def content(self) -> Fraction:
        """Rational c with self/c integer-coefficient and primitive (sign of lc)."""
        if not self.terms:
            return Fraction(0)
        g = 0
        lden = 1
        for c in self.terms.values():
            if type(c) is int:
                g = math.gcd(g, c)
            else:
                g = math.gcd(g, c.numerator)
                lden = lden * c.denominator // math.gcd(lden, c.denominator)
        cont = Fraction(g, lden)
        if self.lc() < 0:
            cont = -cont
        return cont

    def primitive(self) -> "Poly":
        """Integer-coefficient primitive associate with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if c == 1:
            return self
        inv = 1 / c
        return Poly(self.ring, {m: _norm(v * inv) for m, v in self.terms.items()}, _clean=True)

    def min_monomial(self) -> int:
        ring = self.ring
        mins = [None] * ring.ngens
        for m in self.terms:
            for i, s in enumerate(ring._shift):
                e = (m >> s) & _MASK
                if mins[i] is None or e < mins[i]:
                    mins[i] = e
        return ring.pack(x or 0 for x in mins)

    def div_monomial(self, m: int) -> "Poly":
        if m == 0:
            return self
        return Poly(self.ring, {k - m: c for k, c in self.terms.items()}, _clean=True)

    # printing ---------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        gens = self.ring.gens
        parts = []
        for exps, c in self.items():
            mono = "*".join(g if e == 1 else f"{g}^{e}" for g, e in zip(gens, exps) if e)
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self}, ring={self.ring.gens})"


# ---------------------------------------------------------------------------------
# gcd: recursive content / primitive-part reduction


def _content_wrt(p: Poly, var_index: int) -> Poly:
    var = p.ring.gens[var_index]
    coeffs = list(p.coeffs_in(var).values())
    coeffs.sort(key=len)
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = _gcd(g, c)
    if g.is_constant():
        return p.ring.one
    return g.primitive()


def _deg_in(p: Poly, i: int) -> int:
    s = p.ring._shift[i]
    return max((m >> s) & _MASK for m in p.terms)


def _sprem(a: Poly, b: Poly, i: int) -> Poly:
    ring = a.ring
    var = ring.gens[i]
    db = _deg_in(b, i)
    lcb = b.coeff_in(var, db)
    r = a
    unit = ring._unit[i]
    while r.terms:
        dr = _deg_in(r, i)
        if dr < db:
            break
        lcr = r.coeff_in(var, dr)
        r = r * lcb - (lcr * b).mul_monomial((dr - db) * unit)
    return r


def _prs_gcd(a: Poly, b: Poly, i: int) -> Poly:
    if _deg_in(a, i) < _deg_in(b, i):
        a, b = b, a
    while True:
        r = _sprem(a, b, i)
        if not r.terms:
            return b.primitive()
        if _deg_in(r, i) == 0:
            return a.ring.one
        r = r.primitive()
        c = _content_wrt(r, i)
        if not c.is_constant():
            r = r.exquo(c)
        a, b = b, r


def _int_content(terms: dict) -> int:
    g = 0
    for c in terms.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _heugcd(ring: Ring, p: dict, q: dict, gens: list) -> dict | None:
    """Heuristic gcd of integer polynomials (packed terms): evaluate the last generator
    at a large integer, recurse, read the answer back in balanced base xi and confirm
    by exact division.  None means give up (the caller falls back to PRS)."""
    cp, cq = _int_content(p), _int_content(q)
    cont = math.gcd(cp, cq)
    if not gens:
        return {0: cont}
    pp = {m: c // cp for m, c in p.items()}
    qq = {m: c // cq for m, c in q.items()}
    i = gens[-1]
    shift, unit = ring._shift[i], ring._unit[i]
    if not any((m >> shift) & _MASK for m in pp) and not any((m >> shift) & _MASK for m in qq):
        g = _heugcd(ring, pp, qq, gens[:-1])
        return None if g is None else {m: c * cont for m, c in g.items()}
    bound = min(max(abs(c) for c in pp.values()), max(abs(c) for c in qq.values()))
    xi = 2 * bound + 29
    P, Q = Poly(ring, pp, _clean=True), Poly(ring, qq, _clean=True)
    dmax = min(max((m >> shift) & _MASK for m in pp), max((m >> shift) & _MASK for m in qq))
    for _ in range(6):
        pe, qe = _eval_gen(pp, shift, unit, xi), _eval_gen(qq, shift, unit, xi)
        ge = _heugcd(ring, pe, qe, gens[:-1]) if pe and qe else None
        if ge is not None:
            g: dict = {}
            e = 0
            half = xi // 2
            while ge and e <= dmax:
                nxt = {}
                for m, c in ge.items():
                    h = c % xi
                    if h > half:
                        h -= xi
                    if h:
                        g[m + e * unit] = h
                    r = (c - h) // xi
                    if r:
                        nxt[m] = r
                ge = nxt
                e += 1
            if ge or not g:
                xi = xi * 73794 // 27011
                continue
            gc = _int_content(g)
            G = Poly(ring, {m: c // gc for m, c in g.items()}, _clean=True)
            if G.divides(P) and G.divides(Q):
                return {m: c * cont for m, c in G.terms.items()}
        xi = xi * 73794 // 27011
    return None


def _eval_gen(terms: dict, shift: int, unit: int, xi: int) -> dict:
    out: dict = {}
    for m, c in terms.items():
        e = (m >> shift) & _MASK
        k = m - e * unit
        v = out.get(k, 0) + c * xi ** e
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _gcd(p: Poly, q: Poly) -> Poly:
    ring = p.ring
    if not p.terms:
        return q.primitive()
    if not q.terms:
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return ring.one
    mp, mq = p.min_monomial(), q.min_monomial()
    eg = tuple(min(x, y) for x, y in zip(ring.unpack(mp), ring.unpack(mq)))
    mg = ring.pack(eg)
    p = p.div_monomial(mp).primitive()
    q = q.div_monomial(mq).primitive()
    return _gcd_core(p, q).mul_monomial(mg)


def _gcd_core(p: Poly, q: Poly) -> Poly:
    ring = p.ring
    if p.is_constant() or q.is_constant():
        return ring.one
    if p == q:
        return p
    if len(q) <= len(p) and q.divides(p):
        return q
    if len(p) < len(q) and p.divides(q):
        return p
    if all(type(c) is int for c in p.terms.values()) and all(type(c) is int for c in q.terms.values()):
        gens = sorted(p.used_gens() | q.used_gens())
        h = _heugcd(ring, p.terms, q.terms, gens)
        if h is not None:
            return Poly(ring, h, _clean=True).primitive()
    up, uq = p.used_gens(), q.used_gens()
    only_p = up - uq
    if only_p:
        return _gcd(_content_wrt(p, min(only_p)), q)
    only_q = uq - up
    if only_q:
        return _gcd(p, _content_wrt(q, min(only_q)))
    i = min(up, key=lambda j: (max(_deg_in(p, j), _deg_in(q, j)), j))
    cp, cq = _content_wrt(p, i), _content_wrt(q, i)
    if not cp.is_constant():
        p = p.exquo(cp)
    if not cq.is_constant():
        q = q.exquo(cq)
    c = _gcd(cp, cq) if not (cp.is_constant() or cq.is_constant()) else ring.one
    g = _prs_gcd(p, q, i)
    return (c * g).primitive()


def gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, integer-primitive with positive leading coefficient.

    ``gcd(0, 0) == 0``; a nonzero constant gcd is returned as 1.
    """
    q = p._coerce(q)
    if not p.terms and not q.terms:
        return p.ring.zero
    return _gcd(p, q)


def lcm(p: Poly, q: Poly) -> Poly:
    if not p.terms or not q.terms:
        return p.ring.zero
    return (p * q).exquo(gcd(p, q)).primitive()


# ---------------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Canonical quotient ``num/den`` of polynomials in one ring.

    Canonical means: coprime, both with integer coefficients, no common
    integer content, and the denominator's graded-lex leading coefficient
    positive.  Zero is ``0/1``.  Equal values have identical representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | Number | None = None, *, coprime: bool = False):
        ring = num.ring
        if den is None:
            den = ring.one
        elif not isinstance(den, Poly):
            den = ring.const(den)
        elif den.ring is not ring:
            raise RingMismatch(f"{ring!r} vs {den.ring!r}")
        if not den.terms:
            raise DivisionByZero("rational function with zero denominator")
        self._hash = None
        if not num.terms:
            self.num, self.den = num, ring.one
            return
        if not coprime and not den.is_constant() and not num.is_constant():
            g = gcd(num, den)
            if not g.is_constant():
                num = num.exquo(g)
                den = den.exquo(g)
        # joint integer normalisation
        cn, cd = num.content(), den.content()
        # num/den = (cn/cd) * (pn/pd) with pn, pd primitive integer, lc(pd) > 0
        pn = num.primitive() if cn != 1 else num
        pd = den.primitive() if cd != 1 else den
        ratio = cn / cd
        self.num = pn.scale(ratio.numerator) if ratio.numerator != 1 else pn
        self.den = pd.scale(ratio.denominator) if ratio.denominator != 1 else pd

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def parse(cls, text: str, ring: Ring) -> "RatFunc":
        from .expr import parse, to_ratfunc

        return to_ratfunc(parse(text), ring)

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ring is not self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, Poly):
            if other.ring is not self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return RatFunc(other)
        c = _as_number(other)
        if c is None:
            return NotImplemented
        return RatFunc(self.ring.const(c))

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return RatFunc(o.num, o.den)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatFunc(self.ring.zero)
        # cross-cancel before multiplying keeps the gcds small
        g1 = gcd(self.num, o.den)
        g2 = gcd(o.num, self.den)
        n1 = self.num.exquo(g1) if not g1.is_constant() else self.num
        d2 = o.den.exquo(g1) if not g1.is_constant() else o.den
        n2 = o.num.exquo(g2) if not g2.is_constant() else o.num
        d1 = self.den.exquo(g2) if not g2.is_constant() else self.den
        return RatFunc(n1 * n2, d1 * d2, coprime=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num, coprime=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, coprime=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.ring is other.ring and self.num == other.num and self.den == other.den
        if isinstance(other, Poly):
            return self.den.is_constant() and self.den.constant_value() == 1 and self.num == other
        c = _as_number(other) if isinstance(other, (int, Fraction)) else None
        if c is None:
            return NotImplemented
        return self.den == 1 and self.num == c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, point: Mapping[str, object]):
        d = self.den.evaluate(point)
        if d == 0:
            raise PoleError(point)
        n = self.num.evaluate(point)
        if isinstance(n, RatFunc) or isinstance(d, RatFunc) or isinstance(n, Poly) or isinstance(d, Poly):
            return n / d
        return _norm(Fraction(n) / d) if n else 0

    def shift(self, var: str, s: int) -> "RatFunc":
        return RatFunc._raw(self.num.shift(var, s), self.den.shift(var, s)) if s else self

    def subs(self, assign: Mapping[str, Number]) -> "RatFunc":
        return RatFunc(self.num.subs(assign), self.den.subs(assign))

    def specialize(self, assign: Mapping[str, Number]) -> "RatFunc":
        d = self.den.specialize(assign)
        if not d.terms:
            raise PoleError(assign)
        return RatFunc(self.num.specialize(assign), d)

    def to_ring(self, ring: Ring) -> "RatFunc":
        if ring is self.ring:
            return self
        return RatFunc(self.num.to_ring(ring), self.den.to_ring(ring), coprime=True)

    def free_symbols(self) -> set[str]:
        return self.num.free_symbols() | self.den.free_symbols()

    def __str__(self):
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def as_scalar(value):
    """Collapse a constant ``Poly``/``RatFunc`` to a plain number when possible."""
    if isinstance(value, RatFunc):
        if value.num.is_constant() and value.den.is_constant():
            return _norm(Fraction(value.num.constant_value()) / value.den.constant_value())
        return value
    if isinstance(value, Poly):
        if value.is_constant():
            return value.constant_value()
        return RatFunc(value)
    return _norm(value) if isinstance(value, Fraction) else value


def format_scalar(value) -> str:
    """``p/q`` text for numbers; canonical ``(num)/(den)`` for rational functions."""
    value = as_scalar(value)
    if isinstance(value, RatFunc):
        return str(value)
    v = Fraction(value)
    return f"{v.numerator}/{v.denominator}"
