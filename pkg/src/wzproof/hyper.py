"""Hypergeometric terms built from factorials, binomials, powers and polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .arith import Poly, RatFunc, Ring, as_scalar
from .expr import (
    Add, Affine, Binomial, Div, Expr, Factorial, Inf, Int, Mul, Pow, Sub, Sum, Sym,
    contains_sum, linear_form, symbols, to_ratfunc, to_text,
)


class HyperTermError(ValueError):
    pass


class NotHypergeometric(HyperTermError):
    def __init__(self, factor: str, reason: str):
        self.factor = factor
        super().__init__(f"not hypergeometric: {factor} ({reason})")


class EvaluationError(ArithmeticError):
    def __init__(self, point: Mapping[str, object], witness: str):
        self.point = dict(point)
        self.witness = witness
        super().__init__(f"{witness} is undefined at {self.point}")


class UnboundedSupport(HyperTermError):
    pass


@dataclass
class _Factors:
    const: object = 1  # number, or RatFunc in the parameters
    polys: dict = field(default_factory=dict)  # Poly (primitive) -> exponent
    facts: list = field(default_factory=list)  # (Affine, exponent)
    binoms: list = field(default_factory=list)  # (Affine top, Affine bottom, exponent)
    powers: list = field(default_factory=list)  # (base RatFunc, Affine exponent)

    def mul(self, other: "_Factors") -> "_Factors":
        polys = dict(self.polys)
        for p, e in other.polys.items():
            polys[p] = polys.get(p, 0) + e
            if not polys[p]:
                del polys[p]
        return _Factors(
            self.const * other.const, polys, self.facts + other.facts,
            self.binoms + other.binoms, self.powers + other.powers,
        )

    def pow(self, m: int) -> "_Factors":
        if m == 0:
            return _Factors()
        if m > 0:
            const = self.const ** m
        elif self.const == 0:
            raise ZeroDivisionError("zero raised to a negative power")
        else:
            inv = self.const.inverse() if isinstance(self.const, RatFunc) else Fraction(1) / self.const
            const = inv ** (-m)
        return _Factors(
            const,
            {p: e * m for p, e in self.polys.items()},
            [(a, e * m) for a, e in self.facts],
            [(a, b, e * m) for a, b, e in self.binoms],
            [(base, ex.scale(m)) for base, ex in self.powers],
        )


def _uses(e: Expr, names: set[str]) -> bool:
    return bool(symbols(e) & names)


class HyperTerm:
    """A hypergeometric term ``F(n; k1..kr)`` with exact quotients and evaluator."""

    def __init__(self, expr: Expr, outer: str, sum_vars: Sequence[str], params: Sequence[str] | None = None):
        self.expr = expr
        self.outer_var = outer
        self.sum_vars = tuple(sum_vars)
        vars_ = (outer,) + self.sum_vars
        if len(set(vars_)) != len(vars_):
            raise HyperTermError(f"repeated variable names in {vars_}")
        if params is None:
            params = sorted(symbols(expr) - set(vars_))
        self.params = tuple(params)
        self.ring = Ring(vars_, self.params)
        self.param_ring = Ring((), self.params)
        self._vars = set(vars_)
        self.factors = self._decompose(expr)
        for a, _ in self.factors.facts:
            self._check_affine(a, expr)
        for a, b, _ in self.factors.binoms:
            self._check_affine(a, expr)
            self._check_affine(b, expr)
        self._shift_cache: dict[tuple[int, ...], RatFunc] = {}

    # construction --------------------------------------------------------------

    @property
    def vars(self) -> tuple[str, ...]:
        return self.ring.vars

    def _check_affine(self, a: Affine, expr: Expr):
        extra = a.names() - self._vars
        if extra:
            raise HyperTermError(f"factorial/binomial argument uses parameter(s) {sorted(extra)}")

    def _poly_factors(self, rf: RatFunc) -> _Factors:
        out = _Factors()
        for p, sign in ((rf.num, 1), (rf.den, -1)):
            if p.free_symbols() & self._vars:
                c = p.content()
                pp = p.primitive()
                out.const = out.const * (c if sign > 0 else 1 / c)
                out.polys[pp] = out.polys.get(pp, 0) + sign
            else:
                v = as_scalar(p.to_ring(self.param_ring) if p.free_symbols() else p.constant_value())
                if isinstance(v, (int, Fraction)):
                    if v == 0:
                        out.const = 0
                        continue
                    out.const = out.const * (v if sign > 0 else Fraction(1) / v)
                else:
                    out.const = out.const * (v if sign > 0 else v.inverse())
        out.const = as_scalar(out.const)
        return out

    def _decompose(self, e: Expr) -> _Factors:
        vars_ = self._vars
        if isinstance(e, Sum):
            raise HyperTermError("nested sum inside a summand")
        if isinstance(e, Inf):
            raise HyperTermError("infinity inside a summand")
        if isinstance(e, Mul):
            return self._decompose(e.left).mul(self._decompose(e.right))
        if isinstance(e, Div):
            return self._decompose(e.left).mul(self._decompose(e.right).pow(-1))
        if isinstance(e, Factorial):
            return _Factors(facts=[(linear_form(e.arg), 1)])
        if isinstance(e, Binomial):
            return _Factors(binoms=[(linear_form(e.top), linear_form(e.bottom), 1)])
        if isinstance(e, Pow):
            if not _uses(e.exp, vars_):
                ex = e.exp
                if not isinstance(ex, Int):
                    lf = linear_form(ex)
                    if lf is None or lf.coeffs:
                        raise NotHypergeometric(to_text(e), "exponent is not an integer constant")
                    ex = Int(lf.const)
                return self._decompose(e.base).pow(ex.value)
            if _uses(e.base, vars_):
                raise NotHypergeometric(to_text(e), "both base and exponent depend on the variables")
            exp = linear_form(e.exp)
            if exp is None:
                raise NotHypergeometric(to_text(e), "exponent is not integer-linear, so the shift quotient is not rational")
            if exp.names() - vars_:
                raise NotHypergeometric(to_text(e), "exponent mixes parameters with variables")
            try:
                base = to_ratfunc(e.base, self.param_ring)
            except Exception:
                raise NotHypergeometric(to_text(e), "base is not a rational constant") from None
            if base.is_zero():
                raise HyperTermError(f"zero base in {to_text(e)}")
            out = _Factors(powers=[(base, Affine(exp.coeffs, 0))])
            if exp.const:
                out = out.mul(self._poly_factors(RatFunc(base.num.to_ring(self.ring), base.den.to_ring(self.ring)) ** exp.const))
            return out
        if isinstance(e, (Int, Sym, Add, Sub)):
            if isinstance(e, (Add, Sub)) and contains_sum(e):
                raise HyperTermError("nested sum inside a summand")
            try:
                rf = to_ratfunc(e, self.ring)
            except Exception:
                raise NotHypergeometric(to_text(e), "sum of non-polynomial terms") from None
            return self._poly_factors(rf)
        raise NotHypergeometric(to_text(e), "unsupported building block")

    # quotients -----------------------------------------------------------------

    def shift_quotient(self, shifts: Mapping[str, int]) -> RatFunc:
        """``F(v + shifts) / F(v)`` as a canonical rational function."""
        key = tuple(shifts.get(v, 0) for v in self.vars)
        cached = self._shift_cache.get(key)
        if cached is not None:
            return cached
        ring = self.ring
        num = ring.one
        den = ring.one
        f = self.factors

        def fact_ratio(a: Affine, e: int):
            nonlocal num, den
            d = sum(a.coeff(v) * s for v, s in zip(self.vars, key))
            if d == 0 or e == 0:
                return
            ap = a.to_poly(ring)
            prod = ring.one
            if d > 0:
                for j in range(1, d + 1):
                    prod = prod * (ap + j)
                hi = True
            else:
                for j in range(0, -d):
                    prod = prod * (ap - j)
                hi = False
            if (e > 0) == hi:
                num = num * prod ** abs(e)
            else:
                den = den * prod ** abs(e)

        for a, e in f.facts:
            fact_ratio(a, e)
        for a, b, e in f.binoms:
            fact_ratio(a, e)
            fact_ratio(b, -e)
            fact_ratio(a - b, -e)
        for p, e in f.polys.items():
            sp = p
            for v, s in zip(self.vars, key):
                sp = sp.shift(v, s)
            if sp == p:
                continue
            if e > 0:
                num, den = num * sp ** e, den * p ** e
            else:
                num, den = num * p ** (-e), den * sp ** (-e)
        result = RatFunc(num, den)
        for base, ex in f.powers:
            d = sum(ex.coeff(v) * s for v, s in zip(self.vars, key))
            if d:
                b = RatFunc(base.num.to_ring(ring), base.den.to_ring(ring), coprime=True)
                result = result * b ** d
        self._shift_cache[key] = result
        return result

    def quotient(self, var: str) -> RatFunc:
        return self.shift_quotient({var: 1})

    @property
    def quotients(self) -> dict[str, RatFunc]:
        return {v: self.quotient(v) for v in self.vars}

    # evaluation ----------------------------------------------------------------

    def _param_values(self, point: Mapping[str, object]) -> dict[str, object]:
        vals = {}
        for p in self.params:
            if p in point:
                vals[p] = point[p]
            else:
                vals[p] = RatFunc(self.param_ring.gen(p))
        return vals

    def evaluate(self, point: Mapping[str, object]):
        """Exact value; parameters missing from ``point`` stay symbolic."""
        ivals = {}
        for v in self.vars:
            if v not in point:
                raise KeyError(f"no value for {v!r}")
            ivals[v] = int(point[v])
        full = dict(ivals)
        full.update(self._param_values(point))
        f = self.factors
        value = f.const.evaluate(full) if isinstance(f.const, RatFunc) else f.const
        zero = value == 0
        pole = None
        for a, b, e in f.binoms:
            top, bot = a.evaluate(ivals), b.evaluate(ivals)
            c = math.comb(top, bot) if 0 <= bot <= top else 0
            if c == 0:
                if e > 0:
                    zero = True
                else:
                    pole = pole or f"1/binomial({top}, {bot})"
                continue
            value = value * (c ** e if e > 0 else Fraction(1, c ** (-e)))
        for a, e in f.facts:
            m = a.evaluate(ivals)
            if m < 0:
                if e < 0:
                    zero = True
                else:
                    pole = pole or f"factorial({m})"
                continue
            c = math.factorial(m)
            value = value * (c ** e if e > 0 else Fraction(1, c ** (-e)))
        for p, e in f.polys.items():
            c = p.evaluate(full)
            if c == 0:
                if e > 0:
                    zero = True
                else:
                    pole = pole or f"1/({p})"
                continue
            value = value * (c ** e if e > 0 else (1 / Fraction(c) if isinstance(c, (int, Fraction)) else c.inverse()) ** (-e))
        for base, ex in f.powers:
            d = ex.evaluate(ivals)
            bv = base.evaluate(full)
            value = value * (bv ** d if isinstance(bv, RatFunc) else Fraction(bv) ** d)
        if zero:
            return 0
        if pole is not None:
            raise EvaluationError(ivals, pole)
        return as_scalar(value)

    __call__ = evaluate

    # support -------------------------------------------------------------------

    def support_constraints(self) -> list[Affine]:
        """Affine forms that must all be >= 0 wherever the term is nonzero."""
        out = []
        for a, b, e in self.factors.binoms:
            if e > 0:
                out.append(b)
                out.append(a - b)
        for a, e in self.factors.facts:
            if e < 0:
                out.append(a)
        return out

    def support_box(self, fixed: Mapping[str, int]) -> dict[str, tuple[int, int]]:
        """Finite box for the sum variables outside which the term vanishes.

        ``fixed`` binds the outer variable (and any sum variables to be held
        fixed).  Bounds are found by interval propagation over the support
        constraints; raises :class:`UnboundedSupport` if some variable stays
        unbounded.
        """
        free = [v for v in self.sum_vars if v not in fixed]
        cons = [c.partial(fixed) for c in self.support_constraints()]
        lo: dict[str, float] = {v: -math.inf for v in free}
        hi: dict[str, float] = {v: math.inf for v in free}
        for _ in range(4 * len(free) + 4):
            changed = False
            for c in cons:
                for v in free:
                    a = c.coeff(v)
                    if a == 0:
                        continue
                    # a*v + rest >= 0, bound rest from above
                    rest_max = c.const
                    for u, cu in c.coeffs:
                        if u == v:
                            continue
                        b = hi[u] if cu > 0 else lo[u]
                        rest_max += cu * b if b not in (math.inf, -math.inf) else (math.inf if (cu > 0) == (b > 0) else -math.inf)
                    if rest_max == math.inf:
                        continue
                    if rest_max == -math.inf:
                        lo[v], hi[v] = 1, 0
                        continue
                    if a > 0:
                        nb = math.ceil(Fraction(-rest_max, a))
                        if nb > lo[v]:
                            lo[v], changed = nb, True
                    else:
                        nb = math.floor(Fraction(rest_max, -a))
                        if nb < hi[v]:
                            hi[v], changed = nb, True
            if not changed:
                break
        box = {}
        for v in free:
            if lo[v] == -math.inf or hi[v] == math.inf:
                raise UnboundedSupport(f"support in {v} is unbounded at {dict(fixed)}")
            box[v] = (int(lo[v]), int(hi[v]))
        return box

    # properness ----------------------------------------------------------------

    def check_proper(self) -> tuple[bool, list[str]]:
        bad = []
        for p, e in self.factors.polys.items():
            if e > 0:
                continue
            if not _integer_linear_in(p, self.vars):
                bad.append(str(p))
        return (not bad, bad)

    def __repr__(self):
        return f"HyperTerm({to_text(self.expr)!r}, outer={self.outer_var!r}, sum_vars={self.sum_vars!r})"


def _integer_linear_in(p: Poly, vars_: Sequence[str]) -> bool:
    if p.total_degree() > 1:
        return False
    for exps, c in p.items():
        if sum(exps[len(vars_):]):
            return False
    return True


def to_hyper_term(e: Expr, outer: str, inner: Sequence[str] | str, params: Sequence[str] | None = None) -> HyperTerm:
    if isinstance(inner, str):
        inner = (inner,)
    return HyperTerm(e, outer, inner, params)


def check_proper(t: HyperTerm) -> tuple[bool, list[str]]:
    return t.check_proper()


def eval_term(t: HyperTerm, point: Mapping[str, object]):
    return t.evaluate(point)
