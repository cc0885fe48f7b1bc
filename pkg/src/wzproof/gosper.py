"""Gosper's algorithm, including the parametrized form used by creative telescoping."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _meter
from .arith import Poly, RatFunc, Ring, gcd
from .linsolve import determinant, nullspace_vector
from .upoly import integer_roots, gcd as ugcd, integerize


@dataclass(frozen=True)
class GosperForm:
    """``ratio = a(k)/b(k) * c(k+1)/c(k)`` with gcd(a(k), b(k+j)) = 1 for j >= 0."""

    a: Poly
    b: Poly
    c: Poly
    var: str

    def ratio(self) -> RatFunc:
        return RatFunc(self.a, self.b) * RatFunc(self.c.shift(self.var, 1), self.c)


def _kdeg(p: Poly, var: str) -> int:
    return p.degree(var)


def _kcontent_free(p: Poly, var: str) -> Poly:
    """Drop factors that do not involve ``var``."""
    coeffs = list(p.coeffs_in(var).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    if g.is_constant() or g.is_zero():
        return p.primitive()
    return p.exquo(g).primitive()


def resultant(p: Poly, q: Poly, var: str) -> Poly:
    """Sylvester resultant in ``var`` (Bareiss determinant)."""
    ring = p.ring
    cp = p.coeffs_in(var)
    cq = q.coeffs_in(var)
    dp, dq = max(cp), max(cq)
    if dp == 0:
        return cp[0] ** dq
    if dq == 0:
        return cq[0] ** dp
    n = dp + dq
    zero = ring.zero
    rows = []
    for i in range(dq):
        row = [zero] * n
        for e, c in cp.items():
            row[i + dp - e] = c
        rows.append(row)
    for i in range(dp):
        row = [zero] * n
        for e, c in cq.items():
            row[i + dq - e] = c
        rows.append(row)
    return determinant(rows)


def dispersion_set(a: Poly, b: Poly, var: str) -> list[int]:
    """Nonnegative integers h with gcd(a(k), b(k+h)) nontrivial in ``var``."""
    if _kdeg(a, var) <= 0 or _kdeg(b, var) <= 0:
        return []
    ring = a.ring
    h = "_h"
    while h in ring.gens:
        h += "_"
    ext = Ring(ring.vars + (h,), ring.params)
    ae = a.to_ring(ext)
    be = b.to_ring(ext).substitute(var, ext.gen(var) + ext.gen(h))
    res = resultant(ae, be, var)
    if res.is_zero():
        raise ArithmeticError("resultant vanishes identically")
    hi = ext.index(h)
    groups: dict[tuple, dict[int, object]] = {}
    for exps, c in res.items():
        key = exps[:hi] + exps[hi + 1:]
        groups.setdefault(key, {})[exps[hi]] = c
    g: list = []
    for d in groups.values():
        dense = [0] * (max(d) + 1)
        for e, c in d.items():
            dense[e] = c
        g = ugcd(g, dense) if g else integerize(dense)
        if len(g) <= 1:
            return []
    return [r for r in integer_roots(g) if r >= 0]


def gosper_form(ratio: RatFunc, var: str = "k") -> GosperForm:
    if ratio.is_zero():
        raise ValueError("zero ratio has no Gosper form")
    ring = ratio.ring
    a, b = ratio.num, ratio.den
    c = ring.one
    for h in dispersion_set(a, b, var):
        g = gcd(a, b.shift(var, h))
        if _kdeg(g, var) <= 0:
            continue
        g = _kcontent_free(g, var)
        a = a.exquo(g)
        b = b.exquo(g.shift(var, -h))
        for i in range(1, h + 1):
            c = c * g.shift(var, -i)
    return GosperForm(a, b, c, var)


# ---------------------------------------------------------------------------------
# the (parametrized) Gosper equation  a x(k+1) - b(k-1) x(k) = c * sum_j lam_j P_j


def _lead(p: Poly, var: str, d: int) -> Poly:
    return p.coeff_in(var, d)


def degree_bound(a: Poly, B: Poly, f_deg: int, var: str) -> int:
    """Upper bound for deg x in ``a x(k+1) - B x(k) = f``; negative means x = 0."""
    da, db = _kdeg(a, var), _kdeg(B, var)
    if da != db:
        return f_deg - max(da, db)
    m = da
    la, lb = _lead(a, var, m), _lead(B, var, m)
    if la != lb:
        return f_deg - m
    d = f_deg - m + 1
    if m >= 1:
        alpha = _lead(a, var, m - 1)
        beta = _lead(B, var, m - 1)
        q = RatFunc(beta - alpha) / RatFunc(la)
        if q.num.is_constant() and q.den.is_constant():
            v = Fraction(q.num.constant_value()) / q.den.constant_value()
            if v.denominator == 1 and v >= 0:
                d = max(d, int(v))
    return d


@dataclass
class GosperSystem:
    """Undetermined-coefficient system for the (parametrized) Gosper equation."""

    form: GosperForm
    B: Poly
    Ps: list
    degree: int
    rows: list = field(repr=False)
    columns: list

    @property
    def unknowns(self) -> int:
        return len(self.columns)

    @property
    def equations(self) -> int:
        return len(self.rows)

    @property
    def n_x(self) -> int:
        return max(self.degree + 1, 0)

    @property
    def param_columns(self) -> list[int]:
        return list(range(self.n_x, len(self.columns)))


def build_system(form: GosperForm, Ps: Sequence[Poly]) -> GosperSystem:
    var = form.var
    ring = form.a.ring
    B = form.b.shift(var, -1)
    f_deg = _kdeg(form.c, var) + max(_kdeg(P, var) for P in Ps)
    d = degree_bound(form.a, B, f_deg, var)
    k = ring.gen(var)
    cols: list[Poly] = []
    labels = []
    kp1 = k + 1
    pa, pb = ring.one, ring.one
    for j in range(max(d + 1, 0)):
        cols.append(form.a * pa - B * pb)
        labels.append(f"x{j}")
        pa, pb = pa * kp1, pb * k
    for i, P in enumerate(Ps):
        cols.append(-(form.c * P))
        labels.append(f"p{i}")
    top = max((_kdeg(cpoly, var) for cpoly in cols if not cpoly.is_zero()), default=-1)
    coeff_maps = [cpoly.coeffs_in(var) for cpoly in cols]
    zero = ring.zero
    rows = []
    for e in range(top + 1):
        row = [cm.get(e, zero) for cm in coeff_maps]
        if any(not x.is_zero() for x in row):
            rows.append(row)
    _meter.note_system(len(labels), len(rows))
    return GosperSystem(form, B, list(Ps), d, rows, labels)


def solve_system(system: GosperSystem):
    """Solve symbolically: (x coefficients, lambdas) with some lambda nonzero, or None."""
    ncols = len(system.columns)
    if not system.rows:
        ring = system.form.a.ring
        lam = [ring.zero] * len(system.Ps)
        lam[0] = ring.one
        return [ring.zero] * system.n_x, lam
    rows = [list(r) for r in system.rows]
    v = nullspace_vector(rows, system.param_columns, list(range(ncols)))
    if v is None:
        return None
    nx = system.n_x
    return v[:nx], v[nx:]


def x_poly(system: GosperSystem, xs: Sequence[Poly]) -> Poly:
    ring = system.form.a.ring
    k = ring.gen(system.form.var)
    out = ring.zero
    for j in range(len(xs) - 1, -1, -1):
        out = out * k + xs[j]
    return out


def gosper_sum(t, var: str | None = None) -> RatFunc | None:
    """Rational ``T/t`` with ``T(k+1) - T(k) = t(k)``, or None if t is not Gosper-summable.

    ``t`` is a HyperTerm (quotient taken in ``var``) or directly the ratio t(k+1)/t(k).
    """
    if isinstance(t, RatFunc):
        ratio = t
        var = var or "k"
    else:
        var = var or t.sum_vars[0]
        ratio = t.quotient(var)
    form = gosper_form(ratio, var)
    system = build_system(form, [ratio.ring.one])
    sol = solve_system(system)
    if sol is None:
        return None
    xs, (lam,) = sol
    x = x_poly(system, xs)
    cert = RatFunc(system.B * x, form.c * lam)
    if cert.shift(var, 1) * ratio - cert != 1:
        raise ArithmeticError("Gosper certificate failed its telescoping check")
    return cert
