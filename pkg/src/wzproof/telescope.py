"""Creative telescoping for single sums, and WZ pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import Poly, RatFunc, Ring, gcd, lcm
from .gosper import GosperForm, GosperSystem, build_system, gosper_form, solve_system, x_poly
from .hyper import HyperTerm


class TelescopeError(Exception):
    pass


class NotProper(TelescopeError):
    def __init__(self, witness: Sequence[str]):
        self.witness = list(witness)
        super().__init__(f"term is not proper; offending factor(s): {', '.join(self.witness)}")


class OrderBoundExceeded(TelescopeError):
    def __init__(self, L_max: int, log=None):
        self.L_max = L_max
        self.log = log or []
        super().__init__(f"no recurrence of order <= {L_max} (inconclusive)")


class NoWZPair(TelescopeError):
    pass


# ---------------------------------------------------------------------------------
# recurrences


def normalize_coeffs(coeffs: Sequence[Poly]) -> tuple[list[Poly], RatFunc]:
    """Content-free coefficients with positive lc of the last one; returns (coeffs, s)
    with ``normalized = coeffs / s``."""
    ring = coeffs[0].ring
    g = ring.zero
    for c in coeffs:
        if not c.is_zero():
            g = gcd(g, c) if not g.is_zero() else c.primitive()
    if g.is_zero():
        raise ValueError("all recurrence coefficients vanish")
    out = [c.exquo(g) if not c.is_zero() else c for c in coeffs]
    cont = Fraction(0)
    for c in out:
        if not c.is_zero():
            cc = abs(c.content())
            cont = Fraction(math.gcd(cont.numerator, cc.numerator), math.lcm(cont.denominator, cc.denominator)) if cont else cc
    lead = next(c for c in reversed(out) if not c.is_zero())
    if lead.lc() < 0:
        cont = -cont
    out = [c.scale(1 / cont) for c in out]
    return out, RatFunc(g.scale(cont))


@dataclass(frozen=True)
class Recurrence:
    """``sum_i coeffs[i](n) * g(n+i) = 0``."""

    coeffs: tuple
    var: str = "n"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise ValueError("leading recurrence coefficient must be nonzero")

    @classmethod
    def normalized(cls, coeffs: Sequence[Poly], var: str = "n") -> "Recurrence":
        trimmed = list(coeffs)
        while len(trimmed) > 1 and trimmed[-1].is_zero():
            trimmed.pop()
        return cls(tuple(normalize_coeffs(trimmed)[0]), var)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def ring(self) -> Ring:
        return self.coeffs[0].ring

    @property
    def leading(self) -> Poly:
        return self.coeffs[-1]

    def is_normalized(self) -> bool:
        return list(self.coeffs) == normalize_coeffs(list(self.coeffs))[0]

    def apply(self, values: Sequence, start: int, point: dict | None = None):
        """``sum_i p_i(start) g(start+i)`` for a window of values starting at ``start``."""
        pt = dict(point or {})
        pt[self.var] = start
        total = 0
        for i, c in enumerate(self.coeffs):
            total = total + c.evaluate(pt) * values[i]
        return total

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            shift = self.var if i == 0 else f"{self.var}+{i}"
            parts.append(f"({c})*g({shift})")
        return " + ".join(parts) + " = 0"


@dataclass
class Certificate:
    term: HyperTerm
    recurrence: Recurrence
    R: list
    degree_meta: dict = field(default_factory=dict)
    provenance: str = "discovered"

    def __post_init__(self):
        if len(self.R) != len(self.term.sum_vars):
            raise ValueError(f"{len(self.R)} certificate(s) for {len(self.term.sum_vars)} sum variable(s)")
        if self.provenance not in ("discovered", "supplied"):
            raise ValueError(f"bad provenance {self.provenance!r}")

    @property
    def G_over_F(self) -> list:
        return self.R


# ---------------------------------------------------------------------------------
# the undetermined-coefficient system


@dataclass
class SymbolicSystem:
    term: HyperTerm
    L: int
    ratios: list  # F(n+i,k)/F(n,k)
    D: Poly  # common denominator of the ratios
    multipliers: list  # P_i polynomials, so that sum p_i F(n+i,k) = F/D * sum p_i P_i
    form: GosperForm
    gosper: GosperSystem
    wz: bool = False

    @property
    def unknowns(self) -> int:
        return self.gosper.unknowns

    @property
    def equations(self) -> int:
        return self.gosper.equations

    @property
    def rows(self):
        return self.gosper.rows

    @property
    def columns(self):
        return self.gosper.columns

    @property
    def param_columns(self):
        return self.gosper.param_columns

    def predicted_denominator(self) -> Poly:
        """Denominator of the certificate before cancellation: c(k) * D(n,k)."""
        return self.form.c * self.D


def _require_single_proper(F: HyperTerm):
    if len(F.sum_vars) != 1:
        raise TelescopeError("creative telescoping needs exactly one sum variable")
    ok, witness = F.check_proper()
    if not ok:
        raise NotProper(witness)


def build_linear_system(F: HyperTerm, L: int, wz: bool = False) -> SymbolicSystem:
    _require_single_proper(F)
    n, k = F.outer_var, F.sum_vars[0]
    ratios = [F.shift_quotient({n: i}) for i in range(L + 1)]
    D = F.ring.one
    for r in ratios:
        D = lcm(D, r.den) if not r.den.is_constant() else D
    mult = [r.num * D.exquo(r.den) for r in ratios]
    rk = F.quotient(k)
    AB = rk * RatFunc(D, D.shift(k, 1))
    form = gosper_form(AB, k)
    Ps = [mult[1] - mult[0]] if wz else mult
    gs = build_system(form, Ps)
    return SymbolicSystem(F, L, ratios, D, mult, form, gs, wz)


def _reduce_vector(vec: list[Poly]) -> list[Poly]:
    g = None
    for v in vec:
        if not v.is_zero():
            g = v.primitive() if g is None else gcd(g, v)
            if g.is_constant():
                break
    if g is None or g.is_constant():
        return vec
    return [v.exquo(g) if not v.is_zero() else v for v in vec]


def residual(F: HyperTerm, coeffs: Sequence[Poly], Rs: Sequence[RatFunc]) -> RatFunc:
    """``sum_i p_i F(n+i)/F - sum_j (R_j(k_j+1) F(k_j+1)/F - R_j)`` as a rational function."""
    ring = F.ring
    total = RatFunc(ring.zero)
    for i, c in enumerate(coeffs):
        if not c.is_zero():
            total = total + F.shift_quotient({F.outer_var: i}) * RatFunc(c.to_ring(ring))
    for kv, R in zip(F.sum_vars, Rs):
        total = total - (R.shift(kv, 1) * F.quotient(kv) - R)
    return total


def solve_linear_system(system: SymbolicSystem, verify: bool = True) -> Certificate | None:
    sol = solve_system(system.gosper)
    if sol is None:
        return None
    F = system.term
    n, k = F.outer_var, F.sum_vars[0]
    xs, lam = sol
    red = _reduce_vector(list(xs) + list(lam))
    xs, lam = red[: len(xs)], red[len(xs):]
    if system.wz:
        ps = [-lam[0], lam[0]]
    else:
        ps = list(lam)
    while len(ps) > 1 and ps[-1].is_zero():
        ps.pop()
    rec_ring = Ring((n,), F.params)
    norm, scale = normalize_coeffs([p.to_ring(rec_ring) for p in ps])
    x = x_poly(system.gosper, xs)
    R = RatFunc(system.gosper.B * x, system.form.c * system.D) / scale.to_ring(F.ring)
    rec = Recurrence(tuple(norm), n)
    meta = {
        "order": rec.order,
        "x_degree": system.gosper.degree,
        "deg_a": system.form.a.degree(k),
        "deg_b": system.form.b.degree(k),
        "deg_c": system.form.c.degree(k),
        "unknowns": system.unknowns,
        "equations": system.equations,
    }
    cert = Certificate(F, rec, [R], meta, "discovered")
    if verify and not residual(F, rec.coeffs, cert.R).is_zero():
        raise ArithmeticError("discovered certificate failed its symbolic check")
    return cert


@dataclass
class SearchResult:
    certificate: Certificate
    log: list  # (L, unknowns, equations, solvable)


def find_recurrence(F: HyperTerm, L_max: int = 6, verify: bool = True, with_log: bool = False):
    """Minimal-order recurrence with certificate, searching L = 0..L_max."""
    _require_single_proper(F)
    log = []
    for L in range(L_max + 1):
        system = build_linear_system(F, L)
        cert = solve_linear_system(system, verify=verify)
        log.append((L, system.unknowns, system.equations, cert is not None))
        if cert is not None:
            cert.degree_meta["search_log"] = list(log)
            return SearchResult(cert, log) if with_log else cert
    raise OrderBoundExceeded(L_max, log)


def wz_pair(F: HyperTerm, verify: bool = True) -> Certificate:
    """Certificate for F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)."""
    system = build_linear_system(F, 1, wz=True)
    cert = solve_linear_system(system, verify=verify)
    if cert is None:
        raise NoWZPair("unit recurrence g(n+1) - g(n) = 0 has no certificate")
    return cert
