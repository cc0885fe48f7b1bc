"""Recurrences as sequences: unrolling, closed forms, and whole-identity proofs."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _meter
from .arith import Poly, RatFunc, Ring, as_scalar, format_scalar, gcd
from .certify import (INCONCLUSIVE, PROVED, REFUTED, CertificateBundle, ProofReport, annihilation_identity,
                      certificate_identity, check_exact, check_random)
from .expr import (Add, Div, Expr, ExprSemanticError, Inf, Int, Mul, Sub, Sum, Sym, contains_sum, linear_form,
                   parse, parse_identity, symbols, to_text)
from .hyper import EvaluationError, HyperTerm, HyperTermError, UnboundedSupport
from .linsolve import nullspace_vector
from .pricing import SEMI, Cost, PriceTag
from .telescope import (Certificate, NotProper, OrderBoundExceeded, Recurrence, TelescopeError, find_recurrence,
                        normalize_coeffs)
from .upoly import rational_roots, root_multiplicity, to_dense, univariate_content_roots

PRODUCT_FORM = "product_form"


class RecurrenceError(ValueError):
    pass


class SingularLeadingCoefficient(RecurrenceError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"leading coefficient vanishes at n = {index}")


def _at(c: Poly, var: str, m: int):
    """Coefficient value at ``var = m`` (parameters stay symbolic)."""
    return as_scalar(c.specialize({var: m}))


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, RatFunc) else x == 0


def _div(a, b):
    # keep int / int exact
    if not isinstance(a, RatFunc) and not isinstance(b, RatFunc):
        return Fraction(a) / Fraction(b)
    return a / b


# ---------------------------------------------------------------------------------
# unrolling


@dataclass
class SequenceWindow:
    """Values g(start..); ``singular`` lists the n where the leading coefficient
    vanishes, so g(n + order) is not determined (stored as None)."""

    start: int
    values: list
    singular: list = field(default_factory=list)

    def __getitem__(self, n: int):
        return self.values[n - self.start]

    def __len__(self):
        return len(self.values)


def unroll(rec: Recurrence, initial: Sequence, N: int, start: int = 0, reseed: dict | None = None) -> SequenceWindow:
    """g(start..N) from the first ``order`` values."""
    L = rec.order
    if len(initial) != L:
        raise RecurrenceError(f"need {L} initial value(s), got {len(initial)}")
    reseed = reseed or {}
    var = rec.var
    vals = [as_scalar(v) for v in initial]
    singular = []
    for idx in range(start + L, N + 1):
        m = idx - L
        lead = _at(rec.leading, var, m)
        window = vals[m - start: m - start + L]
        if _is_zero(lead):
            singular.append(m)
            vals.append(reseed.get(idx))
            continue
        if any(v is None for v in window):
            vals.append(reseed.get(idx))
            continue
        s = 0
        for c, w in zip(rec.coeffs[:-1], window):
            if not c.is_zero() and not _is_zero(w):
                s = s + _at(c, var, m) * w
        vals.append(as_scalar(_div(-s, lead)) if not _is_zero(s) else 0)
    return SequenceWindow(start, vals[: max(N - start + 1, 0)], singular)


# ---------------------------------------------------------------------------------
# first-order closed forms


def _rename(p: Poly, ring: Ring) -> Poly:
    """Same exponent layout, new generator names."""
    return Poly.from_dict(ring, dict(p.items()))


@dataclass
class ClosedForm:
    """g(n) = g0 * prod_{j<n} rho(j)."""

    rho: RatFunc
    g0: object
    display: str
    var: str = "j"

    def value(self, n: int):
        v = self.g0
        for j in range(n):
            v = v * as_scalar(self.rho.specialize({self.var: j}))
        return as_scalar(v)

    def values(self, N: int) -> list:
        out = [as_scalar(self.g0)]
        for j in range(N):
            out.append(as_scalar(out[-1] * as_scalar(self.rho.specialize({self.var: j}))))
        return out

    def __str__(self):
        return self.display


def solve_first_order(rec: Recurrence, g0, upto: int | None = None) -> ClosedForm:
    if rec.order != 1:
        raise RecurrenceError(f"closed forms need order 1, got {rec.order}")
    p0, p1 = rec.coeffs
    n = rec.var
    for r in univariate_content_roots(p1, n):
        if r >= 0 and (upto is None or r < upto):
            raise SingularLeadingCoefficient(r)
    jr = Ring(("j",), rec.ring.params)
    num, den = _rename(-p0, jr), _rename(p1, jr)
    rho = RatFunc(num, den)
    g0 = as_scalar(g0)
    return ClosedForm(rho, g0, _display(num, den, g0))


def _split_content(p: Poly, var: str):
    cs = list(p.coeffs_in(var).values())
    g = cs[0]
    for c in cs[1:]:
        g = gcd(g, c)
    return g, p.exquo(g)


def _roots(p: Poly, var: str):
    """(leading coefficient, {root: multiplicity}) if p splits over Q, else None."""
    if p.free_symbols() - {var}:
        return None
    dense = to_dense(p, var)
    roots = {}
    total = 0
    for r in rational_roots(dense):
        m = root_multiplicity(dense, r)
        roots[r] = m
        total += m
    if total != len(dense) - 1:
        return None
    return Fraction(dense[-1]), roots


def _scalar_text(c) -> str:
    c = as_scalar(c)
    if isinstance(c, RatFunc):
        return str(c.num) if c.den.is_constant() and c.den.constant_value() == 1 else f"{c.num}/({c.den})"
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _atom_text(alpha: int, shift: int, e: int) -> str:
    inner = "n" if alpha == 1 else f"{alpha}n"
    if shift:
        inner += f"{shift:+d}"
    fact = "n!" if (alpha, shift) == (1, 0) else f"({inner})!"
    return fact if e == 1 else f"({fact})^{e}"


def _display(num: Poly, den: Poly, g0) -> str:
    fallback = f"{_scalar_text(g0)}*prod(j=0..n-1, {RatFunc(num, den)})"
    gn, jn = _split_content(num, "j")
    gd, jd = _split_content(den, "j")
    rn, rd = _roots(jn, "j"), _roots(jd, "j")
    if rn is None or rd is None:
        return fallback
    C = as_scalar(RatFunc(gn, gd).to_ring(Ring((), num.ring.params))) * (rn[0] / rd[0])
    ints = {1: Counter(), -1: Counter()}
    fracs: dict[int, dict[int, Counter]] = {}
    for sign, roots in ((1, rn[1]), (-1, rd[1])):
        for r, m in roots.items():
            s = -r
            if s.denominator == 1:
                if s <= 0:
                    return fallback
                ints[sign][int(s)] += m
            elif 0 < s < 1:
                fracs.setdefault(s.denominator, {1: Counter(), -1: Counter()})[sign][s.numerator] += m
            else:
                return fallback
    atoms: Counter = Counter()
    const = Fraction(1)
    for alpha, sides in fracs.items():
        net = Counter(sides[1])
        net.subtract(sides[-1])
        copies = {net[b] for b in range(1, alpha)}
        if len(copies) != 1 or any(b not in range(1, alpha) for b in net if net[b]):
            return fallback
        c = copies.pop()
        atoms[(alpha, 0)] += c
        C = C * Fraction(1, alpha ** alpha) ** c if c > 0 else C * alpha ** (alpha * -c)
        # each completed group brings an extra (j+1)
        if c > 0:
            ints[-1][1] += c
        elif c < 0:
            ints[1][1] += -c
    for s in set(ints[1]) | set(ints[-1]):
        e = ints[1][s] - ints[-1][s]
        if e:
            atoms[(1, s - 1)] += e
            const *= Fraction(1, math.factorial(s - 1)) ** e if e > 0 else Fraction(math.factorial(s - 1)) ** -e
    lead = as_scalar(g0 * const)
    top, bottom = [], []
    if isinstance(lead, RatFunc) or lead != 1:
        if not isinstance(lead, RatFunc) and lead == -1:
            top.append("-1")
        else:
            t = _scalar_text(lead)
            simple = not isinstance(lead, RatFunc) and Fraction(lead).denominator == 1 and lead > 0
            top.append(t if simple else f"({t})")
    if isinstance(C, RatFunc) or C != 1:
        t = _scalar_text(C)
        simple = not isinstance(C, RatFunc) and Fraction(C).denominator == 1 and C > 0
        top.append(f"{t}^n" if simple else f"({t})^n")
    for (alpha, shift), e in sorted(atoms.items()):
        if e > 0:
            top.append(_atom_text(alpha, shift, e))
        elif e < 0:
            bottom.append(_atom_text(alpha, shift, -e))
    text = "*".join(top) if top else "1"
    if text.startswith("-1*"):
        text = "-" + text[3:]
    if bottom:
        text += "/" + (bottom[0] if len(bottom) == 1 else "(" + "*".join(bottom) + ")")
    return text


# ---------------------------------------------------------------------------------
# operator algebra over Q(n)[S]


def compose_ops(W: Sequence, U: Sequence, var: str) -> list:
    """Coefficients of W o U, where (W o U)_l = sum_{i+j=l} w_i(n) u_j(n+i)."""
    out = [None] * (len(W) + len(U) - 1)
    for i, w in enumerate(W):
        if _is_zero(w):
            continue
        for j, u in enumerate(U):
            if _is_zero(u):
                continue
            t = w * u.shift(var, i)
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    zero = _zero_like(W, U)
    return [zero if x is None else x for x in out]


def _zero_like(*seqs):
    for s in seqs:
        for x in s:
            if isinstance(x, (Poly, RatFunc)):
                return x * 0
    return 0


def lclm(A: Recurrence, B: Recurrence):
    """(M, U, V) with U o A = M = V o B, M normalized of minimal order."""
    if A.coeffs == B.coeffs:
        one = RatFunc(A.ring.one)
        return A, [one], [one]
    a, b = A.coeffs, B.coeffs
    al, be = A.order, B.order
    var = A.var
    ring = A.ring
    for m in range(max(al, be), al + be + 1):
        nu, nv = m - al + 1, m - be + 1
        rows = []
        for l in range(m + 1):
            row = []
            for i in range(nu):
                row.append(a[l - i].shift(var, i) if 0 <= l - i <= al else ring.zero)
            for j in range(nv):
                row.append(-b[l - j].shift(var, j) if 0 <= l - j <= be else ring.zero)
            rows.append(row)
        vec = nullspace_vector(rows, [nu - 1])
        if vec is None:
            continue
        U = [RatFunc(x) for x in vec[:nu]]
        V = [RatFunc(x) for x in vec[nu:]]
        M_raw = compose_ops(U, [RatFunc(c) for c in a], var)
        polys = [x.num if x.den.is_constant() else None for x in M_raw]
        polys = [p.scale(Fraction(1, x.den.constant_value())) for p, x in zip(polys, M_raw)]
        norm, s = normalize_coeffs(polys)
        inv = s.inverse()
        return Recurrence(tuple(norm), var), [u * inv for u in U], [v * inv for v in V]
    raise ArithmeticError("no common left multiple found (should not happen)")


# ---------------------------------------------------------------------------------
# identities


class IdentityError(ValueError):
    pass


@dataclass
class SumPart:
    sign: int
    term: HyperTerm
    bounds: list  # (var, lo Affine, hi Affine)
    text: str

    def value(self, n: int):
        return self.sign * direct_sum(self.term, n, self.bounds)


@dataclass
class HyperPart:
    sign: int
    term: HyperTerm
    text: str

    def value(self, n: int):
        return self.sign * self.term.evaluate({self.term.outer_var: n})


def _signed_terms(e: Expr, sign: int = 1, out=None):
    out = [] if out is None else out
    if isinstance(e, Add):
        _signed_terms(e.left, sign, out)
        _signed_terms(e.right, sign, out)
    elif isinstance(e, Sub):
        _signed_terms(e.left, sign, out)
        _signed_terms(e.right, -sign, out)
    elif isinstance(e, Mul) and e.left == Int(-1):
        _signed_terms(e.right, -sign, out)
    else:
        out.append((sign, e))
    return out


def _mul_factors(e: Expr, num: list, den: list):
    if isinstance(e, Mul):
        _mul_factors(e.left, num, den)
        _mul_factors(e.right, num, den)
    elif isinstance(e, Div):
        _mul_factors(e.left, num, den)
        _mul_factors(e.right, den, num)
    else:
        num.append(e)


def _product(num: list, den: list) -> Expr:
    e = num[0] if num else Int(1)
    for x in num[1:]:
        e = Mul(e, x)
    for x in den:
        e = Div(e, x)
    return e


def _pull_sum(e: Expr):
    """Rewrite a monomial containing sums as [(sign, sum-vars, bounds, body)]."""
    num, den = [], []
    _mul_factors(e, num, den)
    if any(contains_sum(x) for x in den):
        raise IdentityError(f"a sum in a denominator is not supported: {to_text(e)}")
    sums = [x for x in num if contains_sum(x)]
    rest = [x for x in num if not contains_sum(x)]
    if len(sums) != 1 or not isinstance(sums[0], Sum):
        raise IdentityError(f"products of sums are not supported: {to_text(e)}")
    s = sums[0]
    names = set()
    for x in rest + den:
        names |= symbols(x)
    if s.var in names:
        raise IdentityError(f"summation variable {s.var!r} also occurs outside its sum")
    bounds = []
    for which, b in (("lower", s.lo), ("upper", s.hi)):
        if isinstance(b, Inf) or (isinstance(b, Mul) and isinstance(b.right, Inf)):
            raise IdentityError("infinite summation bounds are only meaningful for q-series")
        if linear_form(b) is None:
            raise IdentityError(f"{which} bound of {s.var!r} must be integer-linear: {to_text(b)}")
    out = []
    for sign, piece in _signed_terms(s.body):
        inner = Mul(_product(rest, den), piece) if rest or den else piece
        if contains_sum(piece):
            for sg, vars_, bnds, body in _pull_sum(inner):
                out.append((sign * sg, [s.var] + vars_, [(s.var, linear_form(s.lo), linear_form(s.hi))] + bnds, body))
        else:
            out.append((sign, [s.var], [(s.var, linear_form(s.lo), linear_form(s.hi))], inner))
    return out


@dataclass
class Identity:
    text: str
    lhs: list
    rhs: list  # empty when the right side is product_form
    outer: str
    params: tuple
    product_form: bool = False

    @property
    def parts(self) -> list:
        return self.lhs + [_negate(p) for p in self.rhs]

    @property
    def sum_parts(self) -> list:
        return [p for p in self.parts if isinstance(p, SumPart)]

    def side_value(self, side: list, n: int):
        total = 0
        for p in side:
            total = total + p.value(n)
        return as_scalar(total)

    def lhs_value(self, n: int):
        return self.side_value(self.lhs, n)

    def rhs_value(self, n: int):
        return self.side_value(self.rhs, n)


def _negate(p):
    if isinstance(p, SumPart):
        return SumPart(-p.sign, p.term, p.bounds, p.text)
    return HyperPart(-p.sign, p.term, p.text)


def _choose_outer(lhs: Expr, rhs: Expr) -> str:
    free = symbols(lhs) | symbols(rhs)
    free.discard(PRODUCT_FORM)
    if "n" in free:
        return "n"
    bound_syms = set()
    for side in (lhs, rhs):
        for _, e in _signed_terms(side):
            if contains_sum(e):
                for _, _, bnds, _ in _pull_sum(e):
                    for _, lo, hi in bnds:
                        bound_syms |= lo.names() | hi.names()
    for _, e in _signed_terms(lhs) + _signed_terms(rhs):
        if contains_sum(e):
            for _, vars_, _, _ in _pull_sum(e):
                bound_syms -= set(vars_)
    if len(bound_syms) == 1:
        return bound_syms.pop()
    if len(free) == 1:
        return next(iter(free))
    raise IdentityError("cannot tell which variable is the outer one; name it n")


def _parts(side: Expr, outer: str, params: tuple) -> list:
    out = []
    for sign, e in _signed_terms(side):
        if e == Int(0):
            continue
        if contains_sum(e):
            for sg, vars_, bnds, body in _pull_sum(e):
                term = HyperTerm(body, outer, vars_, params)
                out.append(SumPart(sign * sg, term, bnds, to_text(e)))
        else:
            out.append(HyperPart(sign, HyperTerm(e, outer, (), params), to_text(e)))
    return out


def parse_identity_text(text: str) -> Identity:
    lhs, rhs = parse_identity(text)
    pf = False
    if rhs == Sym(PRODUCT_FORM):
        pf = True
    elif lhs == Sym(PRODUCT_FORM):
        lhs, rhs, pf = rhs, lhs, True
    if PRODUCT_FORM in symbols(lhs) or (not pf and PRODUCT_FORM in symbols(rhs)):
        raise IdentityError("product_form may only stand alone as one side")
    outer = _choose_outer(lhs, Int(0) if pf else rhs)
    bound = set()
    for side in (lhs, rhs):
        for _, e in _signed_terms(side):
            if contains_sum(e):
                for _, vars_, _, _ in _pull_sum(e):
                    bound |= set(vars_)
    free = (symbols(lhs) | (set() if pf else symbols(rhs))) - {outer, PRODUCT_FORM}
    params = tuple(sorted(free - bound))
    L = _parts(lhs, outer, params)
    R = [] if pf else _parts(rhs, outer, params)
    canon = f"{to_text(lhs)} = {PRODUCT_FORM if pf else to_text(rhs)}"
    return Identity(canon, L, R, outer, params, pf)


# ---------------------------------------------------------------------------------
# direct evaluation


def direct_sum(F: HyperTerm, n: int, bounds: Sequence | None = None, point: dict | None = None):
    """Exact finite sum of F(n, k...) over its support, clipped to ``bounds``."""
    base = {F.outer_var: n}
    if point:
        base.update(point)
    box = F.support_box({F.outer_var: n})
    bmap = {v: (lo, hi) for v, lo, hi in (bounds or [])}
    vars_ = F.sum_vars
    total = 0

    def rec(i, pt):
        nonlocal total
        if i == len(vars_):
            v = F.evaluate(pt)
            if not _is_zero(v):
                total = total + v
            return
        var = vars_[i]
        lo, hi = box[var]
        if var in bmap:
            blo, bhi = bmap[var]
            ipt = {x: pt[x] for x in pt if isinstance(pt[x], int)}
            lo, hi = max(lo, blo.evaluate(ipt)), min(hi, bhi.evaluate(ipt))
        for kv in range(lo, hi + 1):
            pt[var] = kv
            rec(i + 1, pt)
        pt.pop(var, None)

    rec(0, dict(base))
    return as_scalar(total)


def support_within_bounds(part: SumPart, n: int) -> bool:
    F = part.term
    box = F.support_box({F.outer_var: n})
    vars_ = F.sum_vars

    def rec(i, pt):
        if i == len(vars_):
            return _is_zero(F.evaluate(pt)) or all(
                lo.evaluate(pt) <= pt[v] <= hi.evaluate(pt) for v, lo, hi in part.bounds)
        var = vars_[i]
        for kv in range(box[var][0], box[var][1] + 1):
            pt[var] = kv
            if not rec(i + 1, pt):
                return False
        pt.pop(var, None)
        return True

    return rec(0, {F.outer_var: n})


# ---------------------------------------------------------------------------------
# common annihilators


def hyper_annihilator(h: HyperTerm) -> Recurrence:
    rho = h.quotient(h.outer_var)
    ring = Ring((h.outer_var,), h.params)
    return Recurrence.normalized([-rho.num.to_ring(ring), rho.den.to_ring(ring)], h.outer_var)


@dataclass
class Annihilation:
    recurrence: Recurrence
    multipliers: list  # per part: U with U o A_part = recurrence
    own: list  # per part: its own recurrence
    certificates: list  # per part: composed R (None for hyper parts)
    logs: list


def composed_certificate(F: HyperTerm, own: Certificate, U: Sequence[RatFunc]) -> RatFunc:
    """R' with G' = sum_j u_j(n) G(n+j, k)."""
    n = F.outer_var
    R = own.R[0]
    total = RatFunc(F.ring.zero)
    for j, u in enumerate(U):
        if u.is_zero():
            continue
        uj = RatFunc(u.num.to_ring(F.ring), u.den.to_ring(F.ring))
        total = total + uj * R.shift(n, j) * F.shift_quotient({n: j})
    return total


def annihilate(parts: Sequence, L_max: int = 6, verify: bool = False) -> Annihilation:
    own, certs, logs = [], [], []
    for p in parts:
        if isinstance(p, SumPart):
            if len(p.term.sum_vars) != 1:
                raise TelescopeError("discovering certificates for multiple sums is not supported; supply them")
            c = find_recurrence(p.term, L_max, verify=verify)
            own.append(c.recurrence)
            certs.append(c)
            logs.append(c.degree_meta.get("search_log"))
        else:
            own.append(hyper_annihilator(p.term))
            certs.append(None)
            logs.append(None)
    M = own[0]
    Us = [[RatFunc(M.ring.one)]]
    for A in own[1:]:
        M2, W, V = lclm(M, A)
        Us = [compose_ops(W, U, M.var) for U in Us] + [V]
        M = M2
    Rs = []
    for p, c, U in zip(parts, certs, Us):
        Rs.append(composed_certificate(p.term, c, U) if c is not None else None)
    return Annihilation(M, Us, own, Rs, logs)


def nonneg_roots(p: Poly, var: str) -> list[int]:
    if p.is_zero():
        return []
    return [r for r in univariate_content_roots(p, var) if r >= 0]


def _k_content(den: Poly, sum_vars: Sequence[str]) -> Poly:
    """Factor of ``den`` free of the sum variables."""
    g = den
    for v in sum_vars:
        cs = list(g.coeffs_in(v).values())
        h = cs[0]
        for c in cs[1:]:
            if h.is_constant():
                break
            h = gcd(h, c)
        g = h
    return g


def check_range(rec: Recurrence, parts: Sequence, Rs: Sequence) -> int:
    L = rec.order
    n = rec.var
    bad = nonneg_roots(rec.leading, n)
    for p, R in zip(parts, Rs):
        if R is not None and not R.is_zero():
            bad += nonneg_roots(_k_content(R.den, p.term.sum_vars), n)
    return max([L] + [r + L for r in bad])


# ---------------------------------------------------------------------------------
# proofs


def _exact_or_random(ident, mode, trials, seed):
    return check_exact(ident) if mode == "rigorous" else check_random(ident, trials, seed)


def _report(verdict, mode, m, details, witness=None, reason=None, price=None, bundle=None) -> ProofReport:
    cost = Cost.from_meter(m)
    if price is None:
        price = PriceTag.proved(cost) if verdict in (PROVED, REFUTED) else PriceTag.unpriced(cost)
    else:
        price = price.with_cost(cost)
    return ProofReport(verdict, mode, price, details, witness, reason, bundle)


def _compare_values(ident: Identity, ns, closed: ClosedForm | None = None):
    """First n where the sides differ, as (n, lhs, rhs); or ('undefined', n, msg); or None."""
    lhs_vals = {}
    for n in ns:
        try:
            lv = ident.lhs_value(n)
            rv = closed.value(n) if closed is not None else ident.rhs_value(n)
        except (EvaluationError, ZeroDivisionError) as e:
            return ("undefined", n, str(e)), lhs_vals
        lhs_vals[n] = lv
        if as_scalar(lv - rv) != 0:
            return (n, lv, rv), lhs_vals
    return None, lhs_vals


def _support_ok(ident: Identity, upto: int):
    for p in ident.sum_parts:
        for n in range(upto + 1):
            if not support_within_bounds(p, n):
                return p, n
    return None


def _verify_annihilation(ident: Identity, rec: Recurrence, Rs, mode, trials, seed):
    """Check every part against ``rec``; returns (reports, combined error bound or None)."""
    reports = []
    for p, R in zip(ident.parts, Rs):
        if isinstance(p, SumPart):
            ri = certificate_identity(p.term, rec.coeffs, [R])
        else:
            ri = annihilation_identity(p.term, rec.coeffs)
        reports.append(_exact_or_random(ri, mode, trials, seed))
    return reports


def _combine(reports, m):
    """Overall price of a proof built from ``reports``."""
    bound = Fraction(0)
    for r in reports:
        if r.price.rigor == SEMI:
            bound += r.price.error_bound
    cost = Cost.from_meter(m)
    if bound:
        return PriceTag(SEMI, cost, bound)
    return PriceTag.proved(cost)


SUPPORT_CHECK = 12
EARLY = 4


def prove_identity(identity, mode: str = "rigorous", L_max: int = 6, trials: int = 20, seed: int = 0) -> ProofReport:
    """Prove ``lhs = rhs`` (text, or an :class:`Identity`)."""
    if mode not in ("rigorous", "semi"):
        raise ValueError(f"unknown mode {mode!r}")
    vmode = "rigorous" if mode == "rigorous" else "probabilistic"
    ident = parse_identity_text(identity) if isinstance(identity, str) else identity
    details = {"identity": ident.text, "outer_var": ident.outer, "params": list(ident.params)}
    with _meter.metered() as m:
        bad = _support_ok(ident, SUPPORT_CHECK)
        if bad is not None:
            p, n = bad
            return _report(INCONCLUSIVE, vmode, m, details, {"n": n, "sum": p.text},
                           "summation bounds cut off part of the support")
        if not ident.product_form:
            diff, _ = _compare_values(ident, range(EARLY))
            if diff is not None and diff[0] != "undefined":
                n, lv, rv = diff
                return _report(REFUTED, vmode, m, details, {"n": n, "lhs": format_scalar(lv), "rhs": format_scalar(rv)},
                               f"sides differ at {ident.outer} = {n}")
        try:
            ann = annihilate(ident.parts, L_max, verify=False)
        except NotProper as e:
            return _report(INCONCLUSIVE, vmode, m, details, {"factors": e.witness}, str(e))
        except OrderBoundExceeded as e:
            details["search_log"] = e.log
            return _report(INCONCLUSIVE, vmode, m, details, None, str(e))
        except (TelescopeError, HyperTermError, UnboundedSupport) as e:
            return _report(INCONCLUSIVE, vmode, m, details, None, str(e))
        rec = ann.recurrence
        details["recurrence"] = str(rec)
        details["order"] = rec.order
        details["search_log"] = [lg for lg in ann.logs if lg is not None]
        reports = _verify_annihilation(ident, rec, ann.certificates, vmode, trials, seed)
        for r in reports:
            if r.verdict != PROVED:
                # a discovered certificate that fails its own check is a bug, not a refutation
                return _report(INCONCLUSIVE, vmode, m, details, r.witness, f"certificate check: {r.verdict}")
        N = check_range(rec, ident.parts, ann.certificates)
        closed = None
        if ident.product_form:
            if rec.order != 1:
                return _report(INCONCLUSIVE, vmode, m, details, None,
                               f"minimal recurrence has order {rec.order}; no product form")
            try:
                closed = solve_first_order(rec, ident.lhs_value(0))
            except SingularLeadingCoefficient as e:
                return _report(INCONCLUSIVE, vmode, m, details, None, str(e))
            details["closed_form"] = closed.display
        bad = _support_ok(ident, N)
        if bad is not None:
            p, n = bad
            return _report(INCONCLUSIVE, vmode, m, details, {"n": n, "sum": p.text},
                           "summation bounds cut off part of the support")
        diff, lhs_vals = _compare_values(ident, range(N + 1), closed)
        details["check_range"] = N
        if diff is not None:
            if diff[0] == "undefined":
                return _report(INCONCLUSIVE, vmode, m, details, {"n": diff[1]}, f"undefined: {diff[2]}")
            n, lv, rv = diff
            return _report(REFUTED, vmode, m, details, {"n": n, "lhs": format_scalar(lv), "rhs": format_scalar(rv)},
                           f"sides differ at {ident.outer} = {n}")
        certs = [R for p, R in zip(ident.parts, ann.certificates) if isinstance(p, SumPart)]
        details["certificates"] = [str(R) for R in certs]
        details["initial_values"] = [format_scalar(lhs_vals[i]) for i in range(N + 1)]
        price = _combine(reports, m)
    bundle = CertificateBundle(
        ident.text,
        [v for p in ident.sum_parts for v in p.term.sum_vars],
        ident.outer,
        list(ident.params),
        rec,
        certs,
        [lhs_vals[i] for i in range(N + 1)],
        price,
        seed if mode == "semi" else None,
        trials if mode == "semi" else None,
    )
    return _report(PROVED, vmode, m, details, price=price, bundle=bundle)


def verify_bundle(bundle: CertificateBundle, mode: str = "rigorous", trials: int = 20, seed: int = 0) -> ProofReport:
    """Re-check a stored proof from scratch."""
    vmode = "rigorous" if mode == "rigorous" else "probabilistic"
    details = {"identity": bundle.identity}
    with _meter.metered() as m:
        ident = parse_identity_text(bundle.identity)
        rec = bundle.recurrence
        if rec.var != ident.outer or tuple(rec.ring.params) != tuple(ident.params):
            return _report(INCONCLUSIVE, vmode, m, details, None, "recurrence ring does not match the identity")
        sums = ident.sum_parts
        if len(sums) != len(bundle.certificates):
            return _report(INCONCLUSIVE, vmode, m, details, None,
                           f"{len(bundle.certificates)} certificate(s) for {len(sums)} sum(s)")
        Rs = []
        it = iter(bundle.certificates)
        for p in ident.parts:
            if isinstance(p, SumPart):
                if len(p.term.sum_vars) != 1:
                    return _report(INCONCLUSIVE, vmode, m, details, None, "stored files hold single-sum certificates only")
                try:
                    Rs.append(RatFunc.parse(next(it), p.term.ring))
                except Exception as e:
                    return _report(INCONCLUSIVE, vmode, m, details, None, f"malformed certificate: {e}")
            else:
                Rs.append(None)
        reports = _verify_annihilation(ident, rec, Rs, vmode, trials, seed)
        for r in reports:
            if r.verdict != PROVED:
                return _report(r.verdict, vmode, m, details, r.witness, f"certificate check: {r.reason}")
        N = check_range(rec, ident.parts, Rs)
        details["check_range"] = N
        bad = _support_ok(ident, max(N, SUPPORT_CHECK))
        if bad is not None:
            return _report(INCONCLUSIVE, vmode, m, details, {"n": bad[1]}, "summation bounds cut off part of the support")
        closed = None
        if ident.product_form:
            if rec.order != 1:
                return _report(INCONCLUSIVE, vmode, m, details, None, "product_form needs a first-order recurrence")
            try:
                closed = solve_first_order(rec, ident.lhs_value(0))
            except SingularLeadingCoefficient as e:
                return _report(INCONCLUSIVE, vmode, m, details, None, str(e))
        diff, lhs_vals = _compare_values(ident, range(N + 1), closed)
        if diff is not None:
            if diff[0] == "undefined":
                return _report(INCONCLUSIVE, vmode, m, details, {"n": diff[1]}, f"undefined: {diff[2]}")
            n, lv, rv = diff
            return _report(REFUTED, vmode, m, details, {"n": n, "lhs": format_scalar(lv), "rhs": format_scalar(rv)},
                           f"sides differ at {ident.outer} = {n}")
        for i, v in enumerate(bundle.initial_values):
            if i in lhs_vals and as_scalar(v - lhs_vals[i]) != 0:
                return _report(REFUTED, vmode, m, details, {"n": i, "stored": format_scalar(v),
                                                            "actual": format_scalar(lhs_vals[i])},
                               "stored initial value is wrong")
    return _report(PROVED, vmode, m, details, price=_combine(reports, m))


def sum_recurrence(text: str, L_max: int = 6) -> tuple[Recurrence, list, Identity]:
    """Minimal recurrence of a (sum of) sum expression(s), with composed certificates."""
    ident = parse_identity_text(f"{text} = 0")
    if not ident.sum_parts:
        raise IdentityError("expression contains no sum")
    ann = annihilate(ident.parts, L_max, verify=True)
    return ann.recurrence, [R for R in ann.certificates if R is not None], ident


__all__ = [
    "SequenceWindow", "unroll", "ClosedForm", "solve_first_order", "SingularLeadingCoefficient", "RecurrenceError",
    "compose_ops", "lclm", "Identity", "IdentityError", "SumPart", "HyperPart", "parse_identity_text",
    "direct_sum", "annihilate", "check_range", "prove_identity", "verify_bundle", "sum_recurrence",
    "hyper_annihilator", "PRODUCT_FORM",
]
