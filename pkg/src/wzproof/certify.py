"""Rigorous and randomized verification of certificates; the certificate file format."""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _meter
from .arith import Poly, RatFunc, Ring, as_scalar, format_scalar
from .hyper import HyperTerm
from .linsolve import integer_rows, nullspace_vector
from .pricing import Cost, PriceTag, compose
from .telescope import Certificate, Recurrence, build_linear_system

PROVED = "Proved"
REFUTED = "Refuted"
INCONCLUSIVE = "Inconclusive"

SAMPLE_LO, SAMPLE_HI = 1, 2 ** 31
SAMPLE_SIZE = SAMPLE_HI - SAMPLE_LO + 1
MAX_RESAMPLES = 100


@dataclass
class ProofReport:
    verdict: str
    mode: str
    price: PriceTag
    details: dict = field(default_factory=dict)
    witness: object = None
    reason: str | None = None
    bundle: object = field(default=None, repr=False, compare=False)

    @property
    def proved(self) -> bool:
        return self.verdict == PROVED

    def summary(self) -> dict:
        """Deterministic, JSON-ready view (wall time excluded)."""
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "reason": self.reason,
            "witness": _jsonable(self.witness),
            "price": self.price.to_json(),
            "details": _jsonable(self.details),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Fraction, RatFunc)):
        return format_scalar(x)
    if isinstance(x, Poly):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, (Recurrence,)):
        return str(x)
    return x


# ---------------------------------------------------------------------------------
# identities as sums of "pieces" coef * prod(nums) / prod(dens)


@dataclass
class Piece:
    coef: Poly
    nums: list
    dens: list


@dataclass
class RationalIdentity:
    """``sum(pieces) == 0`` over ``ring``."""

    ring: Ring
    pieces: list

    def den_product(self, piece: Piece) -> Poly:
        d = self.ring.one
        for x in piece.dens:
            d = d * x
        return d

    def degree_bound(self) -> tuple[int, int]:
        """(bound on deg of cleared numerator, degree of the product of distinct dens)."""
        dens = self._distinct_dens()
        E = sum(max(d.total_degree(), 0) for d in dens)
        D = 0
        for pc, key in zip(self.pieces, self._den_keys()):
            dn = max(pc.coef.total_degree(), 0) + sum(max(x.total_degree(), 0) for x in pc.nums)
            dd = sum(max(x.total_degree(), 0) for x in pc.dens)
            D = max(D, dn + E - dd)
        return D, E

    def _den_keys(self):
        return [tuple(sorted((str(x) for x in pc.dens))) for pc in self.pieces]

    def _distinct_dens(self) -> list[Poly]:
        seen = {}
        for pc, key in zip(self.pieces, self._den_keys()):
            if key not in seen:
                seen[key] = self.den_product(pc)
        return list(seen.values())

    def cleared(self) -> Poly:
        keys = self._den_keys()
        order = []
        dens = {}
        for pc, key in zip(self.pieces, keys):
            if key not in dens:
                dens[key] = self.den_product(pc)
                order.append(key)
        # product of all distinct dens except one, via prefix/suffix products
        m = len(order)
        pre = [self.ring.one] * (m + 1)
        for i, key in enumerate(order):
            pre[i + 1] = pre[i] * dens[key]
        suf = [self.ring.one] * (m + 1)
        for i in range(m - 1, -1, -1):
            suf[i] = suf[i + 1] * dens[order[i]]
        others = {key: pre[i] * suf[i + 1] for i, key in enumerate(order)}
        total = self.ring.zero
        for pc, key in zip(self.pieces, keys):
            t = pc.coef
            for x in pc.nums:
                t = t * x
            total = total + t * others[key]
        _meter.note_terms(len(total))
        return total

    def evaluate(self, point: dict):
        """Exact value at a point, or None if some denominator vanishes there."""
        total = Fraction(0)
        for pc in self.pieces:
            d = 1
            for x in pc.dens:
                v = x.evaluate(point)
                if v == 0:
                    return None
                d *= v
            nv = pc.coef.evaluate(point)
            if nv == 0:
                continue
            for x in pc.nums:
                nv *= x.evaluate(point)
            _meter.add_mults(len(pc.nums) + 1)
            total += Fraction(nv) / d
        return total


def certificate_identity(F: HyperTerm, coeffs: Sequence[Poly], Rs: Sequence[RatFunc]) -> RationalIdentity:
    ring = F.ring
    if len(Rs) != len(F.sum_vars):
        raise ValueError(f"arity mismatch: {len(Rs)} certificate(s) for {len(F.sum_vars)} sum variable(s)")
    pieces = []
    for i, c in enumerate(coeffs):
        c = c.to_ring(ring)
        if c.is_zero():
            continue
        s = F.shift_quotient({F.outer_var: i})
        pieces.append(Piece(c, [s.num], [s.den]))
    for kv, R in zip(F.sum_vars, Rs):
        R = R.to_ring(ring) if R.ring is not ring else R
        if R.is_zero():
            continue
        q = F.quotient(kv)
        pieces.append(Piece(-ring.one, [R.num.shift(kv, 1), q.num], [R.den.shift(kv, 1), q.den]))
        pieces.append(Piece(ring.one, [R.num], [R.den]))
    return RationalIdentity(ring, pieces)


def annihilation_identity(h: HyperTerm, coeffs: Sequence[Poly]) -> RationalIdentity:
    """``sum_i p_i(n) h(n+i)/h(n) == 0`` for a term in the outer variable only."""
    return certificate_identity(h, coeffs, [])


# ---------------------------------------------------------------------------------
# checks


def _monomial_text(ring: Ring, exps) -> str:
    parts = [g if e == 1 else f"{g}^{e}" for g, e in zip(ring.gens, exps) if e]
    return "*".join(parts) or "1"


def check_exact(ident: RationalIdentity) -> ProofReport:
    with _meter.metered() as m:
        cleared = ident.cleared()
        D, E = ident.degree_bound()
    details = {"degree": D if cleared.is_zero() else cleared.total_degree()}
    if cleared.is_zero():
        return ProofReport(PROVED, "rigorous", PriceTag.proved(Cost.from_meter(m)), details)
    m0 = min(cleared.terms)
    exps = ident.ring.unpack(m0)
    coeff = cleared.terms[m0]
    witness = {"monomial": _monomial_text(ident.ring, exps), "coefficient": format_scalar(Fraction(coeff))}
    return ProofReport(REFUTED, "rigorous", PriceTag.proved(Cost.from_meter(m)), details, witness,
                       "cleared identity has a nonzero coefficient")


def _trial_rng(seed: int, trial: int, attempt: int) -> random.Random:
    h = hashlib.sha256(f"{seed}:{trial}:{attempt}".encode()).digest()
    return random.Random(int.from_bytes(h[:16], "big"))


def sample_point(gens: Sequence[str], seed: int, trial: int, attempt: int) -> dict:
    rng = _trial_rng(seed, trial, attempt)
    return {g: rng.randint(SAMPLE_LO, SAMPLE_HI) for g in gens}


def error_bound(degree: int, trials: int) -> Fraction:
    if degree <= 0:
        return Fraction(0)
    return Fraction(degree, SAMPLE_SIZE) ** trials


def check_random(ident: RationalIdentity, trials: int, seed: int) -> ProofReport:
    if trials < 1:
        raise ValueError("need at least one trial")
    gens = ident.ring.gens
    with _meter.metered() as m:
        D, E = ident.degree_bound()
        points = []
        resamples = 0
        for t in range(trials):
            for attempt in range(MAX_RESAMPLES + 1):
                pt = sample_point(gens, seed, t, attempt)
                val = ident.evaluate(pt)
                if val is not None:
                    break
                resamples += 1
            else:
                details = {"degree": D, "guard_degree": E, "trials": trials, "seed": seed, "points": points}
                return ProofReport(INCONCLUSIVE, "probabilistic", PriceTag.unpriced(Cost.from_meter(m)), details,
                                   reason=f"trial {t}: {MAX_RESAMPLES} resamples all hit a pole")
            points.append(pt)
            if val != 0:
                details = {"degree": D, "guard_degree": E, "trials": t + 1, "seed": seed, "points": points,
                           "resamples": resamples}
                return ProofReport(REFUTED, "probabilistic", PriceTag.proved(Cost.from_meter(m)), details,
                                   {"point": pt, "value": format_scalar(val)}, "nonzero evaluation")
    details = {"degree": D, "guard_degree": E, "trials": trials, "seed": seed, "points": points, "resamples": resamples}
    bound = error_bound(D + E, trials)
    price = PriceTag.proved(Cost.from_meter(m)) if bound == 0 else PriceTag.semi(cost=Cost.from_meter(m), bound=bound)
    return ProofReport(PROVED, "probabilistic", price, details)


def verify_rigorous(c: Certificate) -> ProofReport:
    return check_exact(certificate_identity(c.term, c.recurrence.coeffs, c.R))


def verify_probabilistic(c: Certificate, trials: int = 20, seed: int = 0) -> ProofReport:
    return check_random(certificate_identity(c.term, c.recurrence.coeffs, c.R), trials, seed)


def verify_multisum(F: HyperTerm, recurrence: Recurrence, Rs: Sequence[RatFunc], mode: str = "rigorous",
                    trials: int = 20, seed: int = 0) -> ProofReport:
    ident = certificate_identity(F, recurrence.coeffs, Rs)
    if mode == "rigorous":
        return check_exact(ident)
    return check_random(ident, trials, seed)


def verify(c: Certificate, mode: str = "rigorous", trials: int = 20, seed: int = 0) -> ProofReport:
    if mode == "rigorous":
        return verify_rigorous(c)
    return verify_probabilistic(c, trials, seed)


# ---------------------------------------------------------------------------------
# specialized numeric systems


class SingularSpecialization(ValueError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"predicted denominators degenerate at n = {value}")


@dataclass
class EvidenceReport:
    values: list
    solvable: list
    verdict: str  # positive | negative | mixed | Inconclusive
    price: PriceTag
    unknowns: int = 0
    equations: int = 0

    @property
    def cost(self) -> Cost:
        return self.price.cost


def specialization_point(F: HyperTerm, value: int) -> dict:
    point = {F.outer_var: value}
    for i, p in enumerate(F.params):
        point[p] = value + i + 1
    return point


def semi_rigorous_solvability(F: HyperTerm, L: int, values: Sequence[int], unit: bool = False) -> EvidenceReport:
    """Solve the order-L system with n (and parameters) specialized to each value."""
    with _meter.metered() as m:
        system = build_linear_system(F, 1 if unit else L, wz=unit)
        k = F.sum_vars[0]
        guards = [system.form.a, system.gosper.B, system.predicted_denominator()]
        results = []
        for v in values:
            pt = specialization_point(F, v)
            for g in guards:
                lead = g.coeff_in(k, g.degree(k))
                if lead.specialize(pt).is_zero():
                    raise SingularSpecialization(v)
            if not system.rows:
                results.append(True)
                continue
            rows = [[as_scalar(x.specialize(pt)) for x in row] for row in system.rows]
            rows = integer_rows(rows)
            results.append(nullspace_vector(rows, system.param_columns) is not None)
    if not values:
        verdict = INCONCLUSIVE
    elif all(results):
        verdict = "positive"
    elif not any(results):
        verdict = "negative"
    else:
        verdict = "mixed"
    return EvidenceReport(list(values), results, verdict, PriceTag.unpriced(Cost.from_meter(m)),
                          system.unknowns, system.equations)


# ---------------------------------------------------------------------------------
# certificate files

VERSION = 1
FIELDS = ("version", "identity", "sum_vars", "outer_var", "params", "order", "coeffs", "certificates",
          "initial_values", "price", "seed", "trials")


class CertificateFileError(ValueError):
    pass


class VersionError(CertificateFileError):
    pass


@dataclass
class CertificateBundle:
    identity: str
    sum_vars: list
    outer_var: str
    params: list
    recurrence: Recurrence
    certificates: list  # canonical rational-function strings, one per sum constituent
    initial_values: list  # exact values
    price: PriceTag
    seed: int | None = None
    trials: int | None = None

    def to_dict(self) -> dict:
        return {
            "version": VERSION,
            "identity": self.identity,
            "sum_vars": list(self.sum_vars),
            "outer_var": self.outer_var,
            "params": list(self.params),
            "order": self.recurrence.order,
            "coeffs": [str(c) for c in self.recurrence.coeffs],
            "certificates": [str(c) for c in self.certificates],
            "initial_values": [format_scalar(v) for v in self.initial_values],
            "price": self.price.to_json(),
            "seed": self.seed,
            "trials": self.trials,
        }


def serialize(bundle: CertificateBundle) -> str:
    return json.dumps(bundle.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _parse_value(text: str, ring: Ring):
    from .expr import parse, to_ratfunc

    return as_scalar(to_ratfunc(parse(text), ring))


def deserialize(text: str) -> CertificateBundle:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFileError(f"not JSON: {e}") from None
    if not isinstance(data, dict):
        raise CertificateFileError("certificate file must hold a JSON object")
    if "version" in data and data["version"] != VERSION:
        raise VersionError(f"unsupported certificate version {data['version']!r}")
    keys = tuple(data)
    if set(keys) != set(FIELDS):
        missing = sorted(set(FIELDS) - set(keys))
        extra = sorted(set(keys) - set(FIELDS))
        raise CertificateFileError(f"bad fields: missing {missing}, unexpected {extra}")
    if keys != FIELDS:
        raise CertificateFileError("fields out of canonical order")
    outer = data["outer_var"]
    params = list(data["params"])
    rec_ring = Ring((outer,), params)
    try:
        coeffs = [Poly.parse(s, rec_ring) for s in data["coeffs"]]
        values = [_parse_value(s, Ring((), params)) for s in data["initial_values"]]
    except Exception as e:
        raise CertificateFileError(f"malformed polynomial or value: {e}") from None
    if len(coeffs) != data["order"] + 1:
        raise CertificateFileError("order does not match the number of coefficients")
    try:
        rec = Recurrence(tuple(coeffs), outer)
    except ValueError as e:
        raise CertificateFileError(str(e)) from None
    return CertificateBundle(
        data["identity"], list(data["sum_vars"]), outer, params, rec, list(data["certificates"]), values,
        PriceTag.from_json(data["price"]), data["seed"], data["trials"],
    )


__all__ = [
    "ProofReport", "RationalIdentity", "Piece", "certificate_identity", "annihilation_identity", "check_exact",
    "check_random", "verify_rigorous", "verify_probabilistic", "verify_multisum", "verify",
    "SingularSpecialization", "EvidenceReport", "semi_rigorous_solvability", "CertificateBundle", "serialize",
    "deserialize", "CertificateFileError", "VersionError", "compose", "sample_point", "error_bound",
]
