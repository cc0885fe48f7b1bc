import json
import random

import pytest

from wzproof.arith import Poly, RatFunc, Ring
from wzproof.certify import (CertificateFileError, PROVED, REFUTED, INCONCLUSIVE, SingularSpecialization,
                             VersionError, deserialize, error_bound, semi_rigorous_solvability, serialize,
                             verify_multisum, verify_probabilistic, verify_rigorous)
from wzproof.expr import parse
from wzproof.hyper import to_hyper_term
from wzproof.pricing import SEMI
from wzproof.recurrence import prove_identity, verify_bundle
from wzproof.telescope import Certificate, Recurrence, find_recurrence, wz_pair

DIXON = "(-1)^k*binomial(2*n, n + k)^3"


def term(s, inner=("k",)):
    return to_hyper_term(parse(s), "n", list(inner))


@pytest.fixture(scope="module")
def dixon():
    return find_recurrence(term(DIXON))


def bump_numerator(c, delta=1):
    R = c.R[0]
    m = max(R.num.terms)
    terms = dict(R.num.terms)
    terms[m] += delta
    return Certificate(c.term, c.recurrence, [RatFunc._raw(Poly(R.ring, terms), R.den)], provenance="supplied")


def test_dixon_rigorous(dixon):
    r = verify_rigorous(dixon)
    assert r.verdict == PROVED and r.price.confidence_exponent == float("inf")
    bad = verify_rigorous(bump_numerator(dixon))
    assert bad.verdict == REFUTED
    assert set(bad.witness) == {"monomial", "coefficient"}


def test_zero_certificate_refuted():
    F = term("binomial(n, k)/2^n")
    c = wz_pair(F)
    zero = Certificate(F, c.recurrence, [RatFunc(F.ring.zero)], provenance="supplied")
    assert verify_rigorous(zero).verdict == REFUTED
    assert verify_probabilistic(zero, 5, 1).verdict == REFUTED


def test_probabilistic(dixon):
    r = verify_probabilistic(dixon, 20, 42)
    assert r.verdict == PROVED and r.price.rigor == SEMI
    assert len(r.details["points"]) == 20
    again = verify_probabilistic(dixon, 20, 42)
    assert again.summary() == r.summary()
    other = verify_probabilistic(dixon, 20, 43)
    assert other.details["points"] != r.details["points"]


def test_one_sidedness(dixon):
    for seed in range(10):
        assert verify_probabilistic(dixon, 3, seed).verdict == PROVED


def test_error_bound_exponent(dixon):
    r = verify_probabilistic(dixon, 20, 0)
    D = r.details["degree"] + r.details["guard_degree"]
    assert r.price.error_bound == error_bound(D, 20)
    assert r.price.confidence_exponent >= 20 * (31 - D.bit_length())


def test_mutations_agree(dixon):
    rng = random.Random(5)
    for _ in range(25):
        c = bump_numerator(dixon, rng.choice([-3, -1, 1, 2]))
        assert verify_rigorous(c).verdict == REFUTED
        assert verify_probabilistic(c, 5, rng.randrange(1000)).verdict == REFUTED


def product_construction():
    f = term("binomial(n, k)/2^n")
    w = wz_pair(f)
    F = term("binomial(n, j)*binomial(n, k)/4^n", ("j", "k"))
    ring = F.ring
    R = w.R[0]
    Rj = RatFunc(R.num.to_ring(ring).substitute("k", ring.gen("j")), R.den.to_ring(ring).substitute("k", ring.gen("j")))
    s_k = f.quotient("n").to_ring(ring)  # f(n+1,k)/f(n,k)
    R1 = Rj * s_k
    R2 = R.to_ring(ring)
    rec = Recurrence(tuple(c for c in w.recurrence.coeffs))
    return F, rec, R1, R2


def test_multisum_product_construction():
    F, rec, R1, R2 = product_construction()
    assert verify_multisum(F, rec, [R1, R2]).verdict == PROVED
    assert verify_multisum(F, rec, [R1, R2], mode="probabilistic", trials=10, seed=3).verdict == PROVED
    assert verify_multisum(F, rec, [R1, RatFunc(F.ring.zero)]).verdict == REFUTED


def test_multisum_single_sum_consistency(dixon):
    a = verify_multisum(dixon.term, dixon.recurrence, dixon.R)
    b = verify_rigorous(dixon)
    assert (a.verdict, a.details) == (b.verdict, b.details)
    with pytest.raises(ValueError):
        verify_multisum(dixon.term, dixon.recurrence, dixon.R * 2)


def test_semi_rigorous_solvability():
    F = term(DIXON)
    ev = semi_rigorous_solvability(F, 1, [3, 5, 8, 13, 21])
    assert ev.verdict == "positive" and all(ev.solvable)
    ev = semi_rigorous_solvability(term("binomial(n, k)/3^n"), 1, [3, 5, 8], unit=True)
    assert ev.verdict == "negative"
    assert semi_rigorous_solvability(F, 1, []).verdict == INCONCLUSIVE
    assert ev.price.confidence_exponent is None


def test_singular_specialization():
    # the common denominator of the shift quotients carries a factor n + 2
    F = term("binomial(n, k)/(n + 1)")
    with pytest.raises(SingularSpecialization) as info:
        semi_rigorous_solvability(F, 1, [3, -2])
    assert info.value.value == -2
    assert semi_rigorous_solvability(F, 1, [3, 4]).verdict == "positive"


@pytest.fixture(scope="module")
def dixon_bundle():
    r = prove_identity(f"sum(k, -n, n, {DIXON}) = product_form")
    return r.bundle


def test_roundtrip(dixon_bundle):
    text = serialize(dixon_bundle)
    b = deserialize(text)
    assert serialize(b) == text
    assert list(json.loads(text)) == ["version", "identity", "sum_vars", "outer_var", "params", "order", "coeffs",
                                      "certificates", "initial_values", "price", "seed", "trials"]
    assert verify_bundle(b).verdict == PROVED


def test_tampered_coeffs(dixon_bundle):
    data = json.loads(serialize(dixon_bundle))
    data["coeffs"][0] = "-27*n^2 - 27*n - 7"
    b = deserialize(json.dumps(data))
    assert verify_bundle(b).verdict == REFUTED


def test_tampered_initial_value(dixon_bundle):
    data = json.loads(serialize(dixon_bundle))
    data["initial_values"][1] = "7/1"
    assert verify_bundle(deserialize(json.dumps(data))).verdict == REFUTED


def test_rejects_bad_files(dixon_bundle):
    data = json.loads(serialize(dixon_bundle))
    with pytest.raises(VersionError):
        deserialize(json.dumps({**data, "version": 2}))
    with pytest.raises(CertificateFileError):
        deserialize(json.dumps({**data, "extra": 1}))
    missing = dict(data)
    del missing["seed"]
    with pytest.raises(CertificateFileError):
        deserialize(json.dumps(missing))
    with pytest.raises(CertificateFileError):
        deserialize(json.dumps({**data, "coeffs": ["n +* 1", "n"]}))
    with pytest.raises(CertificateFileError):
        deserialize("not json")
