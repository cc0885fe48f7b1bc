import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wzproof.certify import semi_rigorous_solvability, verify_probabilistic
from wzproof.expr import parse
from wzproof.hyper import to_hyper_term
from wzproof.pricing import PROVED, SEMI, UNPRICED, Cost, PriceTag, compose, estimate_cost, exponent_of
from wzproof.recurrence import prove_identity
from wzproof.telescope import build_linear_system, find_recurrence

DIXON = "(-1)^k*binomial(2*n, n + k)^3"


def term(s):
    return to_hyper_term(parse(s), "n", ["k"])


def test_compose_examples():
    a, b = Cost(3, 1, 1, 2), Cost(5, 2, 3, 4)
    p = compose(PriceTag.proved(a), PriceTag.proved(b))
    assert p.rigor == PROVED and p.cost == Cost(8, 3, 4, 6)
    p = compose(PriceTag.proved(), PriceTag.semi(17))
    assert p.rigor == SEMI and p.confidence_exponent == 17
    assert compose(PriceTag.semi(40), PriceTag.semi(40)).confidence_exponent == 39
    assert compose(PriceTag.semi(40), PriceTag.semi(10)).confidence_exponent == 9
    assert compose(PriceTag.unpriced(), PriceTag.proved()).rigor == UNPRICED


def test_exponent_of():
    assert exponent_of(Fraction(1, 2 ** 40)) == 40
    assert exponent_of(Fraction(2, 2 ** 40)) == 39
    assert exponent_of(Fraction(3, 2 ** 40)) == 38
    assert exponent_of(Fraction(1)) == 0
    assert exponent_of(Fraction(5, 2)) == 0
    with pytest.raises(ValueError):
        exponent_of(Fraction(0))


def test_cost_counters_nonnegative():
    with pytest.raises(ValueError):
        Cost(mults=-1)
    with pytest.raises(ValueError):
        PriceTag.semi()


costs = st.builds(Cost, *[st.integers(0, 10 ** 6)] * 4)
prices = st.one_of(
    st.builds(PriceTag.proved, costs),
    st.builds(lambda e, c: PriceTag.semi(e, c), st.integers(0, 200), costs),
    st.builds(PriceTag.unpriced, costs),
)


@given(prices, prices, prices)
def test_compose_associative(p, q, r):
    left, right = compose(compose(p, q), r), compose(p, compose(q, r))
    assert left.rigor == right.rigor and left.error_bound == right.error_bound
    assert left.cost.counters() == right.cost.counters()


@given(prices, prices)
def test_compose_commutative_and_additive(p, q):
    pq, qp = compose(p, q), compose(q, p)
    assert pq.rigor == qp.rigor and pq.confidence_exponent == qp.confidence_exponent
    for k, v in pq.cost.counters().items():
        assert v == p.cost.counters()[k] + q.cost.counters()[k]
        assert v >= p.cost.counters()[k]


def test_compose_rigor_table():
    tags = [PriceTag.proved(), PriceTag.semi(5), PriceTag.unpriced()]
    order = {PROVED: 0, SEMI: 1, UNPRICED: 2}
    for p, q in itertools.product(tags, repeat=2):
        assert order[compose(p, q).rigor] == max(order[p.rigor], order[q.rigor])


def test_json_round_trip():
    for p in (PriceTag.proved(Cost(1, 2, 3, 4)), PriceTag.semi(12, Cost(1)), PriceTag.unpriced()):
        back = PriceTag.from_json(p.to_json())
        assert back.rigor == p.rigor and back.confidence_exponent == p.confidence_exponent
    assert PriceTag.proved().to_json()["confidence_exponent"] == "inf"
    assert PriceTag.proved().confidence_exponent == math.inf


def test_estimate_matches_system():
    F = term(DIXON)
    est = estimate_cost(F, 1)
    system = build_linear_system(F, 1)
    assert (est.unknowns, est.equations) == (system.unknowns, system.equations)
    assert est.estimate and est.equations >= est.unknowns


@pytest.mark.parametrize("s", ["binomial(n, k)", DIXON, "binomial(n, k)^2*binomial(n + k, k)"])
def test_estimate_increases(s):
    F = term(s)
    ests = [estimate_cost(F, L).predicted_ops for L in range(4)]
    assert all(a < b for a, b in zip(ests, ests[1:]))


def test_estimate_is_not_solvability():
    F = term("binomial(n, k)")
    assert estimate_cost(F, 0).predicted_ops > 0
    assert find_recurrence(F).recurrence.order == 1


def test_dixon_semi_is_cheaper():
    rig = prove_identity(f"sum(k, -n, n, {DIXON}) = product_form")
    F = term(DIXON)
    evidence = semi_rigorous_solvability(F, 1, [1, 2, 3, 4, 5])
    prob = verify_probabilistic(find_recurrence(F), trials=20, seed=0)
    semi = compose(PriceTag.unpriced(evidence.cost), prob.price)
    assert semi.cost.strictly_below(rig.price.cost)
    assert semi.cost.counters() == (evidence.cost + prob.price.cost).counters()
