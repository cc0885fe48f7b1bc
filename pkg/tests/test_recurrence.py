import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wzproof.arith import Poly, RatFunc, Ring
from wzproof.certify import INCONCLUSIVE, PROVED, REFUTED
from wzproof.expr import parse
from wzproof.hyper import to_hyper_term
from wzproof.recurrence import (SingularLeadingCoefficient, compose_ops, direct_sum, lclm, parse_identity_text,
                                prove_identity, solve_first_order, sum_recurrence, unroll)
from wzproof.telescope import Recurrence, find_recurrence

RN = Ring(("n",))
DIXON = "(-1)^k*binomial(2*n, n + k)^3"


def rec(*coeffs, params=()):
    ring = Ring(("n",), params)
    return Recurrence(tuple(Poly.parse(c, ring) for c in coeffs))


def term(s):
    return to_hyper_term(parse(s), "n", ["k"])


def test_direct_sum_examples():
    assert direct_sum(term(DIXON), 1) == 6
    assert direct_sum(term(DIXON), 2) == 90
    assert direct_sum(term("binomial(n, k)"), 3) == 8


def test_unroll_examples():
    assert unroll(rec("n + 1", "-1"), [1], 5).values == [1, 1, 2, 6, 24, 120]
    assert unroll(rec("-2", "1"), [1], 4).values == [1, 2, 4, 8, 16]
    w = unroll(rec("-1", "n"), [1], 4)
    assert w.singular == [0]
    assert w.values[0] == 1 and all(v is None for v in w.values[1:])


def test_unroll_reseed():
    w = unroll(rec("-1", "n"), [1], 4, reseed={1: 5})
    assert w.values == [1, 5, 5, Fraction(5, 2), Fraction(5, 6)]


def test_closed_forms():
    f = solve_first_order(rec("n + 1", "-1"), 1)
    assert f.display == "n!" and f.values(5) == [1, 1, 2, 6, 24, 120]
    f = solve_first_order(rec("-2", "1"), 1)
    assert f.display == "2^n"
    f = solve_first_order(rec("-2*(2*n + 1)", "n + 1"), 1)
    assert f.values(4) == [1, 2, 6, 20, 70]
    assert f.display == "(2n)!/(n!)^2"
    f = solve_first_order(rec("-3*(3*n + 1)*(3*n + 2)", "(n + 1)^2"), 1)
    assert f.display == "(3n)!/(n!)^3"
    f = solve_first_order(rec("-a - b", "1", params=("a", "b")), 1)
    assert f.display == "(a + b)^n"
    f = solve_first_order(rec("n + 3", "-1"), 2)
    assert f.display == "(n+2)!" and f.values(3) == [2, 6, 24, 120]
    f = solve_first_order(rec("n + 1", "1"), 1)
    assert f.display == "(-1)^n*n!"


def test_closed_form_singular():
    with pytest.raises(SingularLeadingCoefficient):
        solve_first_order(rec("-1", "n - 2"), 1)
    solve_first_order(rec("-1", "n - 2"), 1, upto=2)


def test_closed_form_fallback_is_still_exact():
    f = solve_first_order(rec("-(n^2 + 1)", "1"), 1)
    assert "prod" in f.display
    assert f.values(3) == [1, 1, 2, 10]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(1, 4), st.integers(-3, 3))
def test_first_order_unroll_matches_product(root, c, g0):
    num = Poly.parse(f"{c}*(n + {abs(root[0]) + 1})", RN)
    den = Poly.parse(f"n + {abs(root[1]) + 1}", RN)
    r = Recurrence((-num, den))
    f = solve_first_order(r, g0)
    assert f.values(8) == unroll(r, [g0], 8).values


def test_lclm():
    A, B = rec("-2", "1"), rec("-3", "1")
    M, U, V = lclm(A, B)
    assert M.order == 2
    assert compose_ops(U, [RatFunc(c) for c in A.coeffs], "n") == compose_ops(V, [RatFunc(c) for c in B.coeffs], "n")
    g = [2 ** i + 5 * 3 ** i for i in range(10)]
    assert all(M.apply(g[i:i + 3], i) == 0 for i in range(7))


@pytest.mark.parametrize("s", ["binomial(n, k)", "binomial(n, k)^2", DIXON, "binomial(n, k)^3",
                               "binomial(n, k)^2*binomial(n + k, k)^2"])
def test_oracle_agreement(s):
    F = term(s)
    c = find_recurrence(F)
    L = c.recurrence.order
    g = [direct_sum(F, n) for n in range(21)]
    w = unroll(c.recurrence, g[:L], 20)
    for n in range(21):
        if w.values[n] is not None:
            assert w.values[n] == g[n]


def test_prove_examples():
    r = prove_identity(f"sum(k, -n, n, {DIXON}) = product_form")
    assert r.verdict == PROVED and r.details["closed_form"] == "(3n)!/(n!)^3"
    assert prove_identity("sum(k, 0, n, binomial(n, k)*a^k*b^(n - k)) = (a + b)^n").verdict == PROVED
    r = prove_identity("sum(k, 0, n, binomial(n, k)^2) = binomial(2*n, n) + 1")
    assert r.verdict == REFUTED and r.witness["n"] == 0
    assert (r.witness["lhs"], r.witness["rhs"]) == ("1/1", "2/1")


def test_printed_dixon_rhs_is_refuted():
    r = prove_identity(f"sum(k, -n, n, {DIXON}) = binomial(3*n, n)")
    assert r.verdict == REFUTED and r.witness["n"] == 1


@pytest.mark.parametrize("text", [
    "sum(k, 0, n, binomial(n, k)) = 2^n",
    "sum(k, 0, n, binomial(n, k)^2) = binomial(2*n, n) + 1",
    "sum(k, 0, n, k*binomial(n, k)) = n*2^(n - 1)",
    "sum(k, 0, n, binomial(n, k)) + sum(k, 0, n, binomial(n, k)^2) = 2^n + binomial(2*n, n)",
    "sum(k, 0, n, binomial(n, k)^3) = sum(k, 0, n, binomial(n, k)^3)",
])
def test_symmetry(text):
    lhs, rhs = text.split(" = ")
    assert prove_identity(text).verdict == prove_identity(f"{rhs} = {lhs}").verdict


def test_semi_mode():
    r = prove_identity("sum(k, 0, n, binomial(n, k)) = 2^n", mode="semi", trials=10, seed=1)
    assert r.verdict == PROVED and r.price.confidence_exponent > 100
    assert r.bundle.seed == 1 and r.bundle.trials == 10


def test_inconclusive_cases():
    assert prove_identity("sum(k, 0, n, binomial(n, k)) = 2^n", L_max=0).verdict == INCONCLUSIVE
    assert prove_identity("sum(k, 0, n, binomial(n, k)^3) = product_form").verdict == INCONCLUSIVE
    # the declared range misses part of the support
    assert prove_identity("sum(k, 0, n - 1, binomial(n, k)) = 2^n - 1").verdict == INCONCLUSIVE
    assert prove_identity("sum(k, 0, n, binomial(n, k)/(k^2 + 1)) = 1").verdict in (INCONCLUSIVE, REFUTED)


def test_identity_parts():
    ident = parse_identity_text("2*sum(k, 0, n, binomial(n, k)) - sum(j, 0, n, binomial(n, j)) = 2^n")
    assert [p.sign for p in ident.lhs] == [1, -1]
    assert ident.outer == "n" and ident.params == ()


def test_sum_recurrence():
    r, certs, _ = sum_recurrence("sum(k, 0, n, binomial(n, k))")
    assert r == Recurrence.normalized([Poly.parse("2", RN), Poly.parse("-1", RN)])
    assert len(certs) == 1
