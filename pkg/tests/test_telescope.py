from fractions import Fraction

import pytest

from wzproof.arith import Poly, PoleError, RatFunc, Ring
from wzproof.expr import parse
from wzproof.hyper import to_hyper_term
from wzproof.recurrence import direct_sum
from wzproof.telescope import (NoWZPair, NotProper, OrderBoundExceeded, Recurrence, build_linear_system,
                               find_recurrence, residual, wz_pair)

DIXON = "(-1)^k*binomial(2*n, n + k)^3"
CORPUS = [
    "binomial(n, k)",
    "binomial(n, k)^2",
    DIXON,
    "binomial(n, k)*a^k*b^(n - k)",
    "binomial(n, k)^3",
    "binomial(n, k)^2*binomial(n + k, k)^2",
    "(-1)^k*binomial(n, k)*binomial(2*k, k)",
]


def term(s):
    return to_hyper_term(parse(s), "n", ["k"])


def rec_of(*coeffs, params=()):
    ring = Ring(("n",), params)
    return Recurrence.normalized([Poly.parse(c, ring) for c in coeffs])


@pytest.fixture(scope="module")
def certs():
    return {s: find_recurrence(term(s)) for s in CORPUS}


def test_known_recurrences(certs):
    assert certs["binomial(n, k)"].recurrence == rec_of("2", "-1")
    assert certs["binomial(n, k)^2"].recurrence == rec_of("-2*(2*n + 1)", "n + 1")
    assert certs[DIXON].recurrence == rec_of("-3*(3*n + 1)*(3*n + 2)", "(n + 1)^2")
    assert certs["binomial(n, k)*a^k*b^(n - k)"].recurrence == rec_of("a + b", "-1", params=("a", "b"))
    assert certs["binomial(n, k)^3"].recurrence.order == 2


@pytest.mark.parametrize("s", CORPUS)
def test_certified_telescoping(certs, s):
    c = certs[s]
    assert residual(c.term, c.recurrence.coeffs, c.R).is_zero()
    assert c.recurrence.is_normalized()


@pytest.mark.parametrize("s", [x for x in CORPUS if "a^k" not in x])
def test_grid_validation(certs, s):
    c = certs[s]
    F, R = c.term, c.R[0]
    L = c.recurrence.order
    for n in range(13):
        lo, hi = F.support_box({"n": n})["k"]
        for k in range(lo, hi + 1):
            try:
                g1 = R.evaluate({"n": n, "k": k + 1}) * F.evaluate({"n": n, "k": k + 1})
                g0 = R.evaluate({"n": n, "k": k}) * F.evaluate({"n": n, "k": k})
            except PoleError:
                continue
            lhs = sum(p.evaluate({"n": n}) * F.evaluate({"n": n + i, "k": k}) for i, p in enumerate(c.recurrence.coeffs))
            assert lhs == g1 - g0, (n, k)


@pytest.mark.parametrize("s", [x for x in CORPUS if "a^k" not in x])
def test_oracle_annihilation(certs, s):
    c = certs[s]
    F = c.term
    L = c.recurrence.order
    g = [direct_sum(F, n) for n in range(21 + L)]
    for n in range(21):
        assert c.recurrence.apply(g[n:n + L + 1], n) == 0


@pytest.mark.parametrize("s", CORPUS)
def test_minimality_as_searched(certs, s):
    c = certs[s]
    log = c.degree_meta["search_log"]
    L = c.recurrence.order
    assert [row[0] for row in log] == list(range(L + 1))
    assert all(not row[3] for row in log[:-1]) and log[-1][3]


def test_system_examples():
    s = build_linear_system(term(DIXON), 1)
    assert s.equations >= s.unknowns
    again = build_linear_system(term(DIXON), 1)
    assert (s.unknowns, s.equations) == (again.unknowns, again.equations)
    from wzproof.telescope import solve_linear_system
    assert solve_linear_system(build_linear_system(term("binomial(n, k)"), 1)) is not None
    assert solve_linear_system(build_linear_system(term("binomial(n, k)"), 0)) is None


def test_errors():
    with pytest.raises(NotProper):
        find_recurrence(term("binomial(n, k)/(k^2 + 1)"))
    with pytest.raises(OrderBoundExceeded) as info:
        find_recurrence(term("binomial(n, k)"), L_max=0)
    assert info.value.log == [(0, info.value.log[0][1], info.value.log[0][2], False)]


def test_wz_pairs():
    c = wz_pair(term("binomial(n, k)/2^n"))
    assert residual(c.term, c.recurrence.coeffs, c.R).is_zero()
    assert c.recurrence == rec_of("-1", "1")
    with pytest.raises(NoWZPair):
        wz_pair(term("binomial(n, k)/3^n"))
    c = wz_pair(term("binomial(n, k)*a^k*b^(n - k)/(a + b)^n"))
    assert residual(c.term, c.recurrence.coeffs, c.R).is_zero()


def test_symbolic_sum_values():
    F = term("binomial(n, k)*a^k*b^(n - k)")
    assert direct_sum(F, 3, point={"a": 2, "b": 5}) == 7 ** 3
