from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wzproof import qcorpus as qc
from wzproof.arith import RatFunc


@pytest.mark.parametrize("n", range(9))
def test_identity7(n):
    assert qc.check_identity7(n)


def test_identity7_small_sides():
    lhs, rhs = qc.identity7_sides(1)
    assert lhs == rhs
    # 1/(1-q) + q/(1-q)
    assert lhs == RatFunc.parse("(1 + q)/(1 - q)", qc.QRING)


def test_identity7_perturbed():
    assert not qc.check_identity7(3, perturb=qc.qpow(2))
    assert not qc.check_identity7(0, perturb=1)


@pytest.mark.parametrize("n", range(5))
def test_identity8(n):
    assert qc.check_identity8(n)


def test_identity8_wrong_h_fails():
    bad = lambda m: qc.h_ratio(m) * (1 + qc.qpow(m)) if m == 1 else qc.h_ratio(m)
    assert not qc.check_identity8(2, h=bad)


def test_limits():
    assert qc.check_rr_limit(30)
    assert qc.check_jacobi_limit(30)


def test_series_examples():
    assert qc.series_for("rr", 10) == [1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6]
    assert qc.series_for("jacobi", 5) == [1, 8, 24, 32, 24, 48]
    with pytest.raises(ValueError):
        qc.series_for("nope", 3)


def test_bad_arguments():
    with pytest.raises(ValueError):
        qc.q_pochhammer(-1)
    with pytest.raises(ValueError):
        qc.check_rr_limit(0)
    with pytest.raises(ValueError):
        qc.QSeries([1], -1)


def test_pochhammer_step():
    for r in range(21):
        assert qc.q_pochhammer(r + 1) == qc.q_pochhammer(r) * (1 - qc.qpow(r + 1))


@pytest.mark.parametrize("m", range(21))
def test_jacobi_against_lattice(m):
    assert qc.r4_divisor(m) == qc.r4_lattice(m)


def test_rr_oracles_agree():
    assert qc.rr_oracle(25) == qc.rr_gap_oracle(25)


def _truncated_product(a, b, T):
    full = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            full[i + j] += x * y
    return full[: T + 1] + [0] * max(0, T + 1 - len(full))


coeffs = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=5), min_size=1, max_size=12)


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs, st.integers(0, 10))
def test_series_product(a, b, T):
    prod = qc.QSeries(a, T) * qc.QSeries(b, T)
    assert prod.coeffs == [Fraction(x) for x in _truncated_product(a[: T + 1], b[: T + 1], T)]


@settings(max_examples=40, deadline=None)
@given(coeffs, st.integers(0, 10))
def test_series_inverse(a, T):
    a = [Fraction(1)] + a
    s = qc.QSeries(a, T)
    assert s * s.inverse() == qc.QSeries.monomial(0, T)


def test_series_mismatched_orders():
    with pytest.raises(ValueError):
        qc.QSeries([1], 3) + qc.QSeries([1], 4)
    with pytest.raises(ZeroDivisionError):
        qc.QSeries([0, 1], 3).inverse()


def test_count_partitions():
    assert [qc.count_partitions(m, lambda p: True) for m in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    # distinct parts
    assert [qc.count_partitions(m, lambda p: True, min_gap=1) for m in range(8)] == [1, 1, 1, 2, 2, 3, 4, 5]
