from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from wzproof.arith import Ring
from wzproof.linsolve import determinant, gauss_jordan, integer_rows, nullspace_vector

@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda m: st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m),
                                                        min_size=m, max_size=m)))
def test_determinant_matches_numpy(M):
    assert determinant(M) == round(np.linalg.det(np.array(M, dtype=float)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(2, 6), st.data())
def test_nullspace_vector(m, ncols, data):
    rows = [data.draw(st.lists(st.integers(-5, 5), min_size=ncols, max_size=ncols)) for _ in range(m)]
    special = [ncols - 1]
    v = nullspace_vector([list(r) for r in rows], special)
    A = np.array(rows, dtype=object)
    if v is not None:
        assert v[-1] != 0
        assert all(x == 0 for x in A.dot(np.array(v, dtype=object)))
    else:
        # then every null vector has zero last coordinate: adding e_last as a row keeps the rank
        rank = np.linalg.matrix_rank(np.array(rows, dtype=float))
        e = [0] * (ncols - 1) + [1]
        assert np.linalg.matrix_rank(np.array(rows + [e], dtype=float)) == rank


def test_integer_rows():
    assert integer_rows([[Fraction(1, 2), Fraction(1, 3)], [2, 4]]) == [[3, 2], [1, 2]]


def test_gauss_jordan_pivots():
    rows = [[2, 4, 6], [1, 2, 4]]
    pivots, d = gauss_jordan(rows)
    assert [c for _, c in pivots] == [0, 2]


def test_polynomial_nullspace():
    R = Ring(("n",))
    n = R.gen("n")
    rows = [[n + 1, -R.one, R.zero]]
    v = nullspace_vector(rows, [1])
    assert v is not None and v[1] != R.zero
    assert (n + 1) * v[0] - v[1] == R.zero
