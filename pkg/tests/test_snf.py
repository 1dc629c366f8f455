import numpy as np
from hypothesis import given, settings, strategies as st

from ffmobius.snf import smith_normal_form


def int_det(M):
    """Bareiss exact determinant for small integer matrices."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )
)
def test_snf_properties(rows):
    A = rows
    n = len(A)
    D, U, V = smith_normal_form(A)
    Dm = np.array(D)
    # diagonal, nonnegative, divisibility chain
    assert np.array_equal(Dm, np.diag(np.diag(Dm)))
    diag = list(np.diag(Dm))
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0
        else:
            assert b == 0
    # U A V = D
    assert np.array_equal(np.array(U) @ np.array(A) @ np.array(V), Dm)
    # unimodular transforms
    assert abs(int_det(U)) == 1
    assert abs(int_det(V)) == 1


def test_snf_known():
    # invariant factors 2, 2, 156 (det = 624; verified independently)
    D, U, V = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert [D[i][i] for i in range(3)] == [2, 2, 156]


def test_snf_empty():
    D, U, V = smith_normal_form([])
    assert D == [] and U == [] and V == []
