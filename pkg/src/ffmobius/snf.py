"""Smith normal form over the integers with transformation matrices.

Small dense matrices only (group presentations with a handful of
generators), so the classic pivoting algorithm with exact Python ints is
plenty.  Returns (D, U, V) with U A V = D, U and V unimodular, and the
diagonal of D nonnegative with d_1 | d_2 | ...
"""

from __future__ import annotations

__all__ = ["smith_normal_form"]


def smith_normal_form(A):
    A = [[int(x) for x in row] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, c):  # row i += c * row j
        for t in range(n):
            A[i][t] += c * A[j][t]
        for t in range(m):
            U[i][t] += c * U[j][t]

    def col_op(i, j, c):  # col i += c * col j
        for t in range(m):
            A[t][i] += c * A[t][j]
        for t in range(n):
            V[t][i] += c * V[t][j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for t in range(m):
            A[t][i], A[t][j] = A[t][j], A[t][i]
        for t in range(n):
            V[t][i], V[t][j] = V[t][j], V[t][i]

    def row_negate(i):
        for t in range(n):
            A[i][t] = -A[i][t]
        for t in range(m):
            U[i][t] = -U[i][t]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (
                        pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])
                    ):
                        pivot = (i, j)
            if pivot is None:
                return A, U, V  # remaining block is zero
            if pivot[0] != t:
                row_swap(t, pivot[0])
            if pivot[1] != t:
                col_swap(t, pivot[1])
            if A[t][t] < 0:
                row_negate(t)
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, -(A[i][t] // A[t][t]))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, -(A[t][j] // A[t][t]))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, 1)  # drags non-divisible entries into row t
    return A, U, V
