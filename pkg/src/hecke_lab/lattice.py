"""Integer-lattice utilities for quotient enumeration.

The matrix family reduces modulo sublattices A*Z^d.  A column-style Hermite
normal form H (lower triangular, positive diagonal, H*Z^d = A*Z^d) turns the
quotient Z^d / A*Z^d into the box  prod_i [0, h_ii),  which gives canonical
representatives and an exact count equal to |det A|.
"""

from __future__ import annotations

import math
from fractions import Fraction


def int_det(mat) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [
        [sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)]
        for i in range(n)
    ]


def mat_vec(a, v):
    n = len(v)
    out = []
    for i in range(len(a)):
        row = a[i]
        acc = None
        for k in range(n):
            if row[k]:
                term = row[k] * v[k]
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else 0 * v[0])
    return tuple(out)


def mat_pow(a, e: int):
    n = len(a)
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [row[:] for row in a]
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def mat_inv(a):
    """Exact inverse of an integer (or rational) matrix, as Fractions."""
    n = len(a)
    aug = [
        [Fraction(a[i][j]) for j in range(n)]
        + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def hermite_normal_form(mat):
    """Column HNF of a nonsingular integer matrix.

    Returns H, lower triangular with positive diagonal, whose columns span
    the same lattice as the columns of `mat`.
    """
    h = [list(map(int, row)) for row in mat]
    n = len(h)
    for i in range(n):
        # Clear row i to the right of the pivot with gcd column steps.
        for j in range(i + 1, n):
            while h[i][j] != 0:
                if h[i][i] == 0:
                    for r in range(n):
                        h[r][i], h[r][j] = h[r][j], h[r][i]
                    continue
                q = h[i][j] // h[i][i]
                for r in range(n):
                    h[r][j] -= q * h[r][i]
                if h[i][j] != 0:
                    for r in range(n):
                        h[r][i], h[r][j] = h[r][j], h[r][i]
        if h[i][i] == 0:
            raise ZeroDivisionError("matrix is singular")
        if h[i][i] < 0:
            for r in range(n):
                h[r][i] = -h[r][i]
    return h


def hnf_reduce(h, v):
    """Canonical representative of a rational vector modulo the HNF lattice.

    Subtracts integer multiples of the columns of `h` top row first, landing
    coordinate i in [0, h[i][i]).  Exact on Fractions.
    """
    x = [Fraction(c) for c in v]
    n = len(x)
    for i in range(n):
        q = math.floor(x[i] / h[i][i])
        if q:
            for r in range(i, n):
                if h[r][i]:
                    x[r] -= q * h[r][i]
    return tuple(x)


def hnf_box_count(h) -> int:
    out = 1
    for i in range(len(h)):
        out *= h[i][i]
    return out


def iter_hnf_box(h):
    """Canonical integer representatives of Z^d modulo the HNF lattice.

    Yields exactly hnf_box_count(h) vectors.  Box vectors are fixed points
    of hnf_reduce: the reduction loop walks coordinates top-down and each
    quotient against the positive diagonal vanishes on [0, h_ii).
    """
    n = len(h)
    diag = [h[i][i] for i in range(n)]

    def rec(i, prefix):
        if i == n:
            yield tuple(prefix)
            return
        for c in range(diag[i]):
            yield from rec(i + 1, prefix + [c])

    yield from rec(0, [])
