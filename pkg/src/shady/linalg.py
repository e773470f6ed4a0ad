"""Dense exact linear algebra over the rationals.

Vectors are tuples of Fractions and matrices are tuples of row tuples.  All
functions are pure and return fresh immutable values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .rational import as_fraction

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]


class SingularMatrix(ArithmeticError):
    pass


class NotPositiveDefinite(ArithmeticError):
    """A pivot <= 0 was met during LDL factorisation."""

    def __init__(self, index: int, pivot: Fraction):
        super().__init__(f"pivot {index} is {pivot}, matrix is not positive definite")
        self.index = index
        self.pivot = pivot


def vec(xs: Sequence) -> Vector:
    return tuple(as_fraction(x) for x in xs)


def mat(rows: Sequence[Sequence]) -> Matrix:
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple((Fraction(0),) * m for _ in range(n))


def diag(d: Sequence) -> Matrix:
    d = vec(d)
    n = len(d)
    return tuple(tuple(d[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def neg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def cross(u: Vector, v: Vector) -> Vector:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def norm_sq(u: Sequence) -> Fraction:
    return dot(u, u)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def matvec(A: Matrix, x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in A)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if shape(A)[1] != shape(B)[0]:
        raise ValueError(f"shape mismatch {shape(A)} @ {shape(B)}")
    cols = transpose(B)
    return tuple(tuple(dot(row, c) for c in cols) for row in A)


def mat_scale(c, A: Matrix) -> Matrix:
    return tuple(scale(c, row) for row in A)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(add(r, s) for r, s in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(sub(r, s) for r, s in zip(A, B))


def trace(A: Matrix) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def is_symmetric(A: Matrix) -> bool:
    n = len(A)
    return all(A[i][j] == A[j][i] for i in range(n) for j in range(i))


def det3(A: Matrix) -> Fraction:
    (a, b, c), (d, e, f), (g, h, i) = A
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _row_reduce(A: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in A]
    nrows, ncols = shape(A)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    if not A:
        return 0
    return len(_row_reduce(A)[1])


def solve_linear(A: Matrix, b: Sequence) -> Vector:
    """Exact solution of ``A x = b`` for square nonsingular ``A``."""
    n, m = shape(A)
    if n != m:
        raise ValueError("solve_linear needs a square matrix")
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    aug = tuple(tuple(row) + (as_fraction(bi),) for row, bi in zip(A, b))
    M, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is rank deficient")
    return tuple(M[i][n] for i in range(n))


def inverse(A: Matrix) -> Matrix:
    n, m = shape(A)
    if n != m:
        raise ValueError("inverse needs a square matrix")
    aug = tuple(tuple(row) + e for row, e in zip(A, identity(n)))
    M, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is rank deficient")
    return tuple(tuple(M[i][n:]) for i in range(n))


def ldl_decompose(M: Matrix) -> tuple[Matrix, Vector]:
    """Factor a symmetric positive definite ``M`` as ``L diag(D) L^T``.

    No pivoting: a non-positive pivot means ``M`` is not positive definite
    and raises :class:`NotPositiveDefinite`.
    """
    n, m = shape(M)
    if n != m or not is_symmetric(M):
        raise ValueError("ldl_decompose needs a symmetric matrix")
    L = [[Fraction(0)] * n for _ in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        Lj = L[j]
        d = M[j][j] - sum((Lj[k] * Lj[k] * D[k] for k in range(j) if Lj[k]), Fraction(0))
        if d <= 0:
            raise NotPositiveDefinite(j, d)
        D[j] = d
        Lj[j] = Fraction(1)
        # only the nonzero prefix of row j contributes
        nz = [(k, Lj[k] * D[k]) for k in range(j) if Lj[k]]
        for i in range(j + 1, n):
            Li = L[i]
            s = M[i][j] - sum((Li[k] * c for k, c in nz if Li[k]), Fraction(0))
            Li[j] = s / d
    return tuple(tuple(r) for r in L), tuple(D)
