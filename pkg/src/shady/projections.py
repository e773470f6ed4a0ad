"""Projections and their operator norms with respect to polytopal norms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .polytope import Polytope
from .rational import format_vector, parse_vector, sqrt_upper


class DegeneratePair(ValueError):
    """Kernel direction lies in the image hyperplane."""


@dataclass(frozen=True)
class ProjectionMatrix:
    P: tuple
    rank: int

    def __post_init__(self):
        if not is_projection(self.P, self.rank):
            raise ValueError("matrix is not a projection of the stated rank")


@dataclass(frozen=True)
class ShadinessWitness:
    """A projection together with its exact norm, an upper bound on ``s_k``."""

    P: ProjectionMatrix
    bound: Fraction
    polytope_id: str
    h: tuple = ()
    v: tuple = ()


# The rank-2 projection found for I by global optimisation, as printed.
P_REF = la.mat([
    [Fraction(82602121, 79729122), Fraction(54836807, 79729122), Fraction(-722323, 13288187)],
    [Fraction(-4217717, 79729122), Fraction(-774259, 79729122), Fraction(1060409, 13288187)],
    [Fraction(695635, 39864561), Fraction(13277555, 39864561), Fraction(12938397, 13288187)],
])
P_REF_NORM = Fraction(14386149522, 14205071903)


def projection_from_kernel_image(u: Sequence, w: Sequence) -> ProjectionMatrix:
    """The projection ``x -> x - (w.x / w.u) u`` with kernel ``span{u}`` and image ``w^perp``."""
    u, w = la.vec(u), la.vec(w)
    wu = la.dot(w, u)
    if wu == 0:
        raise DegeneratePair("w.u == 0: kernel and image intersect")
    d = len(u)
    P = tuple(tuple((1 if i == j else 0) - u[i] * w[j] / wu for j in range(d)) for i in range(d))
    return ProjectionMatrix(tuple(tuple(Fraction(x) for x in r) for r in P), d - 1)


def operator_norm(C: Polytope, A: Sequence[Sequence], with_witness: bool = False):
    """``max_{h in H, v in V'} h^T A v``, the exact operator norm of ``A`` w.r.t. ``C``.

    With ``with_witness`` returns ``(value, h, v)`` for the first maximising pair
    in canonical order.
    """
    A = la.mat(A)
    best = None
    for v in C.half_vertices:
        Av = la.matvec(A, v)
        for h in C.normals:
            s = la.dot(h, Av)
            if best is None or s > best[0]:
                best = (s, h, v)
    return best if with_witness else best[0]


def is_projection(P: Sequence[Sequence], k: int) -> bool:
    P = la.mat(P)
    n, m = la.shape(P)
    if n != m:
        return False
    return la.matmul(P, P) == P and la.trace(P) == k


def witness(C: Polytope, P: Sequence[Sequence], k: int | None = None) -> ShadinessWitness:
    P = la.mat(P)
    k = int(la.trace(P)) if k is None else k
    value, h, v = operator_norm(C, P, with_witness=True)
    return ShadinessWitness(ProjectionMatrix(P, k), value, C.name, h, v)


def grunbaum_upper_bound(k: int, max_den: int = 10**6) -> Fraction:
    """Rational upper bound on ``(2/(k+1)) (1 + ((k-1)/2) sqrt(k+2))``.

    Every rank-k projection constant is bounded by this value, so it serves as
    a sanity cap on computed bounds.  The square root is rounded up with
    denominator at most ``max_den`` (error below ``1/max_den``).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    root = sqrt_upper(k + 2, max_den)
    return Fraction(2, k + 1) * (1 + Fraction(k - 1, 2) * root)


def left_null_vector(P: Sequence[Sequence]) -> tuple:
    """A nonzero ``w`` with ``w^T P = 0`` for a rank ``d-1`` matrix (image is ``w^perp``)."""
    Pt = la.transpose(la.mat(P))
    M, pivots = la._row_reduce(Pt)
    d = len(Pt)
    free = [c for c in range(d) if c not in pivots]
    if len(free) != 1:
        raise ValueError("matrix does not have corank one")
    f = free[0]
    w = [Fraction(0)] * d
    w[f] = Fraction(1)
    for r, c in enumerate(pivots):
        w[c] = -M[r][f]
    return tuple(w)


def read_matrix(path) -> tuple:
    rows = [parse_vector(line) for line in Path(path).read_text().splitlines() if line.strip()]
    return la.mat(rows)


def write_matrix(A, path) -> None:
    Path(path).write_text("".join(format_vector(r) + "\n" for r in A))
