"""Exact rational simplex for small equality-form linear programs.

Solves ``minimize c.x  s.t.  A x = b, x >= 0`` with a dense two-phase
tableau and Bland's rule, so it terminates on degenerate problems.  Intended
for the few-row problems that appear per direction (3 or 4 rows, a few
hundred columns).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple = ()
    value: Fraction | None = None
    duals: tuple = ()        # pi with c - A^T pi >= 0 at optimality
    basis: tuple = ()        # column indices of basic variables


class _Tableau:
    def __init__(self, rows, basis):
        self.rows = rows      # list of lists, last entry is rhs
        self.basis = basis    # basic column per row

    def pivot(self, r: int, c: int, cost: list | None = None) -> None:
        rows = self.rows
        prow = rows[r]
        inv = 1 / prow[c]
        prow = [x * inv if x else x for x in prow]
        rows[r] = prow
        nz = [(j, x) for j, x in enumerate(prow) if x]
        for i, row in enumerate(rows):
            if i != r:
                f = row[c]
                if f:
                    for j, x in nz:
                        row[j] -= f * x
        if cost is not None:
            f = cost[c]
            if f:
                for j, x in nz:
                    cost[j] -= f * x
        self.basis[r] = c


def _ratio_row(tab: _Tableau, c: int) -> int | None:
    best = None
    for i, row in enumerate(tab.rows):
        a = row[c]
        if a > 0:
            ratio = row[-1] / a
            if best is None or ratio < best[0] or (ratio == best[0] and tab.basis[i] < tab.basis[best[1]]):
                best = (ratio, i)
    return None if best is None else best[1]


def _run(tab: _Tableau, cost: list, allowed: int) -> bool:
    """Bland iterations on ``cost`` (reduced costs, last entry = -objective).

    Only columns ``< allowed`` may enter.  Returns False when unbounded.
    """
    while True:
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return True
        r = _ratio_row(tab, enter)
        if r is None:
            return False
        tab.pivot(r, enter, cost)


def simplex(c: Sequence, A: Sequence[Sequence], b: Sequence, phase_one_only: bool = False) -> LPResult:
    """Exact two-phase simplex.  With ``phase_one_only`` stops at the first feasible basis."""
    A = [list(map(Fraction, row)) for row in A]
    b = list(map(Fraction, b))
    c = list(map(Fraction, c))
    m = len(A)
    n = len(A[0]) if m else len(c)
    rows = []
    for i in range(m):
        sgn = -1 if b[i] < 0 else 1
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows.append([sgn * x for x in A[i]] + art + [sgn * b[i]])
    tab = _Tableau(rows, [n + i for i in range(m)])

    # phase one: minimise the sum of artificials
    cost = [Fraction(0)] * (n + m + 1)
    for j in range(n + m + 1):
        if j < n or j == n + m:
            cost[j] = -sum((row[j] for row in rows), Fraction(0))
    _run(tab, cost, n)
    if -cost[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                continue
            tab.pivot(i, col)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    if not phase_one_only:
        cost = c + [Fraction(0)] * m + [Fraction(0)]
        for i, bj in enumerate(tab.basis):
            f = cost[bj]
            if f:
                row = tab.rows[i]
                for j in range(n + m + 1):
                    if row[j]:
                        cost[j] -= f * row[j]
        if not _run(tab, cost, n):
            return LPResult(UNBOUNDED)

    x = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis):
        x[bj] = tab.rows[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))

    # duals from B^T pi = c_B on the kept (non-redundant) rows
    duals: tuple = ()
    if not phase_one_only and tab.basis:
        B = tuple(tuple(A[r][bj] for bj in tab.basis) for r in keep)
        pi_kept = la.solve_linear(la.transpose(B), [c[bj] for bj in tab.basis])
        pi = [Fraction(0)] * m
        for r, val in zip(keep, pi_kept):
            pi[r] = val
        duals = tuple(pi)
    return LPResult(OPTIMAL, tuple(x), value, duals, tuple(tab.basis))
