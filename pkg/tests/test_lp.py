import random
from fractions import Fraction

import pytest
from scipy.optimize import linprog

from shady.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, simplex


def random_lp(rng, m, n):
    A = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)] for _ in range(m)]
    x0 = [Fraction(rng.randint(0, 3)) for _ in range(n)]   # keeps the problem feasible
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [Fraction(rng.randint(0, 6)) for _ in range(n)]    # nonnegative costs: bounded below by 0
    return c, A, b


@pytest.mark.parametrize("seed", range(40))
def test_matches_highs(seed):
    rng = random.Random(seed)
    c, A, b = random_lp(rng, rng.randint(1, 4), rng.randint(2, 7))
    res = simplex(c, A, b)
    ref = linprog([float(x) for x in c], A_eq=[[float(x) for x in r] for r in A],
                  b_eq=[float(x) for x in b], bounds=(0, None), method="highs")
    assert res.status == OPTIMAL and ref.status == 0
    assert abs(float(res.value) - ref.fun) < 1e-7
    x = res.x
    assert all(xi >= 0 for xi in x)
    assert all(sum(a * xi for a, xi in zip(row, x)) == bi for row, bi in zip(A, b))
    # dual feasibility: c - A^T pi >= 0 and strong duality, exactly
    pi = res.duals
    red = [c[j] - sum(A[i][j] * pi[i] for i in range(len(A))) for j in range(len(c))]
    assert all(r >= 0 for r in red)
    assert sum(p * bi for p, bi in zip(pi, b)) == res.value


def test_infeasible():
    assert simplex([0, 0], [[1, 1]], [-1]).status == INFEASIBLE


def test_unbounded():
    assert simplex([-1, 0], [[1, -1]], [0]).status == UNBOUNDED


def test_redundant_rows():
    res = simplex([1, 1], [[1, 1], [2, 2]], [2, 4])
    assert res.status == OPTIMAL and res.value == 2


def test_degenerate_cycling_example():
    # Beale's example in equality form; Bland's rule must terminate
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6, 0, 0, 0]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9, 1, 0, 0],
         [Fraction(1, 2), -90, Fraction(-1, 50), 3, 0, 1, 0],
         [0, 0, 1, 0, 0, 0, 1]]
    res = simplex(c, A, [0, 0, 1])
    assert res.status == OPTIMAL and res.value == Fraction(-1, 20)


def test_phase_one_only_returns_feasible_point():
    res = simplex([5, 5], [[1, 2]], [4], phase_one_only=True)
    assert res.status == OPTIMAL and res.x[0] + 2 * res.x[1] == 4
