import random
from fractions import Fraction

import numpy as np
import pytest

from shady import linalg as la
from shady.polytope import builtin, random_symmetric_polytope
from shady.projections import is_projection, operator_norm
from shady.shadiness import (covers_all_planes, covers_all_planes_lp, crossed_pairs, faces_met, find_symmetric_4cycle,
                             general_position, norm_one_projection, plane_refuted, simple_shady_test,
                             triangulate_symmetric, uncovered_plane)


def test_builtin_verdicts():
    assert simple_shady_test(builtin("I"))
    assert simple_shady_test(builtin("J"))
    assert not simple_shady_test(builtin("cube"))
    assert not simple_shady_test(builtin("octahedron"))


def test_I_has_planes_meeting_only_two_facet_pairs():
    I = builtin("I")
    n = uncovered_plane(I)
    assert n is not None and crossed_pairs(I, n) == 2
    on_plane = [v for v in I.vertices if la.dot(n, v) == 0]
    assert len(on_plane) == 4
    assert not covers_all_planes(I)
    assert covers_all_planes(I, need=2)
    # yet no norm-one projection has this plane as its image
    assert plane_refuted(I, n)


def test_crossing_count_by_sampling():
    # float oracle: count facet pairs hit by sampled planes, never below the exact minimum
    I = builtin("I")
    rng = np.random.default_rng(0)
    for n in rng.normal(size=(200, 3)):
        nq = tuple(Fraction(x).limit_denominator(1000) for x in n)
        assert crossed_pairs(I, nq) >= 2


def test_lp_cross_check_on_small_polytopes():
    for C in (builtin("cube"), builtin("octahedron")):
        assert covers_all_planes(C) == covers_all_planes_lp(C) is False
    rng = random.Random(3)
    for _ in range(3):
        C = random_symmetric_polytope(rng, 3, min_vertices=6)
        for need in (2, 3):
            assert covers_all_planes(C, need) == covers_all_planes_lp(C, need)


def test_general_position():
    assert not general_position([(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert general_position([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])


def test_faces_met_by_coordinate_plane_of_cube():
    cube = builtin("cube")
    faces = faces_met(cube, (0, 0, 1))
    assert sum(len(g) == 1 for g in faces) == 4      # four side facets
    assert sum(len(g) == 2 for g in faces) == 4      # four vertical edges


@pytest.mark.parametrize("seed", range(25))
def test_test_is_sound_on_non_shady_polytopes(seed):
    # every polytope with at most 10 vertices has a norm-one projection
    C = random_symmetric_polytope(random.Random(seed), 5, min_vertices=6)
    assert not simple_shady_test(C)
    assert operator_norm(C, norm_one_projection(C).P.P) == 1


@pytest.mark.parametrize("name", ["cube", "octahedron", "I", "J"])
def test_triangulation_counts(name):
    T = triangulate_symmetric(builtin(name))
    E, F = len(T.edges), len(T.triangles)
    assert T.euler_characteristic() == 2 and 2 * E == 3 * F
    assert {tuple(sorted(T.verts.index(la.neg(T.verts[i])) for i in t)) for t in T.triangles} == set(T.triangles)


def test_cube_and_octahedron_triangulations():
    assert (len(triangulate_symmetric(builtin("cube")).edges), len(triangulate_symmetric(builtin("cube")).triangles)) == (18, 12)
    assert (len(triangulate_symmetric(builtin("octahedron")).edges), len(triangulate_symmetric(builtin("octahedron")).triangles)) == (12, 8)


@pytest.mark.parametrize("seed", range(20))
def test_norm_one_projection_random(seed):
    C = random_symmetric_polytope(random.Random(1000 + seed), 5, min_vertices=10)
    T = triangulate_symmetric(C)
    assert len(T.verts) == 10 and len(T.edges) == 24
    cyc = find_symmetric_4cycle(T)
    W = norm_one_projection(C)
    P = W.P.P
    assert is_projection(P, 2) and W.bound == 1 == operator_norm(C, P)
    # image is span{v, w}
    for x in (cyc.v, cyc.w):
        assert la.matvec(P, x) == x
    # float oracle for the norm
    H = np.array([[float(a) for a in h] for h in C.normals])
    V = np.array([[float(a) for a in v] for v in C.vertices])
    Pf = np.array([[float(a) for a in r] for r in P])
    assert abs((H @ Pf @ V.T).max() - 1) < 1e-9


@pytest.mark.parametrize("name", ["cube", "octahedron"])
def test_norm_one_projection_builtins(name):
    C = builtin(name)
    assert operator_norm(C, norm_one_projection(C).P.P) == 1
