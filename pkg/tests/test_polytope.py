import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from shady import linalg as la
from shady.polytope import (JOHN_T, DegenerateInput, builtin, cyclic_order, enclosing_constants,
                            facets_from_vertices, norm_point, random_symmetric_polytope, read_polytope,
                            to_obj, transform, write_polytope)


def float_hull(points):
    pts = np.array([[float(x) for x in p] for p in points])
    hull = ConvexHull(pts)
    # merge coplanar simplices: one normal per distinct facet plane, scaled to offset 1
    normals = {tuple(np.round(-eq[:3] / eq[3], 9)) for eq in hull.equations}
    return sorted(set(hull.vertices)), normals


@pytest.mark.parametrize("name", ["I", "J", "cube", "octahedron"])
def test_builtins_match_scipy(name):
    C = builtin(name)
    _, normals = float_hull(C.vertices)
    assert len(normals) == len(C.normals)
    mine = {tuple(np.round([float(x) for x in h], 9)) for h in C.normals}
    assert mine == normals


@pytest.mark.parametrize("seed", range(15))
def test_random_hull_matches_scipy(seed):
    C = random_symmetric_polytope(random.Random(seed), n_half=6, min_vertices=4)
    for h, f in zip(C.normals, C.facets):
        vals = [la.dot(h, v) for v in C.vertices]
        assert max(vals) == 1 and {i for i, x in enumerate(vals) if x == 1} == set(f)
    _, normals = float_hull(C.vertices)
    assert {tuple(np.round([float(x) for x in h], 9)) for h in C.normals} == normals


def test_interior_points_are_dropped():
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (Fraction(1, 5), Fraction(1, 5), 0)]
    C = facets_from_vertices(pts + [la.neg(la.vec(p)) for p in pts])
    assert len(C.vertices) == 6 and len(C.normals) == 8


def test_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        facets_from_vertices([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)])   # flat
    with pytest.raises(DegenerateInput):
        facets_from_vertices([(1, 0, 0), (0, 1, 0), (0, 0, 1)])                # not symmetric


def test_I_structure_and_constants():
    I = builtin("I")
    assert len(I.vertices) == 12 and len(I.normals) == 20
    assert all(len(f) == 3 for f in I.facets)
    e = enclosing_constants(I)
    assert e.R_sq == Fraction(137, 100)
    assert e.r_sq == Fraction(27, 100)
    assert e.C_sq == Fraction(137, 27)
    assert e.C_upper ** 2 >= e.C_sq


def test_J_is_linear_image_of_I():
    I, J = builtin("I"), builtin("J")
    assert set(J.vertices) == {la.matvec(la.mat(JOHN_T), v) for v in I.vertices}
    e = enclosing_constants(J)
    assert e.C_sq <= Fraction(961, 400) and e.C_upper <= Fraction(31, 20)


def test_half_sets_are_canonical():
    C = builtin("I")
    assert len(C.half_vertices) == 6 and len(C.half_normals) == 10
    for v in C.half_vertices:
        assert next(x for x in v if x) > 0


def test_norm_point_is_gauge():
    cube = builtin("cube")
    assert norm_point(cube, (Fraction(1, 2), -3, 0)) == 3


def test_transform_normals():
    C = builtin("octahedron")
    T = la.mat([[2, 0, 0], [0, 1, 1], [0, 0, 3]])
    D = transform(C, T)
    for h, f in zip(D.normals, D.facets):
        assert all(la.dot(h, D.vertices[i]) == 1 for i in f)


def test_file_round_trip(tmp_path):
    C = builtin("J")
    write_polytope(C, tmp_path / "j.txt")
    D = read_polytope(tmp_path / "j.txt")
    assert D.vertices == C.vertices and D.normals == C.normals


def test_obj_export():
    text = to_obj(builtin("cube"))
    assert text.count("\nv ") + text.startswith("v ") >= 8 and "f " in text


def test_cyclic_order_is_convex_polygon():
    cube = builtin("cube")
    h = cube.normals[0]
    ring = cyclic_order(cube.facet_vertices(0), h)
    for a, b, c in zip(ring, ring[1:] + ring[:1], ring[2:] + ring[:2]):
        assert la.dot(h, la.cross(la.sub(b, a), la.sub(c, b))) > 0
