import gzip
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from shady import linalg as la
from shady.acceptance import SAMPLE_LINE
from shady.farkas import (INV_SQRT2_UPPER, BoundFails, FarkasCertificate, ParseError, build_grid, certificate_problem,
                          facet_points, farkas_matrix, format_certificate, generate_certificate, global_lower_bound,
                          parse_certificate, read_certificates, relative_projection_lp, row_index,
                          verify_certificate, write_certificates)
from shady.polytope import builtin, random_symmetric_polytope
from shady.projections import operator_norm, projection_from_kernel_image

A84 = Fraction(84, 83)
W_SAMPLE = (Fraction(1), Fraction(-39, 40), Fraction(-164, 175))


def lambda_highs(C, w):
    """Float oracle: min over u with w.u = 1 of max_{h,v} h.v - (w.v)(h.u)."""
    wf = np.array([float(x) for x in w])
    A, b = [], []
    for v in C.half_vertices:
        vf = np.array([float(x) for x in v])
        for h in C.normals:
            hf = np.array([float(x) for x in h])
            A.append(np.r_[-(wf @ vf) * hf, -1.0])
            b.append(-(hf @ vf))
    res = linprog([0, 0, 0, 1], A_ub=A, b_ub=b, A_eq=[np.r_[wf, 0]], b_eq=[1], bounds=[(None, None)] * 4)
    return res.fun


def test_row_count_and_order():
    J = builtin("J")
    fm = farkas_matrix(J, W_SAMPLE, A84)
    assert len(fm.rows) == len(J.half_vertices) * len(J.normals) == 120
    v, h = J.half_vertices[2], J.normals[7]
    r = fm.rows[row_index(J, 2, 7) - 1]
    assert r == tuple((la.dot(h, v) - A84) * wi - la.dot(W_SAMPLE, v) * hi for wi, hi in zip(W_SAMPLE, h))


def test_sample_line_parses():
    cert = parse_certificate(SAMPLE_LINE)
    assert cert.w == W_SAMPLE
    assert cert.support == (40, 57, 115)
    assert cert.y_values[0] == Fraction(43084159464618720881, 5777554117512961187)
    assert all(y.denominator == 5777554117512961187 for y in cert.y_values)
    assert format_certificate(cert) == SAMPLE_LINE


def test_sample_direction_regenerates_published_values():
    J = builtin("J")
    mine = generate_certificate(J, W_SAMPLE, A84)
    assert verify_certificate(J, mine)
    assert sorted(mine.y_values) == sorted(parse_certificate(SAMPLE_LINE).y_values)


def test_tampered_certificate_fails():
    J = builtin("J")
    c = generate_certificate(J, W_SAMPLE, A84)
    bad = FarkasCertificate(c.w, c.support, (c.y_values[0] + Fraction(1, 10**9),) + c.y_values[1:], A84)
    assert not verify_certificate(J, bad)
    assert "A^T y" in certificate_problem(J, bad)
    assert not verify_certificate(J, FarkasCertificate(c.w, c.support, c.y_values, Fraction(101, 100)))
    assert certificate_problem(J, FarkasCertificate(c.w, (0, 1, 2), c.y_values, A84)) == "row index out of range"


@pytest.mark.parametrize("seed", range(12))
def test_lambda_matches_float_oracle(seed):
    rng = random.Random(seed)
    C = random_symmetric_polytope(rng, rng.randint(4, 6), min_vertices=8)
    w = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
    if not any(w):
        return
    lam, u = relative_projection_lp(C, w)
    assert abs(float(lam) - lambda_highs(C, w)) < 1e-7
    # the minimiser is an actual projection attaining lambda
    assert operator_norm(C, projection_from_kernel_image(u, w).P) == lam


@pytest.mark.parametrize("seed", range(12))
def test_certificate_iff_lambda_above(seed):
    rng = random.Random(100 + seed)
    C = random_symmetric_polytope(rng, rng.randint(4, 6), min_vertices=8)
    w = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
    if not any(w):
        return
    lam, _ = relative_projection_lp(C, w)
    for a in (Fraction(1), Fraction(101, 100), lam, lam - Fraction(1, 10**6)):
        try:
            cert = generate_certificate(C, w, a)
            assert lam > a and verify_certificate(C, cert) and len(cert.support) <= 3
        except BoundFails as exc:
            assert lam <= a and exc.lam == lam


def test_exact_fallback_agrees():
    J = builtin("J")
    c = generate_certificate(J, W_SAMPLE, A84, warm_start=False)
    assert verify_certificate(J, c)


def test_cube_boundary_has_no_certificate():
    cube = builtin("cube")
    with pytest.raises(BoundFails) as err:
        generate_certificate(cube, (0, 0, 1), 1)
    assert err.value.lam == 1
    assert verify_certificate(cube, generate_certificate(cube, (0, 0, 1), Fraction(1, 2)))


@pytest.mark.parametrize("n", [1, 2, 5, 25])
def test_grid_size(n):
    g = build_grid(n)
    m = 2 * n + 1
    assert len(g.points) == 3 * m * m - 3 * m + 1
    assert all(len(facet_points(n, i)) == m * m for i in range(3))


def test_grid_density():
    n = 4
    g = build_grid(n)
    P = np.array([[float(x) for x in p] for p in g.points])
    P /= np.linalg.norm(P, axis=1)[:, None]
    rng = np.random.default_rng(1)
    U = rng.normal(size=(3000, 3))
    U /= np.linalg.norm(U, axis=1)[:, None]
    # rays of +-grid points
    d2 = np.minimum(((U[:, None, :] - P[None]) ** 2).sum(-1), ((U[:, None, :] + P[None]) ** 2).sum(-1)).min(1)
    assert d2.max() <= float(g.eps_sq) + 1e-12


def test_global_bound():
    b = global_lower_bound(A84, 1400, Fraction(31, 20))
    assert b >= Fraction(101, 100)
    eps = INV_SQRT2_UPPER / 1400
    assert b == A84 / (1 + eps * (Fraction(31, 20) + Fraction(961, 400)))
    assert INV_SQRT2_UPPER ** 2 >= Fraction(1, 2) and float(INV_SQRT2_UPPER) >= 1 / math.sqrt(2)
    with pytest.raises(ValueError):
        global_lower_bound(A84, 1400, Fraction(31, 20), Fraction(7071, 10**4))


def test_parse_errors():
    with pytest.raises(ParseError) as err:
        parse_certificate("1//1;2//1", lineno=7)
    assert err.value.lineno == 7
    with pytest.raises(ParseError):
        parse_certificate("1;0;0;5;0;0;1//2;0//1;1//3")


def test_padding():
    c = FarkasCertificate((Fraction(1), Fraction(0), Fraction(0)), (4,), (Fraction(2, 3),))
    line = format_certificate(c)
    assert line == "1//1;0//1;0//1;4;0;0;2//3;0//1;0//1"
    assert parse_certificate(line) == c


@pytest.mark.parametrize("suffix", [".csv", ".csv.gz"])
def test_file_round_trip(tmp_path, suffix):
    J = builtin("J")
    certs = [generate_certificate(J, w, A84) for w in facet_points(1, 0)]
    path = tmp_path / ("c" + suffix)
    write_certificates(certs, path)
    text = (gzip.open(path, "rt") if suffix.endswith("gz") else open(path)).read()
    assert text == "".join(format_certificate(c) + "\n" for c in certs)
    back = read_certificates(path, A84)
    assert [format_certificate(c) for c in back] == [format_certificate(c) for c in certs]
    assert all(verify_certificate(J, c) for c in back)
