"""Qualitative shadiness: a sufficient test for shady 3-polytopes and the
explicit norm-one rank-2 projection for polytopes with at most 10 vertices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cmp_to_key
from fractions import Fraction
from itertools import combinations, product

from . import linalg as la
from .lp import OPTIMAL, simplex
from .polytope import Polytope, cyclic_order
from .projections import ProjectionMatrix, ShadinessWitness, operator_norm


class NoCycleFound(RuntimeError):
    pass


class DegenerateKernel(ArithmeticError):
    pass


# Sufficient test for shadiness in dimension d-1

def general_position(normals) -> bool:
    """Every 3 of the given vectors are linearly independent."""
    return all(la.det3(t) != 0 for t in combinations([la.vec(h) for h in normals], 3))


def facet_pairs(C: Polytope) -> list[tuple]:
    """One facet per antipodal pair: the vertex lists of facets whose normal is in ``half_normals``."""
    return [C.facet_vertices(C.normal_index(h)) for h in C.half_normals]


def crossed_pairs(C: Polytope, n) -> int:
    """Number of antipodal facet pairs whose relative interiors meet the plane ``n^perp``."""
    count = 0
    for verts in facet_pairs(C):
        signs = {(s > 0) - (s < 0) for s in (la.dot(n, v) for v in verts)}
        if 1 in signs and -1 in signs:
            count += 1
    return count


def uncovered_plane(C: Polytope, need: int | None = None):
    """A normal ``n`` whose plane meets fewer than ``need`` facet pairs, or None.

    The planes missing a fixed collection of facets form a closed polyhedral
    cone cut out by constraints ``+-n.v >= 0`` over the facets' vertices.  Any
    nonzero such cone has an extreme ray or a lineality line, which in R^3 is
    spanned by ``v_i x v_j`` for two of those vertices.  Scanning all cross
    products of vertex pairs therefore finds a bad plane whenever one exists.
    """
    need = C.dim if need is None else need
    seen = set()
    for a, b in combinations(C.half_vertices, 2):
        n = la.cross(a, b)
        if not any(n):
            continue
        key = min(n, la.neg(n))
        if key in seen:
            continue
        seen.add(key)
        if crossed_pairs(C, n) < need:
            return n
    return None


def covers_all_planes(C: Polytope, need: int | None = None) -> bool:
    """Every plane through the origin meets the relative interiors of at least ``need`` (default d) facet pairs."""
    return uncovered_plane(C, need) is None


def _cone_is_trivial(constraints) -> bool:
    # {n : c.n >= 0 for all c} == {0}  iff  no point with n.(+-e_i) = 1
    d = len(constraints[0])
    for i, s in product(range(d), (1, -1)):
        # variables n = n+ - n-, slacks t >= 0 with c.n - t = 0, and s n_i = 1
        A, b = [], []
        for c in constraints:
            A.append(list(c) + [-x for x in c] + [0] * len(constraints))
            b.append(0)
        for k in range(len(constraints)):
            A[k][2 * d + k] = -1
        row = [0] * (2 * d + len(constraints))
        row[i], row[d + i] = s, -s
        A.append(row)
        b.append(1)
        res = simplex([0] * len(A[0]), A, b, phase_one_only=True)
        if res.status == OPTIMAL:
            return False
    return True


def covers_all_planes_lp(C: Polytope, need: int | None = None) -> bool:
    """The same decision by brute force over facet subsets, sign patterns and LP probes.

    Exponential in the number of facet pairs; meant for cross-checking on
    small polytopes.
    """
    need = C.dim if need is None else need
    pairs = facet_pairs(C)
    m = len(pairs)
    if m < need:
        return False
    for S in combinations(range(m), m - need + 1):
        for signs in product((1, -1), repeat=len(S)):
            cons = [la.scale(s, v) for idx, s in zip(S, signs) for v in pairs[idx]]
            if not _cone_is_trivial(cons):
                return False
    return True


def polytope_edges(C: Polytope) -> list[tuple[int, int]]:
    """Vertex index pairs spanning an edge (shared by at least two facets)."""
    count: dict = defaultdict(int)
    for f in C.facets:
        for i, j in combinations(f, 2):
            count[(i, j)] += 1
    return sorted(e for e, c in count.items()
                  if c >= 2 and la.rank(tuple(C.normals[k] for k, f in enumerate(C.facets)
                                              if e[0] in f and e[1] in f)) == 2)


def _arrangement_rays(C: Polytope) -> list[tuple]:
    rays = {}
    for a, b in combinations(C.half_vertices, 2):
        n = la.cross(a, b)
        if any(n):
            rays[min(n, la.neg(n))] = None
    return list(rays)


def _arc_midpoints(C: Polytope) -> list[tuple]:
    """One interior point of every open arc of the arrangement of planes ``v^perp``."""
    out = []
    for v in C.half_vertices:
        rays = []
        for b in C.half_vertices:
            n = la.cross(v, b)
            if any(n):
                rays += [n, la.neg(n)]
        if not rays:
            continue
        e1 = rays[0]
        e2 = la.cross(v, e1)

        def half(r):
            x, y = la.dot(r, e1), la.dot(r, e2)
            return 0 if (y > 0 or (y == 0 and x > 0)) else 1

        def key_cmp(r, s):
            hr, hs = half(r), half(s)
            if hr != hs:
                return hr - hs
            o = la.dot(v, la.cross(r, s))
            return -1 if o > 0 else (1 if o < 0 else 0)

        uniq = []
        for r in sorted(rays, key=cmp_to_key(key_cmp)):
            if not uniq or key_cmp(uniq[-1], r) != 0:
                uniq.append(r)
        for r, s in zip(uniq, uniq[1:] + uniq[:1]):
            m = la.add(r, s)
            if not any(m) or la.dot(v, la.cross(r, s)) == 0:
                m = la.cross(v, r)  # antipodal neighbours: take the perpendicular
            out.append(m)
    return out


def _cone_meets_plane(generators, plane_normal) -> bool:
    # closed pointed cone spanned by generators meets the plane outside 0
    vals = [la.dot(plane_normal, g) for g in generators]
    return any(x == 0 for x in vals) or (any(x > 0 for x in vals) and any(x < 0 for x in vals))


def faces_met(C: Polytope, n) -> list[tuple]:
    """Normal-cone generators of every face whose relative interior meets ``n^perp``."""
    s = [la.dot(n, v) for v in C.vertices]
    out = []
    for i, f in enumerate(C.facets):
        signs = {(s[j] > 0) - (s[j] < 0) for j in f}
        if 1 in signs and -1 in signs:
            out.append((C.normals[i],))
    for i, j in polytope_edges(C):
        if s[i] * s[j] < 0 or (s[i] == 0 and s[j] == 0):
            out.append(tuple(C.normals[k] for k, f in enumerate(C.facets) if i in f and j in f))
    for i, v in enumerate(C.vertices):
        if s[i] == 0:
            out.append(tuple(C.normals[k] for k, f in enumerate(C.facets) if i in f))
    return out


def plane_refuted(C: Polytope, n) -> bool:
    """True if no plane ``W`` pairs with ``U = n^perp`` to give a norm-one projection.

    Only decides planes meeting at least two facet pairs with independent
    normals: those force ``W``, and every face met by ``U`` must then have
    a supporting normal in ``W``.  Anything else is reported as not refuted.
    """
    crossed = [h for h, verts in zip(C.half_normals, facet_pairs(C))
               if len({(x > 0) - (x < 0) for x in (la.dot(n, v) for v in verts)} & {1, -1}) == 2]
    if len(crossed) >= 3 and general_position(crossed):
        return True
    if len(crossed) != 2:
        return False
    w_normal = la.cross(*crossed)
    if not any(w_normal):
        return False
    return not all(_cone_meets_plane(gens, w_normal) for gens in faces_met(C, n))


def simple_shady_test(C: Polytope) -> bool:
    """Sufficient condition: True proves ``C`` is shady in dimension 2.

    Requires the half normals in general position.  Planes meeting at least
    three facet pairs are then impossible images of norm-one projections.
    Planes meeting fewer form a union of cells of the arrangement of planes
    ``v^perp``; if that union is a finite set of lines each is checked with
    :func:`plane_refuted`, otherwise the test gives up (returns False).
    """
    if C.dim != 3 or not general_position(C.half_normals):
        return False
    if any(crossed_pairs(C, m) < 3 for m in _arc_midpoints(C)):
        return False
    return all(plane_refuted(C, n) for n in _arrangement_rays(C) if crossed_pairs(C, n) < 3)


# Symmetric triangulation and norm-one projections

@dataclass(frozen=True)
class SymmetricTriangulation:
    verts: tuple
    edges: tuple       # sorted index pairs (i < j)
    triangles: tuple   # sorted index triples
    polytope: Polytope

    def neighbors(self) -> dict:
        nb = defaultdict(set)
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def euler_characteristic(self) -> int:
        return len(self.verts) - len(self.edges) + len(self.triangles)


@dataclass(frozen=True)
class FourCycle:
    v: tuple
    w: tuple


def triangulate_symmetric(C: Polytope) -> SymmetricTriangulation:
    """Fan-triangulate each facet from its smallest vertex and mirror onto the opposite facet."""
    index = {v: i for i, v in enumerate(C.vertices)}
    tris = set()
    for h in C.half_normals:
        ring = cyclic_order(C.facet_vertices(C.normal_index(h)), h)
        v0 = ring[0]
        for a, b in zip(ring[1:], ring[2:]):
            for sgn in (1, -1):
                t = [index[la.scale(sgn, p)] for p in (v0, a, b)]
                tris.add(tuple(sorted(t)))
    edges = set()
    for t in tris:
        for i, j in combinations(t, 2):
            edges.add((i, j))
    return SymmetricTriangulation(C.vertices, tuple(sorted(edges)), tuple(sorted(tris)), C)


def find_symmetric_4cycle(T: SymmetricTriangulation) -> FourCycle:
    """Vertices ``v, w`` such that ``v, w, -v, -w`` is a cycle of the triangulation graph.

    Scans vertices by descending degree (ties: lexicographic) and, for each,
    the smallest neighbour ``w`` whose antipode is also a neighbour.
    """
    nb = T.neighbors()
    index = {v: i for i, v in enumerate(T.verts)}
    anti = {i: index[la.neg(v)] for i, v in enumerate(T.verts)}
    order = sorted(range(len(T.verts)), key=lambda i: (-len(nb[i]), T.verts[i]))
    for i in order:
        for j in sorted(nb[i], key=lambda j: T.verts[j]):
            if anti[j] in nb[i] and j != anti[i]:
                return FourCycle(T.verts[i], T.verts[j])
    if len(T.verts) <= 10:
        raise AssertionError("a symmetric 4-cycle must exist for at most 10 vertices")
    raise NoCycleFound(f"no symmetric 4-cycle among {len(T.verts)} vertices (more than 10)")


def _facet_normal_through(C: Polytope, a, b):
    # a facet containing both a and b: exists since a-b is a triangulation edge
    for h in C.normals:
        if la.dot(h, a) == 1 and la.dot(h, b) == 1:
            return h
    raise ValueError("points do not share a facet")


def norm_one_projection(C: Polytope) -> ShadinessWitness:
    """Rank-2 projection of norm exactly 1 built from a symmetric 4-cycle.

    Image ``span{v, w}``; kernel the line ``f^perp cap g^perp`` for facet
    normals ``f``, ``g`` through the edges ``(v, w)`` and ``(v, -w)``.
    """
    cyc = find_symmetric_4cycle(triangulate_symmetric(C))
    v, w = cyc.v, cyc.w
    f = _facet_normal_through(C, v, w)
    g = _facet_normal_through(C, v, la.neg(w))
    k = la.cross(f, g)
    if not any(k):
        raise DegenerateKernel("the two supporting planes are parallel")
    nrm = la.cross(v, w)
    nk = la.dot(nrm, k)
    if nk == 0:
        raise DegenerateKernel("kernel direction lies in the image plane")
    P = tuple(tuple((1 if i == j else 0) - k[i] * nrm[j] / nk for j in range(3)) for i in range(3))
    P = tuple(tuple(Fraction(x) for x in r) for r in P)
    value, h, vv = operator_norm(C, P, with_witness=True)
    return ShadinessWitness(ProjectionMatrix(P, 2), value, C.name, h, vv)
