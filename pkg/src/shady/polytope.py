"""Centrally symmetric convex 3-polytopes in exact arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .rational import format_vector, parse_vector, sqrt_upper


class DegenerateInput(ValueError):
    pass


def canonical_rep(v: Sequence) -> tuple:
    """The member of ``{v, -v}`` whose first nonzero coordinate is positive."""
    for x in v:
        if x > 0:
            return tuple(v)
        if x < 0:
            return la.neg(v)
    return tuple(v)


@dataclass(frozen=True)
class Polytope:
    """Centrally symmetric polytope given by vertices and facet normals.

    ``vertices`` and ``normals`` are sorted lexicographically.  ``facets[i]``
    lists the indices (into ``vertices``) of the vertices on the facet with
    normal ``normals[i]``, so that ``normals[i] . v == 1`` exactly for those
    vertices and ``< 1`` for every other vertex.
    """

    vertices: tuple
    normals: tuple
    facets: tuple
    name: str = "polytope"
    half_vertices: tuple = field(init=False)
    half_normals: tuple = field(init=False)

    def __post_init__(self):
        hv = sorted({canonical_rep(v) for v in self.vertices})
        hn = sorted({canonical_rep(h) for h in self.normals})
        object.__setattr__(self, "half_vertices", tuple(hv))
        object.__setattr__(self, "half_normals", tuple(hn))

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def facet_vertices(self, i: int) -> tuple:
        return tuple(self.vertices[j] for j in self.facets[i])

    def vertex_index(self, v) -> int:
        return self.vertices.index(tuple(v))

    def normal_index(self, h) -> int:
        return self.normals.index(tuple(h))

    def __repr__(self) -> str:
        return (f"Polytope({self.name!r}, {len(self.vertices)} vertices, "
                f"{len(self.normals)} facets)")


def facets_from_vertices(points: Sequence[Sequence], name: str = "polytope") -> Polytope:
    """Exact convex hull of a centrally symmetric point set in R^3.

    Points that are not vertices of the hull are dropped.  Every plane through
    three affinely independent points that supports the whole set is a facet
    plane; coplanar points on it are merged into one facet.
    """
    pts = sorted({la.vec(p) for p in points})
    if not pts or any(len(p) != 3 for p in pts):
        raise DegenerateInput("facets_from_vertices expects points in R^3")
    pset = set(pts)
    if any(la.neg(p) not in pset for p in pts):
        raise DegenerateInput("point set is not centrally symmetric")
    if la.rank(tuple(pts)) < 3:
        raise DegenerateInput("points do not span R^3")

    normals: dict[tuple, frozenset] = {}
    # planes through the origin never support a symmetric set with interior origin
    for a, b, c in combinations(pts, 3):
        M = (a, b, c)
        if la.det3(M) == 0:
            continue
        h = la.solve_linear(M, (1, 1, 1))
        if h in normals:
            continue
        on = []
        ok = True
        for p in pts:
            s = la.dot(h, p)
            if s > 1:
                ok = False
                break
            if s == 1:
                on.append(p)
        if ok:
            normals[h] = frozenset(on)
            normals[la.neg(h)] = frozenset(la.neg(p) for p in on)

    # a point is a vertex iff the normals of the facets through it span R^3
    through: dict[tuple, list] = {}
    for h, on in normals.items():
        for p in on:
            through.setdefault(p, []).append(h)
    verts = sorted(p for p, hs in through.items() if la.rank(tuple(hs)) == 3)
    vset = set(verts)
    normals = {h: frozenset(p for p in on if p in vset) for h, on in normals.items()}
    H = sorted(normals)
    index = {v: i for i, v in enumerate(verts)}
    facets = tuple(tuple(sorted(index[p] for p in normals[h])) for h in H)
    return Polytope(tuple(verts), tuple(H), facets, name=name)


def norm_point(C: Polytope, x: Sequence) -> Fraction:
    """Gauge ``||x||_C = max_h h.x`` (the maximum is >= 0 because H = -H)."""
    return max(la.dot(h, x) for h in C.normals)


@dataclass(frozen=True)
class EnclosingConstants:
    r_sq: Fraction
    R_sq: Fraction
    C_sq: Fraction
    C_upper: Fraction


def enclosing_constants(C: Polytope, max_den: int = 10**6) -> EnclosingConstants:
    """Squared in/out-radii, their ratio, and a rational upper bound on ``sqrt(C_sq)``."""
    r_sq = min(1 / la.norm_sq(h) for h in C.normals)
    R_sq = max(la.norm_sq(v) for v in C.vertices)
    C_sq = R_sq / r_sq
    return EnclosingConstants(r_sq, R_sq, C_sq, sqrt_upper(C_sq, max_den))


def transform(C: Polytope, T: la.Matrix, name: str | None = None) -> Polytope:
    """Image ``T C``; normals map by ``T^{-T}``, facets keep their vertex sets."""
    T = la.mat(T)
    Tinv_t = la.transpose(la.inverse(T))
    verts = [la.matvec(T, v) for v in C.vertices]
    order = sorted(range(len(verts)), key=lambda i: verts[i])
    new_index = {old: new for new, old in enumerate(order)}
    normals = [la.matvec(Tinv_t, h) for h in C.normals]
    horder = sorted(range(len(normals)), key=lambda i: normals[i])
    facets = tuple(tuple(sorted(new_index[j] for j in C.facets[i])) for i in horder)
    return Polytope(tuple(verts[i] for i in order), tuple(normals[i] for i in horder),
                    facets, name=name or f"T*{C.name}")


# Built-in bodies

ICOSAHEDRON_PARAMS = (Fraction(-3, 5), Fraction(-1, 5), Fraction(1, 10))

JOHN_T = la.mat([
    [Fraction(11, 10), Fraction(11, 10), Fraction(11, 10)],
    [Fraction(7, 10), Fraction(1, 5), Fraction(-9, 10)],
    [Fraction(3, 5), Fraction(-9, 10), Fraction(3, 10)],
])


def icosahedron_half_vertices() -> list[tuple]:
    a, b, c = ICOSAHEDRON_PARAMS
    one = Fraction(1)
    return [(one, a, c), (one, b, c), (c, one, a), (c, one, b), (a, c, one), (b, c, one)]


def make_icosahedron_I() -> Polytope:
    half = icosahedron_half_vertices()
    return facets_from_vertices(half + [la.neg(v) for v in half], name="I")


def make_john_J() -> Polytope:
    return transform(make_icosahedron_I(), JOHN_T, name="J")


def make_cube() -> Polytope:
    pts = [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
    return facets_from_vertices(pts, name="cube")


def make_octahedron() -> Polytope:
    pts = []
    for i in range(3):
        for s in (1, -1):
            e = [0, 0, 0]
            e[i] = s
            pts.append(e)
    return facets_from_vertices(pts, name="octahedron")


BUILTINS = {
    "I": make_icosahedron_I,
    "J": make_john_J,
    "cube": make_cube,
    "octahedron": make_octahedron,
}


def builtin(name: str) -> Polytope:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin polytope {name!r}; choose from {sorted(BUILTINS)}") from None


def random_symmetric_polytope(rng, n_half: int = 5, max_den: int = 64,
                              min_vertices: int | None = None, max_tries: int = 1000) -> Polytope:
    """Hull of ``n_half`` random rational points in [-1, 1]^3 and their antipodes.

    Coordinates are ``k/den`` with ``den`` drawn from ``1..max_den``.  Draws
    whose hull has fewer than ``min_vertices`` vertices (default ``2*n_half``)
    are rejected.
    """
    need = 2 * n_half if min_vertices is None else min_vertices
    for _ in range(max_tries):
        pts = []
        for _ in range(n_half):
            p = []
            for _ in range(3):
                den = rng.randint(1, max_den)
                p.append(Fraction(rng.randint(-den, den), den))
            pts.append(tuple(p))
        cloud = pts + [la.neg(p) for p in pts]
        try:
            C = facets_from_vertices(cloud, name="random")
        except DegenerateInput:
            continue
        if len(C.vertices) >= need:
            return C
    raise RuntimeError("could not draw a polytope with enough vertices")


# Text I/O: one vertex per line, ';'-separated a//b rationals

def read_polytope(path, name: str | None = None) -> Polytope:
    pts = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            pts.append(parse_vector(line))
    return facets_from_vertices(pts, name=name or Path(path).stem)


def write_polytope(C: Polytope, path) -> None:
    Path(path).write_text("".join(format_vector(v) + "\n" for v in C.vertices))


def to_obj(C: Polytope) -> str:
    """Wavefront OBJ text of the boundary (float coordinates, facets as ordered polygons)."""
    lines = [f"# {C.name}"]
    for v in C.vertices:
        lines.append("v " + " ".join(repr(float(x)) for x in v))
    for i, h in enumerate(C.normals):
        ring = cyclic_order(C.facet_vertices(i), h)
        lines.append("f " + " ".join(str(C.vertex_index(v) + 1) for v in ring))
    return "\n".join(lines) + "\n"


def cyclic_order(points: Sequence[tuple], normal: Sequence) -> list[tuple]:
    """Vertices of a convex facet ordered counter-clockwise seen from outside.

    Starts at the lexicographically smallest vertex; since it is a vertex of
    the polygon, all others lie in a half-plane around it and can be sorted by
    exact orientation tests.
    """
    from functools import cmp_to_key

    pts = sorted(points)
    v0 = pts[0]

    def orient(a, b):
        return la.dot(normal, la.cross(la.sub(a, v0), la.sub(b, v0)))

    rest = sorted(pts[1:], key=cmp_to_key(lambda a, b: -1 if orient(a, b) > 0 else (1 if orient(a, b) < 0 else 0)))
    return [v0] + rest
