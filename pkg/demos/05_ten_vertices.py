"""Polytopes with at most 10 vertices always admit a norm-one rank-2 projection.

A centrally symmetric triangulation of the boundary with 10 vertices has 24
edges, which forces a 4-cycle v, w, -v, -w.  The plane span{v, w} together
with a kernel line cut out by two supporting planes gives the projection.
"""

import random

from shady.polytope import random_symmetric_polytope
from shady.projections import operator_norm
from shady.rational import format_vector
from shady.shadiness import find_symmetric_4cycle, norm_one_projection, triangulate_symmetric

rng = random.Random(0)
C = random_symmetric_polytope(rng, n_half=5, min_vertices=10)
print(C)
T = triangulate_symmetric(C)
print(f"triangulation: V={len(T.verts)} E={len(T.edges)} F={len(T.triangles)} chi={T.euler_characteristic()}")

cyc = find_symmetric_4cycle(T)
print("4-cycle through", format_vector(cyc.v), "and", format_vector(cyc.w))
W = norm_one_projection(C)
for row in W.P.P:
    print("  ", format_vector(row))
print("norm", operator_norm(C, W.P.P))

norms = [operator_norm(D, norm_one_projection(D).P.P)
         for D in (random_symmetric_polytope(rng, 5, min_vertices=10) for _ in range(25))]
print("25 more draws, all norm one:", all(x == 1 for x in norms))
