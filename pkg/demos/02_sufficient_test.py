"""Why the 12-vertex polytope is shady while the cube is not.

Every plane through the origin meets several antipodal facet pairs.  When a
plane meets three pairs with independent normals, no norm-one projection can
map onto it.  For I a few planes only meet two pairs; those are handled by
checking that the remaining faces they touch cannot be supported from the
forced complementary plane.
"""

from shady.polytope import builtin
from shady.rational import format_vector
from shady.shadiness import (covers_all_planes, crossed_pairs, plane_refuted, simple_shady_test,
                             uncovered_plane)

for name in ("I", "J", "cube", "octahedron"):
    C = builtin(name)
    print(f"{name:11s} simple test: {'SHADY' if simple_shady_test(C) else 'UNKNOWN'}")

I = builtin("I")
n = uncovered_plane(I)
print("\nevery plane meets >= 3 facet pairs?", covers_all_planes(I))
print("special plane normal", format_vector(n), "meets", crossed_pairs(I, n), "pairs")
print("  vertices on it:", [format_vector(v) for v in I.vertices if sum(a * b for a, b in zip(n, v)) == 0])
print("  ruled out as the image of a norm-one projection:", plane_refuted(I, n))

cube = builtin("cube")
n = uncovered_plane(cube)
print("\ncube plane", format_vector(n), "meets", crossed_pairs(cube, n), "pairs; refuted:", plane_refuted(cube, n))
