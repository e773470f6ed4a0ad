"""A 12-vertex polytope and one projection of it, all in exact arithmetic."""

from shady import linalg as la
from shady.farkas import relative_projection_lp
from shady.polytope import builtin, enclosing_constants
from shady.projections import P_REF, left_null_vector, operator_norm
from shady.rational import format_rational, format_vector

I = builtin("I")
print(I)
for v in I.half_vertices:
    print("  vertex", format_vector(v))

e = enclosing_constants(I)
print("outer radius^2", format_rational(e.R_sq), " inner radius^2", format_rational(e.r_sq))
print("distortion C^2", format_rational(e.C_sq), "~", float(e.C_sq))

# a rank-2 projection with norm a little above 1
print("trace", la.trace(P_REF), " idempotent:", la.matmul(P_REF, P_REF) == P_REF)
norm, h, v = operator_norm(I, P_REF, with_witness=True)
print("norm", format_rational(norm), "~", float(norm))
print("attained at h =", format_vector(h), " v =", format_vector(v))

# the best projection onto the same image plane does slightly better
w = left_null_vector(P_REF)
lam, u = relative_projection_lp(I, w)
print("image plane w^perp with w =", format_vector(w))
print("least norm onto it", float(lam), "<=", float(norm))
