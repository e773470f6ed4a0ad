"""Rounding a floating Gram matrix into an exact emptiness certificate.

The set {x >= 2, x^2 <= 9/4} is empty.  With multipliers q1 = 4, q2 = 1 the
polynomial h = -1 - q1 g1 - q2 g2 = x^2 - 4x + 19/4 is a sum of squares;
a slightly wrong floating Gram matrix for it is rounded, projected back
onto the exact Gram space, shifted and factored.
"""

from fractions import Fraction

from shady.mpoly import MPoly
from shady.sos import (delta_bound, finalize_certificate, format_sos_certificate, gram_from_float,
                       gram_polynomial, gram_project, residual_polynomial, univariate_toy_system,
                       verify_sos_certificate)

sys = univariate_toy_system()
one = MPoly.constant(1, 1)
q = [((Fraction(4), one),), ((Fraction(1), one),)]
h = residual_polynomial(sys, q, [])
print("h =", h)

Qf = [[4.7500003, -2.0000001], [-1.9999998, 0.9999996]]
Qr = gram_from_float(((0,), (1,)), Qf, 10**6)
print("rounded Gram represents h?", gram_polynomial(Qr) == h)
Q = gram_project(Qr, h)
print("projected Gram", [[str(x) for x in row] for row in Q.Q], "represents h?", gram_polynomial(Q) == h)

D, _ = delta_bound(sys.omega_sq, 1, 1)
print("Delta =", D)
cert = finalize_certificate(sys, Q, q, [])
print("verified:", verify_sos_certificate(sys, cert))
print(format_sos_certificate(cert, 1))

# the real instance has 8 variables and degree 3 monomials
print("Delta for the 12-vertex instance:", delta_bound(Fraction(1397537, 270000), 3, 8)[0])
