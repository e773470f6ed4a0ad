"""Lower bound for the John-position polytope J from a small certificate campaign.

Each grid direction w gets a Farkas certificate proving that every
projection onto w^perp has norm above alpha*.  A density argument then turns
the finite grid into a bound for all directions.
"""

import tempfile
import time
from fractions import Fraction

from shady.campaign import check_files, run_campaign
from shady.farkas import generate_certificate, global_lower_bound, relative_projection_lp
from shady.polytope import builtin, enclosing_constants
from shady.rational import format_rational

J = builtin("J")
alpha = Fraction(84, 83)
w = (Fraction(1), Fraction(-39, 40), Fraction(-164, 175))

cert = generate_certificate(J, w, alpha)
print("certificate rows", cert.support)
for y in cert.y_values:
    print("  y =", format_rational(y))
lam, _ = relative_projection_lp(J, w)
print("exact least norm onto w^perp:", float(lam), "> alpha* =", float(alpha))

n = 6
with tempfile.TemporaryDirectory() as out:
    t0 = time.perf_counter()
    s = run_campaign(J, n, alpha, out, track_lambda=True)
    rep = check_files(J, s.files, alpha)
    print(f"\nn = {n}: {s.total} certificates in {time.perf_counter() - t0:.1f}s, re-verified: {rep.ok}")
    print("smallest least-norm seen (float):", s.min_lambda)

C_upper = enclosing_constants(J).C_upper
print("\nC_J <=", format_rational(C_upper), "~", float(C_upper))
for m in (n, 100, 1400):
    b = global_lower_bound(alpha, m, Fraction(31, 20))
    print(f"grid n = {m:5d}: shadiness constant >= {float(b):.6f}")
