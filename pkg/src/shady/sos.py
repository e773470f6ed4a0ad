"""Rational weighted sum-of-squares certificates for emptiness of the
projection set ``{P : P^2 = P, tr P = k, h.Pv <= alpha*}``.

Only the rational post-processing is implemented here: constraint systems,
exact verification, the box-bound (Delta) membership, Gram projection and
the final LDL assembly.  Floating Gram matrices come from an external SDP
solver (or, for tests, are written down by hand).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .mpoly import MPoly, monomial_basis
from .polytope import Polytope, enclosing_constants
from .rational import as_fraction, format_rational, parse_rational, round_to_rational  # noqa: F401


class InvalidBound(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    F: tuple                 # equalities f_i = 0
    G: tuple                 # inequalities g_j >= 0, box bounds last
    omega_sq: Fraction
    alpha_star: Fraction | None = None
    box_start: int | None = None   # index in G of the first box bound Omega^2 - x_i^2

    def __post_init__(self):
        if self.box_start is None:
            object.__setattr__(self, "box_start", len(self.G) - self.n)


@dataclass(frozen=True)
class WeightedSosCertificate:
    q0_terms: tuple          # ((gamma, s), ...)
    q_terms: tuple           # one tuple of (gamma, s) per inequality
    p_terms: tuple           # one MPoly per equality
    target: Fraction = Fraction(-1)


@dataclass(frozen=True)
class GramData:
    basis: tuple             # exponent tuples, lexicographic
    Q: tuple                 # symmetric matrix of Fractions

    def __post_init__(self):
        if list(self.basis) != sorted(self.basis):
            raise ValueError("basis must be sorted lexicographically")
        if not la.is_symmetric(self.Q):
            raise ValueError("Gram matrix must be symmetric")


# Constraint systems

def build_constraint_system(C: Polytope, k: int, alpha_star, omega_sq) -> ConstraintSystem:
    """Polynomial description of rank-``k`` projections with ``h.Pv <= alpha*``.

    Variables are the entries of ``P`` in row-major order with the last
    diagonal entry removed (it equals ``k`` minus the other diagonal entries).
    """
    d = C.dim
    a, om = as_fraction(alpha_star), as_fraction(omega_sq)
    if not 1 <= k <= d - 1:
        raise ValueError(f"rank must lie in 1..{d - 1}")
    C_sq = enclosing_constants(C).C_sq
    if om < a * a * C_sq:
        raise InvalidBound(f"omega_sq {om} < alpha*^2 C^2 = {a * a * C_sq}")
    n = d * d - 1
    xs = [MPoly.var(n, i) for i in range(n)]
    P = [[None] * d for _ in range(d)]
    for idx in range(n):
        P[idx // d][idx % d] = xs[idx]
    P[d - 1][d - 1] = MPoly.constant(n, k) - sum((P[i][i] for i in range(d - 1)), MPoly(n))

    F = []
    for i in range(d):
        for j in range(d):
            F.append(sum((P[i][l] * P[l][j] for l in range(d)), MPoly(n)) - P[i][j])
    G = []
    for v in C.half_vertices:
        for h in C.normals:
            hPv = sum((P[i][j] * (h[i] * v[j]) for i in range(d) for j in range(d) if h[i] * v[j]), MPoly(n))
            G.append(MPoly.constant(n, a) - hPv)
    box_start = len(G)
    G += [MPoly.constant(n, om) - x * x for x in xs]
    return ConstraintSystem(n, tuple(F), tuple(G), om, a, box_start)


def matrix_point(P) -> tuple:
    """Variable vector of a ``d x d`` matrix (drops the last diagonal entry)."""
    d = len(P)
    return tuple(Fraction(P[i][j]) for i in range(d) for j in range(d) if (i, j) != (d - 1, d - 1))


def univariate_toy_system(omega_sq=Fraction(9, 4), lower=2) -> ConstraintSystem:
    """``x - lower >= 0`` and ``omega_sq - x^2 >= 0``; empty when ``lower^2 > omega_sq``."""
    x = MPoly.var(1, 0)
    om = as_fraction(omega_sq)
    return ConstraintSystem(1, (), (x - lower, MPoly.constant(1, om) - x * x), om, None, 1)


# Verification

def _accumulate(acc: dict, poly: MPoly, factor=1) -> None:
    for e, c in poly.terms.items():
        acc[e] = acc.get(e, 0) + c * factor


def _sos_expand(terms, nvars: int) -> MPoly:
    acc: dict = {}
    for gamma, s in terms:
        _accumulate(acc, s * s, gamma)
    return MPoly(nvars, acc)


def certificate_mismatch(sys: ConstraintSystem, cert: WeightedSosCertificate) -> str | None:
    """Why ``cert`` fails to prove the system empty, or None if it proves it."""
    n = sys.n
    if as_fraction(cert.target) >= 0:
        return "target is not negative"
    if len(cert.q_terms) != len(sys.G):
        return f"{len(cert.q_terms)} inequality blocks for {len(sys.G)} inequalities"
    if len(cert.p_terms) != len(sys.F):
        return f"{len(cert.p_terms)} equality multipliers for {len(sys.F)} equalities"
    blocks = [("q0", cert.q0_terms)] + [(f"q{j + 1}", t) for j, t in enumerate(cert.q_terms)]
    for name, terms in blocks:
        for gamma, s in terms:
            if as_fraction(gamma) <= 0:
                return f"nonpositive weight {gamma} in block {name}"
            if s.nvars != n:
                return f"block {name} uses {s.nvars} variables, system has {n}"
    for i, p in enumerate(cert.p_terms):
        if p.nvars != n:
            return f"p{i + 1} uses {p.nvars} variables, system has {n}"

    acc: dict = {}
    _accumulate(acc, _sos_expand(cert.q0_terms, n))
    for g, terms in zip(sys.G, cert.q_terms):
        if terms:
            _accumulate(acc, _sos_expand(terms, n) * g)
    for f, p in zip(sys.F, cert.p_terms):
        if p:
            _accumulate(acc, p * f)
    zero = (0,) * n
    want = {zero: as_fraction(cert.target)}
    for e in sorted(set(acc) | set(want)):
        got, exp = acc.get(e, 0), want.get(e, 0)
        if got != exp:
            return (f"monomial {e}: expansion gives {format_rational(got)}, "
                    f"expected {format_rational(exp)}")
    return None


def verify_sos_certificate(sys: ConstraintSystem, cert: WeightedSosCertificate) -> bool:
    """Exact check of ``target = q0 + sum q_j g_j + sum p_i f_i`` with ``target < 0``."""
    return certificate_mismatch(sys, cert) is None


# Box-bound membership

def decompose_one_minus_monomial(alpha: Sequence[int]) -> list[MPoly]:
    """``p_1..p_n`` with ``1 - x^alpha = sum (1 - x_i) p_i`` and nonnegative integer coefficients.

    Peels the smallest-index variable first:
    ``1 - x_i x^beta = (1 - x_i) + x_i (1 - x^beta)``.
    """
    n = len(alpha)
    out = [dict() for _ in range(n)]
    prefix = [0] * n
    for i in range(n):
        for _ in range(alpha[i]):
            e = tuple(prefix)
            out[i][e] = out[i].get(e, 0) + 1
            prefix[i] += 1
    return [MPoly(n, t) for t in out]


def offset_decomposition(omega_sq, alpha: Sequence[int]):
    """``(Delta, p)`` with ``Delta - x^(2 alpha) = sum_i p_i (omega_sq - x_i^2)``.

    ``Delta = omega_sq^|alpha|`` and each ``p_i`` is returned as weighted
    squares ``[(gamma, x^beta), ...]`` obtained by substituting
    ``x_i^2 / omega_sq`` into :func:`decompose_one_minus_monomial`.
    """
    om = as_fraction(omega_sq)
    if om <= 0:
        raise ValueError("omega_sq must be positive")
    w = sum(alpha)
    p = []
    for poly in decompose_one_minus_monomial(alpha):
        terms = []
        for beta, c in poly.items():
            terms.append((c * om ** (w - 1 - sum(beta)), MPoly.monomial(beta)))
        p.append(terms)
    return om ** w, p


def delta_bound(omega_sq, r: int, n: int):
    """``(Delta, membership)`` with ``Delta - sum_{0<|alpha|<=r} x^(2 alpha) = sum_i m_i (omega_sq - x_i^2)``.

    The constant monomial is left out: ``1 - x^0`` vanishes, so it needs no
    share of ``Delta``.  ``membership[i]`` lists the ``(gamma, x^beta)``
    squares making up ``m_i``.
    """
    if r < 0 or n < 1:
        raise ValueError("need r >= 0 and n >= 1")
    om = as_fraction(omega_sq)
    delta = Fraction(0)
    merged = [dict() for _ in range(n)]
    for alpha in monomial_basis(n, r)[1:]:
        d_a, p = offset_decomposition(om, alpha)
        delta += d_a
        for i, terms in enumerate(p):
            for gamma, s in terms:
                (beta,) = s.terms
                merged[i][beta] = merged[i].get(beta, 0) + gamma
    membership = [[(g, MPoly.monomial(b)) for b, g in sorted(m.items())] for m in merged]
    return delta, membership


def delta_closed_form(omega_sq, r: int, n: int) -> Fraction:
    om = as_fraction(omega_sq)
    return sum((comb(n + j - 1, j) * om ** j for j in range(1, r + 1)), Fraction(0))


# Gram matrices

def gram_polynomial(G: GramData) -> MPoly:
    """``[x]^T Q [x]``."""
    n = len(G.basis[0])
    acc: dict = {}
    for a, Qa in zip(G.basis, G.Q):
        for b, q in zip(G.basis, Qa):
            if q:
                e = tuple(x + y for x, y in zip(a, b))
                acc[e] = acc.get(e, 0) + q
    return MPoly(n, acc)


def gram_project(Qp: GramData, h: MPoly) -> GramData:
    """Orthogonal projection of ``Qp`` onto the Gram matrices of ``h``.

    Each entry moves by the residual of its monomial ``alpha + beta`` spread
    evenly over all basis pairs producing that monomial.
    """
    basis = Qp.basis
    classes: dict = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            classes.setdefault(tuple(x + y for x, y in zip(a, b)), []).append((i, j))
    extra = [e for e in h.terms if e not in classes]
    if extra:
        raise DegreeOverflow(f"monomial {extra[0]} not representable over the basis")
    Q = [list(map(Fraction, row)) for row in Qp.Q]
    for e, pairs in classes.items():
        resid = sum((Q[i][j] for i, j in pairs), Fraction(0)) - h.coefficient(e)
        if resid:
            shift = resid / len(pairs)
            for i, j in pairs:
                Q[i][j] -= shift
    return GramData(basis, tuple(tuple(r) for r in Q))


def gram_from_float(basis, Qf, max_denominator: int) -> GramData:
    """Round a floating Gram matrix and symmetrise it exactly."""
    R = round_to_rational([[float(x) for x in row] for row in Qf], max_denominator)
    m = len(R)
    S = tuple(tuple((R[i][j] + R[j][i]) / 2 for j in range(m)) for i in range(m))
    return GramData(tuple(basis), S)


# Assembly

def _double(terms):
    return tuple((2 * as_fraction(g), s) for g, s in terms)


def finalize_certificate(sys: ConstraintSystem, Q: GramData, q_terms, p_terms) -> WeightedSosCertificate:
    """Turn an (almost PSD) Gram matrix of ``h = -1 - sum q_j g_j - sum p_i f_i`` into a certificate.

    Uses ``-1 = 2 (q0 + sum q_j g_j + sum p_i f_i) + (Delta - [x]^T[x] + 1) / Delta``
    with ``q0 = [x]^T (Q + E/(2 Delta)) [x]`` expanded through LDL, where ``E``
    is the identity with the constant-monomial entry zeroed.  Raises
    ``NotPositiveDefinite`` when the shifted matrix is not positive definite.
    """
    n = sys.n
    r = max(sum(b) for b in Q.basis)
    delta, membership = delta_bound(sys.omega_sq, r, n)
    m = len(Q.basis)
    shift = 1 / (2 * delta) if delta else 0
    const = Q.basis.index((0,) * n) if (0,) * n in Q.basis else -1
    Qs = tuple(tuple(Q.Q[i][j] + (shift if i == j != const else 0) for j in range(m)) for i in range(m))
    L, D = la.ldl_decompose(Qs)
    monos = [MPoly.monomial(b) for b in Q.basis]
    q0 = []
    for i in range(m):
        s = MPoly(n)
        for k in range(i, m):
            if L[k][i]:
                s = s + monos[k] * L[k][i]
        q0.append((2 * D[i], s))

    q_out = [list(_double(t)) for t in q_terms]
    for i, terms in enumerate(membership):
        q_out[sys.box_start + i] += [(g / delta, s) for g, s in terms]
    p_out = tuple(p * 2 for p in p_terms)
    cert = WeightedSosCertificate(tuple(q0), tuple(tuple(t) for t in q_out), p_out, Fraction(-1))
    reason = certificate_mismatch(sys, cert)
    if reason is not None:
        raise ArithmeticError(f"assembled certificate does not verify: {reason}")
    return cert


def residual_polynomial(sys: ConstraintSystem, q_terms, p_terms, target=-1) -> MPoly:
    """``h = target - sum q_j g_j - sum p_i f_i``, the polynomial ``q0`` must equal."""
    acc: dict = {(0,) * sys.n: as_fraction(target)}
    for g, terms in zip(sys.G, q_terms):
        if terms:
            _accumulate(acc, _sos_expand(terms, sys.n) * g, -1)
    for f, p in zip(sys.F, p_terms):
        if p:
            _accumulate(acc, p * f, -1)
    return MPoly(sys.n, acc)


# Text format
#
#   nvars <n>
#   target <a//b>
#   q0 <count>           followed by <count> lines  "gamma ; e=c ; e=c ..."
#   q <j> <count>        same, for inequality j (1-based)
#   p <i>                followed by one line "e=c ; ..." (or "0")

def _poly_text(p: MPoly) -> str:
    return p.to_text() or "0"


def _parse_poly(n: int, text: str) -> MPoly:
    text = text.strip()
    return MPoly(n) if text == "0" else MPoly.from_text(n, text)


def format_sos_certificate(cert: WeightedSosCertificate, nvars: int) -> str:
    lines = [f"nvars {nvars}", f"target {format_rational(cert.target)}", f"q0 {len(cert.q0_terms)}"]
    lines += [f"{format_rational(g)} ; {_poly_text(s)}" for g, s in cert.q0_terms]
    for j, terms in enumerate(cert.q_terms, 1):
        lines.append(f"q {j} {len(terms)}")
        lines += [f"{format_rational(g)} ; {_poly_text(s)}" for g, s in terms]
    for i, p in enumerate(cert.p_terms, 1):
        lines += [f"p {i}", _poly_text(p)]
    return "\n".join(lines) + "\n"


def parse_sos_certificate(text: str) -> tuple[WeightedSosCertificate, int]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    it = iter(lines)

    def header(prefix):
        toks = next(it).split()
        if toks[0] != prefix:
            raise ValueError(f"expected '{prefix}', found '{toks[0]}'")
        return toks[1:]

    n = int(header("nvars")[0])
    target = parse_rational(header("target")[0])

    def terms(count):
        out = []
        for _ in range(count):
            g, _, s = next(it).partition(";")
            out.append((parse_rational(g.strip()), _parse_poly(n, s)))
        return tuple(out)

    q0 = terms(int(header("q0")[0]))
    q, p = [], []
    for line in it:
        toks = line.split()
        if toks[0] == "q":
            if int(toks[1]) != len(q) + 1:
                raise ValueError("inequality blocks out of order")
            q.append(terms(int(toks[2])))
        elif toks[0] == "p":
            if int(toks[1]) != len(p) + 1:
                raise ValueError("equality blocks out of order")
            p.append(_parse_poly(n, next(it)))
        else:
            raise ValueError(f"unexpected line: {line!r}")
    return WeightedSosCertificate(q0, tuple(q), tuple(p), target), n


def write_sos_certificate(cert: WeightedSosCertificate, nvars: int, path) -> None:
    Path(path).write_text(format_sos_certificate(cert, nvars))


def read_sos_certificate(path) -> tuple[WeightedSosCertificate, int]:
    return parse_sos_certificate(Path(path).read_text())
