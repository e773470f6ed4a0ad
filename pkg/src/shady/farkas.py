"""Farkas certificates for lower bounds on relative projection constants.

For a direction ``w`` the rank-(d-1) projections with image ``w^perp`` all
have norm above ``alpha*`` iff ``w`` lies in the cone spanned by the rows

    (h.v) w - (w.v) h - alpha* w,      v in V', h in H

(rows ordered v-major, h-minor in the polytope's canonical order).  A
certificate is a nonnegative ``y`` with at most ``d`` nonzeros solving
``A^T y = w``.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from . import linalg as la
from .lp import INFEASIBLE, OPTIMAL, simplex
from .polytope import Polytope
from .rational import as_fraction, format_rational, parse_rational

# rational upper bound on 1/sqrt(2): (7072/10^4)^2 = 0.50013... >= 1/2
INV_SQRT2_UPPER = Fraction(7072, 10**4)


class BoundFails(Exception):
    """No certificate exists: some projection onto ``w^perp`` has norm <= alpha*."""

    def __init__(self, w, lam, alpha_star=None):
        self.w = tuple(w)
        self.lam = lam
        self.alpha_star = alpha_star
        super().__init__(f"relative projection constant {lam} <= alpha* {alpha_star} at w = "
                         + ";".join(format_rational(x) for x in self.w))


class NumericalSupportMismatch(ArithmeticError):
    pass


class Unbounded(ArithmeticError):
    pass


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class FarkasCertificate:
    w: tuple
    support: tuple          # 1-based row indices
    y_values: tuple         # positive rationals, one per support index
    alpha_star: Fraction | None = None


@dataclass(frozen=True)
class FarkasMatrix:
    rows: tuple
    w: tuple
    alpha_star: Fraction


def farkas_matrix(C: Polytope, w: Sequence, alpha_star) -> FarkasMatrix:
    w = la.vec(w)
    a = as_fraction(alpha_star)
    rows = []
    for v in C.half_vertices:
        wv = la.dot(w, v)
        for h in C.normals:
            hv = la.dot(h, v)
            rows.append(tuple((hv - a) * wi - wv * hi for wi, hi in zip(w, h)))
    return FarkasMatrix(tuple(rows), w, a)


def row_index(C: Polytope, v_idx: int, h_idx: int) -> int:
    """1-based row number of the pair (V'[v_idx], H[h_idx])."""
    return v_idx * len(C.normals) + h_idx + 1


def relative_projection_lp(C: Polytope, w: Sequence) -> tuple[Fraction, tuple]:
    """Exact ``lambda(w^perp)``: the least norm of a projection onto ``w^perp``.

    Solves ``min alpha  s.t.  w.u = 1,  h.v - (w.v)(h.u) <= alpha`` through its
    dual in equality form and reads the kernel direction ``u`` off the dual
    multipliers.  Returns ``(lambda, u)``.
    """
    w = la.vec(w)
    if not any(w):
        raise ValueError("w must be nonzero")
    d = len(w)
    cols, cost = [], []
    for v in C.half_vertices:
        wv = la.dot(w, v)
        for h in C.normals:
            cols.append((Fraction(1),) + tuple(wv * hi for hi in h))
            cost.append(-la.dot(h, v))
    cols.append((Fraction(0),) + w)
    cost.append(Fraction(-1))
    cols.append((Fraction(0),) + la.neg(w))
    cost.append(Fraction(1))
    A = la.transpose(tuple(cols))
    b = (Fraction(1),) + (Fraction(0),) * d
    res = simplex(cost, A, b)
    if res.status != OPTIMAL:
        raise Unbounded(f"direction LP is {res.status}; polytope invariants violated?")
    lam = -res.value
    u = tuple(-x for x in res.duals[1:])
    return lam, u


def _exact_on_support(rows: Sequence[tuple], w: tuple, support: Sequence[int]):
    """Solve ``sum_{i in support} y_i rows[i] = w`` exactly; None unless a positive solution exists."""
    M = la.transpose(tuple(rows[i] for i in support))  # d x |S|
    k = len(support)
    if k == 0:
        return None
    if k == len(w):
        try:
            y = la.solve_linear(M, w)
        except la.SingularMatrix:
            return None
    else:
        Mt = la.transpose(M)
        try:
            y = la.solve_linear(la.matmul(Mt, M), la.matvec(Mt, w))
        except la.SingularMatrix:
            return None
        if la.matvec(M, y) != w:
            return None
    if any(yi <= 0 for yi in y):
        return None
    return y


def _float_support(rows: Sequence[tuple], w: tuple) -> list[int] | None:
    At = np.array([[float(x) for x in r] for r in rows]).T
    res = linprog(np.zeros(At.shape[1]), A_eq=At, b_eq=np.array([float(x) for x in w]),
                  bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    y = res.x
    tol = 1e-9 * max(1.0, float(np.max(np.abs(y))))
    return [int(i) for i in np.flatnonzero(y > tol)]


def generate_certificate(C: Polytope, w: Sequence, alpha_star, warm_start: bool = True) -> FarkasCertificate:
    """Find a sparse exact Farkas certificate for ``w`` or raise :class:`BoundFails`.

    With ``warm_start`` a floating-point LP proposes the support and the
    exact values come from a small rational solve on it; when that fails the
    exact simplex decides from scratch.  The result is always verified.
    """
    fm = farkas_matrix(C, w, alpha_star)
    rows, w = fm.rows, fm.w
    d = len(w)
    support = y = None
    if warm_start:
        s = _float_support(rows, w)
        if s is not None and len(s) <= d:
            y = _exact_on_support(rows, w, s)
            support = s if y is not None else None
    if y is None:
        res = simplex([0] * len(rows), la.transpose(rows), w, phase_one_only=True)
        if res.status == INFEASIBLE:
            lam, _ = relative_projection_lp(C, w)
            raise BoundFails(w, lam, fm.alpha_star)
        support = [i for i, x in enumerate(res.x) if x]
        y = [res.x[i] for i in support]
    cert = FarkasCertificate(w, tuple(i + 1 for i in support), tuple(y), fm.alpha_star)
    reason = certificate_problem(C, cert)
    if reason is not None:
        raise NumericalSupportMismatch(reason)
    return cert


def certificate_problem(C: Polytope, cert: FarkasCertificate, alpha_star=None) -> str | None:
    """Reason the certificate is invalid, or None when it proves ``lambda(w^perp) > alpha*``."""
    a = cert.alpha_star if alpha_star is None else as_fraction(alpha_star)
    if a is None:
        return "no alpha* given"
    if len(cert.support) != len(cert.y_values):
        return "support and values differ in length"
    if len(cert.support) > len(cert.w):
        return "more than d nonzero multipliers"
    if len(set(cert.support)) != len(cert.support):
        return "repeated row index"
    nrows = len(C.half_vertices) * len(C.normals)
    if any(not 1 <= k <= nrows for k in cert.support):
        return "row index out of range"
    if any(y <= 0 for y in cert.y_values):
        return "nonpositive multiplier"
    w = la.vec(cert.w)
    if not any(w):
        return "zero direction"
    nh = len(C.normals)
    total = [Fraction(0)] * len(w)
    for k, y in zip(cert.support, cert.y_values):
        v = C.half_vertices[(k - 1) // nh]
        h = C.normals[(k - 1) % nh]
        hv, wv = la.dot(h, v), la.dot(w, v)
        for i in range(len(w)):
            total[i] += y * ((hv - a) * w[i] - wv * h[i])
    if tuple(total) != w:
        return "A^T y != w"
    return None


def verify_certificate(C: Polytope, cert: FarkasCertificate, alpha_star=None) -> bool:
    return certificate_problem(C, cert, alpha_star) is None


# Direction grid

@dataclass(frozen=True)
class DirectionGrid:
    n: int
    points: tuple

    @property
    def eps_sq(self) -> Fraction:
        """Squared density radius ``1/(2 n^2)`` of the induced rays on the unit sphere."""
        return Fraction(1, 2 * self.n * self.n)


def facet_points(n: int, i: int) -> list[tuple]:
    """Grid points on the cube facet ``x_i = 1``, ordered by k then l."""
    out = []
    for k in range(-n, n + 1):
        for l in range(-n, n + 1):
            p = [Fraction(k, n), Fraction(l, n)]
            p.insert(i, Fraction(1))
            out.append(tuple(p))
    return out


def build_grid(n: int) -> DirectionGrid:
    if n < 1:
        raise ValueError("n must be >= 1")
    seen = set()
    pts = []
    for i in range(3):
        for p in facet_points(n, i):
            if p not in seen:
                seen.add(p)
                pts.append(p)
    return DirectionGrid(n, tuple(pts))


def global_lower_bound(alpha_star, n: int, C_upper, inv_sqrt2_upper=INV_SQRT2_UPPER) -> Fraction:
    """``alpha* / (1 + eps (C + C^2))`` with ``eps = inv_sqrt2_upper / n >= 1/(n sqrt 2)``."""
    a, c = as_fraction(alpha_star), as_fraction(C_upper)
    s = as_fraction(inv_sqrt2_upper)
    if s < 0 or 2 * s * s < 1 and s != 0:
        raise ValueError("inv_sqrt2_upper must be 0 (limit) or an upper bound on 1/sqrt(2)")
    eps = s / n
    return a / (1 + eps * (c + c * c))


# Certificate files: w1;w2;w3;k1;k2;k3;y1;y2;y3

def format_certificate(cert: FarkasCertificate, d: int = 3) -> str:
    ks = list(cert.support) + [0] * (d - len(cert.support))
    ys = list(cert.y_values) + [Fraction(0)] * (d - len(cert.y_values))
    fields = [format_rational(x) for x in cert.w] + [str(k) for k in ks] + [format_rational(y) for y in ys]
    return ";".join(fields)


def parse_certificate(line: str, alpha_star=None, d: int = 3, lineno: int = 0) -> FarkasCertificate:
    toks = line.strip().split(";")
    if len(toks) != 3 * d:
        raise ParseError(lineno, f"expected {3 * d} fields, found {len(toks)}")
    try:
        w = tuple(parse_rational(t) for t in toks[:d])
        ks = [int(t) for t in toks[d:2 * d]]
        ys = [parse_rational(t) for t in toks[2 * d:]]
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None
    support, values = [], []
    for k, y in zip(ks, ys):
        if k == 0:
            if y != 0:
                raise ParseError(lineno, "padding entry with nonzero value")
            continue
        support.append(k)
        values.append(y)
    a = None if alpha_star is None else as_fraction(alpha_star)
    return FarkasCertificate(w, tuple(support), tuple(values), a)


def _open_text(path, mode: str):
    path = Path(path)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, mode.replace("t", "") + "b"), encoding="ascii", newline="\n")
    return open(path, mode, encoding="ascii", newline="\n")


def iter_certificates(path, alpha_star=None) -> Iterable[FarkasCertificate]:
    with _open_text(path, "rt") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                yield parse_certificate(line, alpha_star, lineno=lineno)


def read_certificates(path, alpha_star=None) -> list[FarkasCertificate]:
    return list(iter_certificates(path, alpha_star))


def write_certificates(certs: Iterable[FarkasCertificate], path) -> None:
    with _open_text(path, "wt") as fh:
        for cert in certs:
            fh.write(format_certificate(cert) + "\n")
