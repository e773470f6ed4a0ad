"""Certificate campaigns over the direction grid, with checkpoint/resume."""

from __future__ import annotations

import gzip
import logging
import multiprocessing as mp
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from .farkas import (BoundFails, _open_text, certificate_problem,
                     facet_points, format_certificate, generate_certificate, parse_certificate)
from .polytope import Polytope
from .rational import as_fraction

log = logging.getLogger(__name__)


@dataclass
class CampaignSummary:
    n: int
    alpha_star: Fraction
    files: list = field(default_factory=list)
    counts: list = field(default_factory=list)     # certificates per facet file
    resumed: int = 0                                 # lines already present on start
    min_lambda: float | None = None                  # floating estimate over new points
    min_lambda_w: tuple | None = None
    wall_time: float = 0.0

    @property
    def total(self) -> int:
        return sum(self.counts)


def certificate_path(out_dir, name: str, n: int, alpha_star, i: int, compress: bool = True) -> Path:
    a = as_fraction(alpha_star)
    suffix = ".csv.gz" if compress else ".csv"
    return Path(out_dir) / f"farkas-certificates-{name}-{n}-{a.numerator}_{a.denominator}-{i + 1}{suffix}"


def lambda_float(C: Polytope, w) -> float:
    """Floating estimate of the least projection norm onto ``w^perp`` (HiGHS)."""
    wf = np.array([float(x) for x in w])
    rows, rhs = [], []
    for v in C.half_vertices:
        vf = np.array([float(x) for x in v])
        wv = wf @ vf
        for h in C.normals:
            hf = np.array([float(x) for x in h])
            # h.v - (w.v) h.u - alpha <= 0
            rows.append(np.concatenate([-wv * hf, [-1.0]]))
            rhs.append(-(hf @ vf))
    res = linprog(np.array([0.0, 0.0, 0.0, 1.0]), A_ub=np.array(rows), b_ub=np.array(rhs),
                  A_eq=np.array([np.concatenate([wf, [0.0]])]), b_eq=np.array([1.0]),
                  bounds=[(None, None)] * 4, method="highs")
    return float(res.fun) if res.status == 0 else float("nan")


_WORKER: dict = {}


def _init_worker(C, alpha_star, warm_start, track_lambda):
    _WORKER.update(C=C, alpha_star=alpha_star, warm_start=warm_start, track_lambda=track_lambda)


def _work(w):
    C, a = _WORKER["C"], _WORKER["alpha_star"]
    lam = lambda_float(C, w) if _WORKER["track_lambda"] else None
    try:
        cert = generate_certificate(C, w, a, warm_start=_WORKER["warm_start"])
    except BoundFails as exc:
        return w, None, exc.lam
    return w, format_certificate(cert), lam


def _valid_prefix(path: Path, expected: list, alpha_star) -> list[str]:
    """Lines of an existing (possibly truncated) file that match the expected grid order."""
    lines = []
    try:
        with _open_text(path, "rt") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.endswith("\n"):
                    break
                if lineno > len(expected):
                    break
                try:
                    cert = parse_certificate(line, alpha_star, lineno=lineno)
                except ValueError:
                    break
                if cert.w != expected[lineno - 1]:
                    break
                lines.append(line.rstrip("\n"))
    except (EOFError, OSError, gzip.BadGzipFile):
        pass
    return lines


def run_campaign(C: Polytope, n: int, alpha_star, out_dir, jobs: int = 1, compress: bool = True,
                 warm_start: bool = True, track_lambda: bool = False, resume: bool = True,
                 flush_every: int = 256, name: str | None = None) -> CampaignSummary:
    """Certify every grid direction, one file per cube facet ``x_i = 1``.

    Each file lists all ``(2n+1)^2`` points of its facet in grid order, so
    points on shared cube edges appear in more than one file.  Existing files
    are resumed: their valid prefix is kept and only the remaining points are
    computed.  Output order never depends on ``jobs``.  A direction without a
    certificate raises :class:`BoundFails` after the preceding lines are
    written.
    """
    a = as_fraction(alpha_star)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = name or C.name
    summary = CampaignSummary(n, a)
    t0 = time.perf_counter()
    pool = mp.get_context("fork").Pool(jobs, _init_worker, (C, a, warm_start, track_lambda)) if jobs > 1 else None
    if pool is None:
        _init_worker(C, a, warm_start, track_lambda)
    try:
        for i in range(C.dim):
            path = certificate_path(out_dir, name, n, a, i, compress)
            pts = facet_points(n, i)
            done = _valid_prefix(path, pts, a) if resume and path.exists() else []
            summary.resumed += len(done)
            with _open_text(path, "wt") as fh:
                for line in done:
                    fh.write(line + "\n")
                todo = pts[len(done):]
                results = pool.imap(_work, todo, chunksize=32) if pool else map(_work, todo)
                count = len(done)
                for w, line, lam in results:
                    if lam is not None and (summary.min_lambda is None or lam < summary.min_lambda):
                        summary.min_lambda, summary.min_lambda_w = float(lam), w
                    if line is None:
                        fh.flush()
                        raise BoundFails(w, lam, a)
                    fh.write(line + "\n")
                    count += 1
                    if count % flush_every == 0:
                        fh.flush()
            summary.files.append(path)
            summary.counts.append(count)
            log.info("facet %d: %d certificates in %s", i + 1, count, path)
    finally:
        if pool is not None:
            pool.terminate()
    summary.wall_time = time.perf_counter() - t0
    return summary


def _check_line(args):
    line, lineno = args
    C, a = _WORKER["C"], _WORKER["alpha_star"]
    try:
        cert = parse_certificate(line, a, lineno=lineno)
    except ValueError as exc:
        return lineno, str(exc)
    return lineno, certificate_problem(C, cert)


@dataclass
class CheckReport:
    checked: int = 0
    failures: list = field(default_factory=list)   # (path, lineno, reason)
    directions: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_files(C: Polytope, paths, alpha_star, jobs: int = 1, max_failures: int = 20) -> CheckReport:
    """Verify every line of the given certificate files exactly."""
    a = as_fraction(alpha_star)
    report = CheckReport()
    pool = mp.get_context("fork").Pool(jobs, _init_worker, (C, a, False, False)) if jobs > 1 else None
    if pool is None:
        _init_worker(C, a, False, False)
    try:
        for path in paths:
            with _open_text(path, "rt") as fh:
                items = ((line, k) for k, line in enumerate(fh, 1) if line.strip())
                results = pool.imap(_check_line, items, chunksize=64) if pool else map(_check_line, items)
                for lineno, reason in results:
                    report.checked += 1
                    if reason is not None:
                        report.failures.append((str(path), lineno, reason))
                        if len(report.failures) >= max_failures:
                            return report
    finally:
        if pool is not None:
            pool.terminate()
    return report


def grid_coverage(paths, alpha_star=None) -> set:
    """Set of directions appearing in certificate files."""
    from .farkas import iter_certificates
    out = set()
    for p in paths:
        for cert in iter_certificates(p, alpha_star):
            out.add(cert.w)
    return out
