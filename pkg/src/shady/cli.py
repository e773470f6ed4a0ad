"""Command-line entry point: ``shady <subcommand> ...``.

Exit codes: 0 success, 2 a Farkas bound fails, 3 verification or parse
failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance, campaign, farkas, polytope, projections, shadiness, sos
from .rational import format_rational, format_vector, parse_rational, parse_vector

EXIT_OK, EXIT_BOUND, EXIT_VERIFY, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class _Out:
    """Text lines or ``key=value`` records."""

    def __init__(self, machine: bool):
        self.machine = machine

    def value(self, key: str, text: str, label: str | None = None):
        if self.machine:
            print(f"{key}={text}")
        elif label is None:
            print(text)
        else:
            print(f"{label}: {text}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load(args) -> polytope.Polytope:
    if args.builtin:
        if args.builtin not in polytope.BUILTINS:
            raise UsageError(f"unknown builtin {args.builtin!r}; choose from {', '.join(sorted(polytope.BUILTINS))}")
        return polytope.builtin(args.builtin)
    if args.polytope is None:
        raise UsageError("give --builtin NAME or --polytope FILE")
    path = Path(args.polytope)
    if path.exists():
        return polytope.read_polytope(path)
    if args.polytope in polytope.BUILTINS:
        return polytope.builtin(args.polytope)
    raise UsageError(f"no such polytope file: {path}")


def _polytope_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--builtin", help="I, J, cube or octahedron")
    g.add_argument("--polytope", help="vertex file (or a builtin name)")


# Subcommands

def cmd_hull(args, out):
    C = _load(args)
    e = polytope.enclosing_constants(C)
    out.value("vertices", str(len(C.vertices)), "vertices")
    out.value("facets", str(len(C.normals)), "facets")
    for key in ("r_sq", "R_sq", "C_sq", "C_upper"):
        out.value(key, format_rational(getattr(e, key)), key)
    for v in C.vertices:
        out.value("vertex", format_vector(v), "vertex")
    for h, f in zip(C.normals, C.facets):
        out.value("normal", format_vector(h) + " @ " + ",".join(str(i + 1) for i in f), "normal")
    if args.emit_obj:
        Path(args.emit_obj).write_text(polytope.to_obj(C))
    return EXIT_OK


def cmd_norm(args, out):
    C = _load(args)
    x = parse_vector(args.point)
    if len(x) != C.dim:
        raise UsageError(f"point has {len(x)} coordinates, polytope lives in dimension {C.dim}")
    out.value("norm", format_rational(polytope.norm_point(C, x)))
    return EXIT_OK


def cmd_proj_norm(args, out):
    C = _load(args)
    try:
        P = projections.read_matrix(args.matrix)
    except (OSError, ValueError) as exc:
        print(f"cannot read matrix: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    value, h, v = projections.operator_norm(C, P, with_witness=True)
    out.value("norm", format_rational(value))
    out.value("h", format_vector(h), "h")
    out.value("v", format_vector(v), "v")
    return EXIT_OK


def cmd_shady_test(args, out):
    C = _load(args)
    out.value("result", "SHADY" if shadiness.simple_shady_test(C) else "UNKNOWN")
    return EXIT_OK


def cmd_nonshady(args, out):
    C = _load(args)
    try:
        W = shadiness.norm_one_projection(C)
    except shadiness.NoCycleFound as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    for row in W.P.P:
        out.value("row", format_vector(row), "row")
    out.value("norm", format_rational(W.bound), "norm")
    return EXIT_OK


def cmd_farkas_gen(args, out):
    C = _load(args)
    try:
        s = campaign.run_campaign(C, args.n, args.alpha, args.out, jobs=args.jobs,
                                  compress=not args.plain, track_lambda=args.track_lambda,
                                  resume=not args.fresh)
    except farkas.BoundFails as exc:
        out.value("bound_fails", format_vector(exc.w), "no certificate at w")
        out.value("lambda", format_rational(exc.lam), "lambda")
        return EXIT_BOUND
    for path, count in zip(s.files, s.counts):
        out.value("file", f"{path} {count}", "file")
    out.value("certificates", str(s.total), "certificates")
    out.value("resumed", str(s.resumed), "resumed")
    if s.min_lambda is not None:
        # floating diagnostic, not a certified number
        out.value("min_lambda_estimate", repr(s.min_lambda), "min lambda (float estimate)")
    return EXIT_OK


def cmd_farkas_check(args, out):
    C = _load(args)
    try:
        rep = campaign.check_files(C, args.files, args.alpha, jobs=args.jobs)
    except (OSError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    out.value("checked", str(rep.checked), "checked")
    for path, lineno, reason in rep.failures:
        out.value("failure", f"{path}:{lineno}: {reason}", "failure")
    out.value("result", "VERIFIED" if rep.ok else "FAILED")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_farkas_bound(args, out):
    b = farkas.global_lower_bound(args.alpha, args.n, args.c_upper, args.inv_sqrt2)
    out.value("bound", format_rational(b))
    return EXIT_OK


def _system(args):
    if args.system == "toy":
        return sos.univariate_toy_system()
    if args.system != "polytope":
        raise UsageError("--system must be 'toy' or 'polytope'")
    if args.k is None or args.alpha is None or args.omega_sq is None:
        raise UsageError("--system polytope needs --k, --alpha and --omega-sq")
    return sos.build_constraint_system(_load(args), args.k, args.alpha, args.omega_sq)


def cmd_sos_check(args, out):
    try:
        system = _system(args)
    except sos.InvalidBound as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    try:
        cert, nvars = sos.read_sos_certificate(args.cert)
    except (OSError, ValueError, StopIteration) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if nvars != system.n:
        out.value("mismatch", f"certificate has {nvars} variables, system has {system.n}", "mismatch")
        out.value("result", "FAILED")
        return EXIT_VERIFY
    reason = sos.certificate_mismatch(system, cert)
    if reason is not None:
        out.value("mismatch", reason, "first mismatch")
    out.value("result", "VERIFIED" if reason is None else "FAILED")
    return EXIT_OK if reason is None else EXIT_VERIFY


def cmd_sos_delta(args, out):
    d, _ = sos.delta_bound(args.omega_sq, args.r, args.n)
    out.value("delta", format_rational(d))
    return EXIT_OK


def cmd_reproduce(args, out):
    checks = acceptance.run_all(seed=args.seed, campaign_n=args.campaign_n, jobs=args.jobs,
                                only=set(args.only) if args.only else None, report=None)
    for c in checks:
        if out.machine:
            print(f"criterion={c.ident} status={'PASS' if c.ok else 'FAIL'} seconds={c.seconds:.2f}")
        else:
            print(c.line)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--machine", action="store_true", help="emit key=value records")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    top = _Parser(prog="shady", description="Exact bounds on shadiness constants of polytopal norms.")
    sub = top.add_subparsers(dest="cmd", parser_class=_Parser, required=True)

    p = sub.add_parser("hull", parents=[common], help="vertices, facets and enclosing constants")
    _polytope_args(p)
    p.add_argument("--emit-obj", metavar="FILE", help="also write a Wavefront OBJ mesh")
    p.set_defaults(fn=cmd_hull)

    p = sub.add_parser("norm", parents=[common], help="gauge of a point")
    _polytope_args(p)
    p.add_argument("--point", required=True, help="coordinates as a//b;c//d;...")
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("proj-norm", parents=[common], help="exact operator norm of a matrix")
    _polytope_args(p)
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=cmd_proj_norm)

    p = sub.add_parser("shady-test", parents=[common], help="sufficient test for shadiness")
    _polytope_args(p)
    p.set_defaults(fn=cmd_shady_test)

    p = sub.add_parser("nonshady-construct", parents=[common], help="norm-one rank-2 projection")
    _polytope_args(p)
    p.set_defaults(fn=cmd_nonshady)

    fk = sub.add_parser("farkas", help="certificate campaigns").add_subparsers(
        dest="fcmd", parser_class=_Parser, required=True)
    p = fk.add_parser("gen", parents=[common])
    _polytope_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plain", action="store_true", help="write uncompressed .csv")
    p.add_argument("--fresh", action="store_true", help="ignore existing files")
    p.add_argument("--track-lambda", action="store_true")
    p.set_defaults(fn=cmd_farkas_gen)
    p = fk.add_parser("check", parents=[common])
    _polytope_args(p)
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_farkas_check)
    p = fk.add_parser("bound", parents=[common])
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c-upper", type=_rational, required=True)
    p.add_argument("--inv-sqrt2", type=_rational, default=farkas.INV_SQRT2_UPPER)
    p.set_defaults(fn=cmd_farkas_bound)

    sk = sub.add_parser("sos", help="sum-of-squares certificates").add_subparsers(
        dest="scmd", parser_class=_Parser, required=True)
    p = sk.add_parser("check", parents=[common])
    _polytope_args(p)
    p.add_argument("--system", default="polytope", help="'toy' or 'polytope'")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--omega-sq", type=_rational)
    p.add_argument("--cert", required=True)
    p.set_defaults(fn=cmd_sos_check)
    p = sk.add_parser("delta", parents=[common])
    p.add_argument("--omega-sq", type=_rational, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_sos_delta)

    p = sub.add_parser("reproduce", parents=[common], help="run the acceptance checks")
    p.add_argument("--campaign-n", type=int, default=25)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--only", type=int, nargs="*")
    p.set_defaults(fn=cmd_reproduce)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args, _Out(args.machine))
    except UsageError as exc:
        print(f"shady: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except farkas.ParseError as exc:
        print(f"shady: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except polytope.DegenerateInput as exc:
        print(f"shady: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
