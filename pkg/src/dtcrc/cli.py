"""Command-line interface: vertex, dt, crc {vertex,global}, quotient.

Exit codes: 0 success or pass, 1 check failed, 2 invalid input.  The
thread count for gluing sums is read from DTCRC_THREADS.
"""

from __future__ import annotations

import argparse
import json
import sys

from .partitions import (
    ColoredPartition, Partition, PartitionError, chi_over_dim, format_quotient, from_colored,
    parse_quotient, to_colored,
)
from .series import SeriesError


class InputError(Exception):
    pass


def _partition(text, flag):
    try:
        return Partition.parse(text or "")
    except (PartitionError, ValueError) as exc:
        raise InputError(f"{flag}: {exc}") from exc


def _emit(series, fmt):
    if fmt == "json":
        return json.dumps(series.to_json(), sort_keys=True)
    return series.to_text()


def _emit_report(report, fmt):
    if fmt == "json":
        return json.dumps(report.to_json(), sort_keys=True, default=str)
    text = report.to_text()
    return ("PASS\n" if report.passed else "FAIL\n") + text


def _load_diagram(path):
    from .geometry import WebDiagram, validate_diagram
    try:
        d = WebDiagram.load(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read diagram {path}: {exc}") from exc
    rep = validate_diagram(d)
    if not rep.ok:
        raise InputError("invalid diagram\n" + rep.to_text())
    return d


def cmd_vertex(args):
    from .enumeration import oracle_vertex
    from .vertex import orbifold_vertex_operator, orbifold_vertex_schur
    rp = _partition(args.rho_plus, "--rho-plus")
    rm = _partition(args.rho_minus, "--rho-minus")
    lam = ColoredPartition(_partition(args.lambda_, "--lambda"), args.n)
    if not lam.is_balanced():
        raise InputError(f"--lambda: {lam.shape} is not balanced for n={args.n}")
    fn = {"operator": orbifold_vertex_operator, "schur": orbifold_vertex_schur,
          "oracle": oracle_vertex}[args.method]
    value = fn(rp, rm, lam, args.n, args.max_degree, relative=args.relative).value
    return 0, _emit(value, args.format)


def cmd_dt(args):
    from .geometry import dt_series
    d = _load_diagram(args.diagram)
    value = dt_series(d, args.max_degree, args.novikov_degree)
    return 0, _emit(value, args.format)


def cmd_crc_vertex(args):
    from .crc import check_vertex_crc
    rp = _partition(args.rho_plus, "--rho-plus")
    rm = _partition(args.rho_minus, "--rho-minus")
    lam = ColoredPartition(_partition(args.lambda_, "--lambda"), args.n)
    if not lam.is_balanced():
        raise InputError(f"--lambda: {lam.shape} is not balanced for n={args.n}")
    report = check_vertex_crc(rp, rm, lam.shape, args.n, args.max_degree, region=args.region,
                              corrupt_prefactor=args.corrupt_prefactor)
    return (0 if report.passed else 1), _emit_report(report, args.format)


def cmd_crc_global(args):
    from .crc import check_global_crc
    d = _load_diagram(args.diagram)
    report = check_global_crc(d, args.max_degree, args.novikov_degree)
    return (0 if report.passed else 1), _emit_report(report, args.format)


def cmd_quotient(args):
    if (args.lambda_ is None) == (args.quotient is None):
        raise InputError("give exactly one of --lambda or --quotient")
    if args.lambda_ is not None:
        lam = ColoredPartition(_partition(args.lambda_, "--lambda"), args.n)
        if not lam.is_balanced():
            raise InputError(f"--lambda: {lam.shape} is not balanced for n={args.n}")
        q = from_colored(lam)
        other = format_quotient(q)
    else:
        try:
            q = parse_quotient(args.quotient, args.n)
        except (PartitionError, ValueError) as exc:
            raise InputError(f"--quotient: {exc}") from exc
        lam = to_colored(q)
        other = str(lam.shape)
    sign = chi_over_dim(lam)
    if args.format == "json":
        out = {"lambda": list(lam.shape), "quotient": [list(x) for x in q], "chi_over_dim": sign}
        return 0, json.dumps(out, sort_keys=True)
    return 0, f"{other}\nchi/dim: {sign:+d}"


def build_parser():
    p = argparse.ArgumentParser(prog="dtcrc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")

    def legs(sp):
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--rho-plus", default="")
        sp.add_argument("--rho-minus", default="")
        sp.add_argument("--lambda", dest="lambda_", default="")
        sp.add_argument("--max-degree", type=int, required=True)

    v = sub.add_parser("vertex", help="reduced orbifold vertex")
    legs(v)
    v.add_argument("--method", choices=["operator", "schur", "oracle"], default="operator")
    v.add_argument("--relative", action="store_true",
                   help="window [lead, lead + max-degree] instead of absolute")
    common(v)
    v.set_defaults(func=cmd_vertex)

    dt = sub.add_parser("dt", help="DT series of a web diagram")
    dt.add_argument("--diagram", required=True)
    dt.add_argument("--max-degree", type=int, required=True)
    dt.add_argument("--novikov-degree", type=int, default=0)
    common(dt)
    dt.set_defaults(func=cmd_dt)

    crc = sub.add_parser("crc", help="crepant resolution checks")
    crc_sub = crc.add_subparsers(dest="which", required=True)
    cv = crc_sub.add_parser("vertex")
    legs(cv)
    cv.add_argument("--region", choices=["resolution", "orbifold"], default="resolution")
    cv.add_argument("--corrupt-prefactor", action="store_true", help=argparse.SUPPRESS)
    common(cv)
    cv.set_defaults(func=cmd_crc_vertex)
    cg = crc_sub.add_parser("global")
    cg.add_argument("--diagram", required=True)
    cg.add_argument("--max-degree", type=int, required=True)
    cg.add_argument("--novikov-degree", type=int, default=1)
    common(cg)
    cg.set_defaults(func=cmd_crc_global)

    qt = sub.add_parser("quotient", help="colored partition <-> n-quotient")
    qt.add_argument("--n", type=int, required=True)
    qt.add_argument("--lambda", dest="lambda_", default=None)
    qt.add_argument("--quotient", default=None)
    common(qt)
    qt.set_defaults(func=cmd_quotient)
    return p


def run(argv=None):
    """Run the CLI; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), "", ""
    try:
        code, out = args.func(args)
        return code, out, ""
    except (InputError, PartitionError, SeriesError) as exc:
        return 2, "", f"error: {exc}"


def main(argv=None):
    code, out, err = run(argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
