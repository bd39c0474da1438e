"""Command-line front end.

Subcommands: eval (pdf), cdf, quantile, transform, compose, sample, verify,
figure, table. Exit codes: 0 success / all checks passed, 1 verification
failure, 2 usage or domain error, 3 numerical non-convergence, 4 I/O error.

q values on the command line may be rationals ("5/3") or decimals; rationals
are parsed exactly, so table-row indices hit the closed-form strategy match.
CSV output is deterministic: 17-significant-digit decimals, LF endings,
written to a temporary file and renamed on success.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import verify as verify_mod
from .errors import ConvergenceError, DomainError, QGMapsError
from .groupoid import closed_form_rows, compose, eval_closed_form, make_map
from .qgauss import make_qgaussian

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_FIG1A_TARGETS = ("5/3", "7/5", "9/7", "25/23")
_FIG1B_TARGETS = ("7/5", "9/7", "11/9", "25/23")


def parse_q(text: str) -> float:
    """Parse an entropic index: exact rational 'p/q' or decimal."""
    text = text.strip()
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse q value {text!r}") from exc


def parse_grid(spec: str):
    """Parse 'lo:hi:n' into an inclusive linspace."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid spec must be lo:hi:n, got {spec!r}")
    lo, hi = float(parts[0]), float(parts[1])
    n = int(parts[2])
    if n < 2 or not (hi > lo):
        raise DomainError(f"grid spec needs hi > lo and n >= 2, got {spec!r}")
    return np.linspace(lo, hi, n)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _default_outdir() -> str:
    return os.environ.get("QGMAPS_OUTPUT_DIR", ".")


def write_csv(path: str, header, rows) -> None:
    """Atomic CSV write: temp file in the target directory, rename on success."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v)
                                  for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_eval(args) -> int:
    d = make_qgaussian(parse_q(args.q), args.beta)
    print(_fmt(d.pdf(args.x)))
    return EXIT_OK


def _cmd_cdf(args) -> int:
    d = make_qgaussian(parse_q(args.q), args.beta)
    print(_fmt(d.cdf(args.z)))
    return EXIT_OK


def _cmd_quantile(args) -> int:
    d = make_qgaussian(parse_q(args.q), args.beta)
    print(_fmt(d.quantile(args.p)))
    return EXIT_OK


def _cmd_transform(args) -> int:
    m = make_map(parse_q(args.q), parse_q(args.q_prime))
    if args.grid is not None:
        zs = parse_grid(args.grid)
        rows = [(float(z), m.eval(float(z))) for z in zs]
        if args.output:
            write_csv(args.output, ("z", "gamma"), rows)
            print(f"wrote {args.output}")
        else:
            print("z,gamma")
            for z, g in rows:
                print(f"{_fmt(z)},{_fmt(g)}")
        return EXIT_OK
    if args.z is None:
        raise DomainError("transform needs --z or --grid")
    val = m.eval(args.z)
    print(_fmt(val))
    if args.check:
        rep = verify_mod.check_probability_preservation(m, abs(args.z), 1e-8)
        print(rep.line())
        if rep.status == "inconclusive":
            return EXIT_NUMERICAL
        if not rep.passed:
            return EXIT_VERIFY_FAIL
    return EXIT_OK


def _cmd_compose(args) -> int:
    q0 = parse_q(args.q)
    q1 = parse_q(args.q_prime)
    q2 = parse_q(args.q_double_prime)
    chain = compose(make_map(q1, q2), make_map(q0, q1))
    direct = make_map(q0, q2)
    z = args.z
    cz = chain.eval(z)
    dz = direct.eval(z)
    print(f"composed:{_fmt(cz)} direct:{_fmt(dz)} gap:{_fmt(abs(cz - dz))}")
    return EXIT_OK


def _cmd_sample(args) -> int:
    d = make_qgaussian(parse_q(args.q), args.beta)
    xs = d.sample(args.n, args.seed)
    rows = [(float(v),) for v in xs]
    if args.output:
        write_csv(args.output, ("x",), rows)
        print(f"wrote {args.output}")
    else:
        print("x")
        for (v,) in rows:
            print(_fmt(v))
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.suite not in verify_mod.SUITE_NAMES:
        print(f"unknown suite {args.suite!r}; choose from {verify_mod.SUITE_NAMES}",
              file=sys.stderr)
        return EXIT_USAGE
    reports = verify_mod.run_suite(args.suite, tol=args.tol, seed=args.seed,
                                   fault=args.inject_fault)
    n_fail = sum(1 for r in reports if not r.passed and r.status != "inconclusive")
    n_inconclusive = sum(1 for r in reports if r.status == "inconclusive")
    if args.json:
        payload = [{"name": r.name, "inputs": list(r.inputs),
                    "residual": None if math.isnan(r.residual) else r.residual,
                    "tolerance": r.tolerance, "passed": r.passed,
                    "status": r.status} for r in reports]
        print(json.dumps({"suite": args.suite, "seed": args.seed,
                          "reports": payload,
                          "failed": n_fail, "inconclusive": n_inconclusive},
                         indent=2, sort_keys=True))
    else:
        for r in reports:
            print(r.line())
        print(f"suite={args.suite} checks={len(reports)} failed={n_fail} "
              f"inconclusive={n_inconclusive}")
    if n_fail:
        return EXIT_VERIFY_FAIL
    if n_inconclusive:
        return EXIT_NUMERICAL
    return EXIT_OK


def _figure_rows_fig1(source_q: float, targets, zs):
    maps = [make_map(source_q, parse_q(t)) for t in targets]
    rows = []
    for z in zs:
        rows.append(tuple([float(z)] + [m.eval(float(z)) for m in maps]))
    return rows


def _default_figure_grid():
    # symmetric by construction so the odd columns mirror exactly
    pos = np.linspace(0.0, 5.0, 101)
    return np.concatenate([-pos[:0:-1], pos])


def _cmd_figure(args) -> int:
    out = args.output or os.path.join(_default_outdir(), f"{args.id}.csv")
    zs = parse_grid(args.grid) if args.grid else _default_figure_grid()
    if args.id == "fig1a":
        header = ["z"] + [f"gamma_qprime_{t}" for t in _FIG1A_TARGETS]
        rows = _figure_rows_fig1(2.0, _FIG1A_TARGETS, zs)
    elif args.id == "fig1b":
        header = ["z"] + [f"gamma_qprime_{t}" for t in _FIG1B_TARGETS]
        rows = _figure_rows_fig1(float(Fraction(5, 3)), _FIG1B_TARGETS, zs)
    elif args.id == "fig2":
        header = ["kind", "q", "q_prime"]
        rows = [("table_point", float(qs), float(qt))
                for qs, qt in closed_form_rows().values()]
        # open square (1,3)^2 within which the transformation family acts
        rows += [("boundary_corner", 1.0, 1.0), ("boundary_corner", 1.0, 3.0),
                 ("boundary_corner", 3.0, 1.0), ("boundary_corner", 3.0, 3.0)]
    else:
        print(f"unknown figure id {args.id!r}", file=sys.stderr)
        return EXIT_USAGE
    write_csv(out, header, rows)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_table(args) -> int:
    zs = (0.5, 1.0, 2.0)
    print(f"{'row':<12} {'z':>4} {'closed_form':>24} {'general':>24} {'rel_diff':>10}")
    worst = 0.0
    for rid, (qs, qt) in closed_form_rows().items():
        m = make_map(qs, qt)
        for z in zs:
            ref = eval_closed_form(rid, z)
            got = m.eval(z)
            rel = abs(got - ref) / abs(ref)
            worst = max(worst, rel)
            print(f"{rid:<12} {z:>4.1f} {ref:>24.17g} {got:>24.17g} {rel:>10.2e}")
    print(f"max relative difference: {worst:.2e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qgmaps",
        description="q-Gaussian distributions and probability-preserving "
                    "scaling maps between them.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_q(p, name="--q", required=True, help_text="entropic index (rational like 5/3 or decimal)"):
        p.add_argument(name, required=required, help=help_text)

    p = sub.add_parser("eval", help="evaluate the density G_q(x)")
    add_q(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("cdf", help="cumulative distribution function")
    add_q(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--z", type=float, required=True)
    p.set_defaults(func=_cmd_cdf)

    p = sub.add_parser("quantile", help="inverse cdf")
    add_q(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=_cmd_quantile)

    p = sub.add_parser("transform", help="evaluate the scaling map source->target")
    add_q(p, help_text="source index q")
    p.add_argument("--q-prime", required=True, dest="q_prime", help="target index q'")
    p.add_argument("--z", type=float)
    p.add_argument("--grid", help="lo:hi:n for CSV output")
    p.add_argument("--check", action="store_true",
                   help="also verify probability preservation by quadrature")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("compose", help="compose q->q' with q'->q'' and compare to the direct map")
    add_q(p)
    p.add_argument("--q-prime", required=True, dest="q_prime")
    p.add_argument("--q-double-prime", required=True, dest="q_double_prime")
    p.add_argument("--z", type=float, required=True)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("sample", help="seeded deterministic sampling")
    add_q(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="structured output")
    p.add_argument("--inject-fault", type=float, default=0.0,
                   help="negative-control fault of the given relative size "
                        "(testing aid; nonzero values must make the suite fail)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figure", help="export figure data as CSV")
    p.add_argument("--id", required=True, choices=("fig1a", "fig1b", "fig2"))
    p.add_argument("--grid", help="lo:hi:n z-grid override")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("table", help="closed forms vs the general map")
    p.set_defaults(func=_cmd_table)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, QGMapsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
