"""Command-line front end.

Subcommands: ``cubature-check``, ``kernel``, ``lebesgue``, ``growth`` and
``approx``. Exit codes: 0 success, 1 numerical-acceptance failure, 2 usage
or I/O error.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import sys

import numpy as np

from . import _core, oracle
from .cubature import (
    CubatureError,
    EXACTNESS_TOL,
    ball_rule,
    exactness_report,
    read_rule,
    sphere_rule,
)
from .domains import BallWeight, WeightedBall
from .hyperinterp import (
    build,
    growth_fit,
    lebesgue_constant,
    sphere_lebesgue_constant,
    sup_error,
)
from .kernels import BallKernelSpec, ball_kernel

CSV_HEADER = "d,mu_numerator_over_2,n,rule_degree,rule_nodes,grid_points,lebesgue_estimate,argmax_radius"

FUNCTIONS = {
    "exp1": lambda x: np.exp(x[:, 0]),
    "runge": lambda x: 1.0 / (1.0 + 25.0 * np.sum(x * x, axis=1)),
    "absnorm": lambda x: np.sqrt(np.sum(x * x, axis=1)),
    "const": lambda x: np.full(x.shape[0], 1.0),
}

KERNEL_CHECK_TOL = 1e-8


class UsageError(Exception):
    pass


def _fmt(v):
    return f"{v:.17g}"


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("degrees must be nonnegative")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("degree list must be strictly increasing")
    return vals


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _pos(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _point(text):
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed point {text!r}")


def _load_rule(path):
    try:
        with open(path) as fh:
            return read_rule(fh)
    except OSError as exc:
        raise UsageError(f"cannot read rule file {path}: {exc.strerror}")
    except CubatureError as exc:
        raise UsageError(f"{path}: {exc}")


# -- subcommands ---------------------------------------------------------------


def cmd_cubature_check(args, out):
    if args.rule_file:
        rule = _load_rule(args.rule_file)
    elif args.degree is None:
        raise UsageError("--degree is required unless --rule-file is given")
    elif args.domain == "ball":
        rule = ball_rule(BallWeight(args.d, args.m), args.degree)
    else:
        rule = sphere_rule(args.dim, args.degree)
    rep = exactness_report(rule, tolerance=EXACTNESS_TOL)
    print(f"rule {rule.name or '?'} on {rule.domain}, degree {rule.degree}, {len(rule)} nodes", file=out)
    if args.verbose:
        print(rep.format(), file=out)
    else:
        for beta, q, e, err in rep.failures:
            print(f"FAIL {beta}: rule {_fmt(q)} exact {_fmt(e)} rel.err {err:.3e}", file=out)
        print(
            f"{len(rep.rows)} monomials, {len(rep.failures)} failures, "
            f"max relative error {rep.max_error:.3e} (tolerance {rep.tolerance:g})",
            file=out,
        )
    return 0 if rep.passed else 1


def _random_ball_point(rng, d):
    v = rng.normal(size=d)
    return v / np.linalg.norm(v) * rng.random() ** (1.0 / d)


def cmd_kernel(args, out):
    w = BallWeight(args.d, args.m)
    rng = np.random.default_rng(args.seed)
    x = args.x if args.x is not None else _random_ball_point(rng, args.d)
    y = args.y if args.y is not None else _random_ball_point(rng, args.d)
    for name, p in (("x", x), ("y", y)):
        if p.shape != (args.d,):
            raise UsageError(f"{name} must have {args.d} coordinates")
        if np.linalg.norm(p) > 1.0 + 1e-12:
            raise UsageError(f"{name} = {p.tolist()} lies outside the unit ball")
    value = ball_kernel(BallKernelSpec(w, args.n), x, y)
    print(repr(value), file=out)
    if not args.check_onb:
        return 0
    try:
        basis = oracle.build_onb(WeightedBall(w), args.n)
    except oracle.OracleError as exc:
        print(f"oracle unavailable: {exc}", file=out)
        return 0
    ref = oracle.onb_reproducing_kernel(basis, args.n, x, y)
    gap = abs(value - ref) / abs(ref) if ref != 0 else abs(value)
    print(f"oracle {ref!r}", file=out)
    print(f"relative gap {gap:.3e}", file=out)
    return 0 if gap <= KERNEL_CHECK_TOL else 1


def _lebesgue_rows(args):
    rule_file = _load_rule(args.rule_file) if args.rule_file else None
    rows = []
    for n in args.n_list:
        if args.domain == "sphere":
            rule = rule_file or sphere_rule(args.dim, 2 * n)
            rep = sphere_lebesgue_constant(args.dim, n, rule, threads=args.threads,
                                           grid_scale=args.grid_scale)
            d, m = args.dim, 0
        else:
            w = BallWeight(args.d, args.m)
            rule = rule_file or ball_rule(w, 2 * n)
            op = build(w, n, rule)
            rep = lebesgue_constant(op, threads=args.threads, grid_scale=args.grid_scale)
            d, m = args.d, args.m
        rows.append((d, m, n, rep))
    return rows


def _csv(rows):
    lines = [CSV_HEADER]
    for d, m, n, rep in rows:
        lines.append(",".join([
            str(d), str(m), str(n), str(rep.rule_degree), str(rep.rule_nodes), str(rep.grid_points),
            _fmt(rep.estimate), _fmt(rep.argmax_radius),
        ]))
    return "\n".join(lines) + "\n"


@contextlib.contextmanager
def _sink(path, out):
    if not path:
        yield out
        return
    try:
        fh = open(path, "w", newline="\n", encoding="ascii")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}")
    with fh:
        yield fh


def _expected_exponent(args):
    if args.domain == "sphere":
        return (args.dim - 1) / 2.0
    return (args.d - 1) / 2.0 + args.m / 2.0


def cmd_lebesgue(args, out):
    rows = _lebesgue_rows(args)
    with _sink(args.out, out) as fh:
        fh.write(_csv(rows))
    return 0


def cmd_growth(args, out):
    if len(args.n_list) < 4:
        raise UsageError("growth needs at least 4 degrees in --n-list")
    expected = _expected_exponent(args)
    if args.self_test:
        pts = [(n, 3.0 * n ** expected) for n in args.n_list]
        body = ""
    else:
        rows = _lebesgue_rows(args)
        pts = [(n, rep.estimate) for _, _, n, rep in rows]
        body = _csv(rows)
    try:
        fit = growth_fit(pts)
    except ValueError as exc:
        raise UsageError(str(exc))
    tail = f"slope,{_fmt(fit.slope)},expected,{_fmt(expected)},residual,{_fmt(fit.max_abs_residual)}\n"
    with _sink(args.out, out) as fh:
        fh.write(body + tail)
    if args.tolerance is not None and abs(fit.slope - expected) > args.tolerance:
        print(f"slope {fit.slope:.4f} differs from {expected:g} by more than {args.tolerance:g}",
              file=sys.stderr)
        return 1
    return 0


def cmd_approx(args, out):
    w = BallWeight(args.d, args.m)
    f = FUNCTIONS[args.function]
    ns = args.n_list or [args.n]
    print("n,rule_degree,sup_error", file=out)
    for n in ns:
        op = build(w, n, ball_rule(w, 2 * n))
        err = sup_error(op, f, threads=args.threads)
        print(f"{n},{2 * n},{_fmt(err)}", file=out)
    return 0


# -- parser --------------------------------------------------------------------


def _common(p, ball=True, sphere=False):
    if ball:
        p.add_argument("--d", type=_pos, default=2, help="ball dimension")
        p.add_argument("--m", type=_pos, default=1, help="weight index, mu = m/2")
    if sphere:
        p.add_argument("--domain", choices=("ball", "sphere"), default="ball")
        p.add_argument("--dim", type=_pos, default=2, help="sphere dimension")
    p.add_argument("--threads", type=_pos, default=_core.default_threads())
    p.add_argument("--seed", type=int, default=0, help="seed for random test points")
    p.add_argument("--rule-file", help="cubature rule in text format, overrides built-in rules")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="hyperball", description="Hyperinterpolation on Gegenbauer-weighted unit balls."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cubature-check", help="verify rule exactness against exact monomial integrals")
    _common(p, sphere=True)
    p.add_argument("--degree", type=_nonneg, help="rule degree (taken from the file with --rule-file)")
    p.add_argument("--verbose", action="store_true", help="print the full monomial table")
    p.set_defaults(func=cmd_cubature_check)

    p = sub.add_parser("kernel", help="evaluate the ball reproducing kernel K_n(w_{m/2}; x, y)")
    _common(p)
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--x", type=_point, help="comma-separated coordinates (random if omitted)")
    p.add_argument("--y", type=_point, help="comma-separated coordinates (random if omitted)")
    p.add_argument("--check-onb", action="store_true", help="compare with the Gram-Schmidt oracle")
    p.set_defaults(func=cmd_kernel)

    for name, func, helptext in (
        ("lebesgue", cmd_lebesgue, "Lebesgue constant estimates as CSV"),
        ("growth", cmd_growth, "Lebesgue estimates plus a log-log growth fit"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p, sphere=True)
        p.add_argument("--n-list", type=_int_list, required=True)
        p.add_argument("--grid-scale", type=float, default=None,
                       help="grid resolution multiplier G/n (default depends on dimension)")
        p.add_argument("--out", help="write CSV here instead of stdout")
        p.set_defaults(func=func)
        if name == "growth":
            p.add_argument("--self-test", action="store_true",
                           help="fit an injected exact power law instead of measuring")
            p.add_argument("--tolerance", type=float, default=None,
                           help="exit 1 if |slope - expected| exceeds this")

    p = sub.add_parser("approx", help="sup-norm error of L_n f for a built-in function")
    _common(p)
    p.add_argument("--function", choices=sorted(FUNCTIONS), required=True)
    p.add_argument("--n", type=_nonneg, default=4)
    p.add_argument("--n-list", type=_int_list)
    p.set_defaults(func=cmd_approx)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, CubatureError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


def run(argv):
    """Run the CLI in-process and return ``(exit_code, stdout_text)``."""
    buf = io.StringIO()
    try:
        code = main(argv, out=buf)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
