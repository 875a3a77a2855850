"""groovekit command line.

Exit codes: 0 success, 1 verification failure, 2 bad flags, 3 evaluation
failure, 4 unreadable profile, 5 rank-deficient fit, 6 no B minimum,
7 PDE solver failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
import warnings

import numpy as np

from . import __version__
from .basis import CERTIFIED_U, SimilarityCoefficients, z_derivative
from .errors import (
    GrooveKitError, NoMinimum, ParseError, RankDeficient, SolveError, StabilityError,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_PARSE = 4
EXIT_RANK = 5
EXIT_NO_MIN = 6
EXIT_ORACLE = 7


class _UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop included within half a step) or a single number."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise _UsageError(f"bad grid {text!r}") from None
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise _UsageError(f"grid must be start:stop:step, got {text!r}")
    start, stop, step = nums
    if step <= 0 or stop < start:
        raise _UsageError(f"grid needs step > 0 and stop >= start, got {text!r}")
    n = int(math.floor((stop - start) / step + 0.5))
    return start + step * np.arange(n + 1)


def _floats(text: str, count: int, what: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise _UsageError(f"{what} must be comma-separated numbers") from None
    if len(vals) != count:
        raise _UsageError(f"{what} needs {count} values")
    return vals


def _out(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _write_profile_csv(fh, t, B, x, yv, note):
    fh.write(f"# t_seconds={t!r}\n")
    fh.write(f"# B_hint={B!r}\n")
    if note:
        fh.write(f"# {note}\n")
    fh.write("x_nm,y_nm\n")
    for xv, val in zip(x, yv):
        fh.write(f"{float(xv)!r},{float(val)!r}\n")


# ------------------------------------------------------------------ eval

def _eval_values(args, x, s):
    from .solutions import (
        PhysicalParams, TwoSidedSolution, amram_solution, evaluate, mullins_solution, y,
    )
    params = PhysicalParams(args.B, args.m)
    if args.named:
        name = args.named
        if name == "mullins":
            return mullins_solution(params, args.t, x)
        if name == "amram":
            return amram_solution(params, args.t, x)
        if name[0] == "y":
            return y(int(name[1]), args.t, x, params)
        return s * z_derivative(int(name[1]), 0, x / s)
    plus = SimilarityCoefficients(_floats(args.coeffs, 4, "--coeffs"))
    minus = SimilarityCoefficients(_floats(args.coeffs_minus, 4, "--coeffs-minus")) \
        if args.coeffs_minus else plus
    sol = TwoSidedSolution(plus, minus, params)
    out = np.empty_like(x)
    nz = x != 0
    if nz.any():
        out[nz] = evaluate(sol, args.t, x[nz])
    out[~nz] = s * plus.c[0]  # root value, the x -> 0+ limit
    return out


def cmd_eval(args):
    from .solutions import similarity_scale
    if bool(args.named) == bool(args.coeffs):
        raise _UsageError("give exactly one of --named or --coeffs")
    if (args.u is None) == (args.x is None):
        raise _UsageError("give exactly one of --u or --x")
    if not (args.t > 0 and args.B > 0):
        raise _UsageError("--t and --B must be positive")
    s = similarity_scale(args.t, args.B)
    x = parse_grid(args.u) * s if args.u is not None else parse_grid(args.x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        values = np.atleast_1d(_eval_values(args, x, s))
    label = args.named or f"coeffs {args.coeffs}"
    with _out(args.output) as fh:
        _write_profile_csv(fh, args.t, args.B, x, values, f"solution: {label}; m={args.m!r}")
    return EXIT_OK


def cmd_basis(args):
    u = parse_grid(args.u)
    table = {"u": u.tolist(), "order": args.order}
    for i in (1, 2, 3, 4):
        table[f"z{i}"] = np.atleast_1d(z_derivative(i, args.order, u)).tolist()
    with _out(args.output) as fh:
        json.dump(table, fh, indent=1)
        fh.write("\n")
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(args):
    from .verify import run_suite
    checks = run_suite(args.suite)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.suite}/{c.name}: measured {c.measured:.3e} (tolerance {c.tolerance:.3e})",
              file=sys.stderr)
    report = {"suite": args.suite, "passed": all(c.passed for c in checks),
              "checks": [c.as_dict() for c in checks]}
    with _out(args.output) as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# ------------------------------------------------------------------ oracle

def cmd_oracle(args):
    from .pde_oracle import GridSpec, RootBoundaryCondition, solve, suggested_length, write_snapshots
    from .solutions import PhysicalParams
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = PhysicalParams(args.B, args.m)
    length = args.length or suggested_length(args.B, args.t_end)
    try:
        grid = GridSpec(length, args.cells, args.dt, args.t_end, args.theta)
    except GrooveKitError as exc:
        raise _UsageError(str(exc)) from None
    bc = RootBoundaryCondition.for_params(args.bc, params)
    times = [float(v) for v in args.snapshots.split(",")] if args.snapshots else [args.t_end]
    result = solve(grid, bc, params, output_times=times)
    paths = write_snapshots(result, args.out_dir, B_hint=args.B, max_u=args.max_u)
    depth_path = os.path.join(args.out_dir, "depth.csv")
    with open(depth_path, "w", encoding="ascii") as fh:
        fh.write("t_s,depth_nm\n")
        for t, d in zip(result.depth_t, result.depth):
            fh.write(f"{float(t)!r},{float(d)!r}\n")
    summary = {"snapshots": paths, "depth": depth_path,
               "max_relative_mass_change": float(np.max(np.abs(result.mass_change)))
               if result.mass_change.size else 0.0}
    print(json.dumps(summary, indent=2))
    return EXIT_OK


# ------------------------------------------------------------------ fit

def _config_from(args, profile):
    from .fitting import FitConfig
    B = args.B if args.B is not None else (profile.B_hint or 1.0)
    rng = (1e-3 * B, 1e3 * B)
    if args.B_range:
        lo, _, hi = args.B_range.partition(":")
        try:
            rng = (float(lo), float(hi))
        except ValueError:
            raise _UsageError("--B-range must be lo:hi") from None
    try:
        return FitConfig(model=args.model, B=B, fit_B=args.fit_B, B_range=rng,
                         fit_root_offset=args.fit_root_offset,
                         continuity_constraint=args.continuity,
                         decay_constraint=args.decay)
    except GrooveKitError as exc:
        raise _UsageError(str(exc)) from None


def cmd_fit(args):
    from .fitting import compare_models, fit_linear, fit_with_B, load_profile
    from .solutions import evaluate
    profile = load_profile(args.input)
    config = _config_from(args, profile)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fit = fit_with_B(profile, config) if config.fit_B else fit_linear(profile, config.B, config)
        if not args.no_compare:
            rows, preferred, _ = compare_models(profile, config)
            fit.model_comparison = rows
            fit.preferred_model = preferred
    with _out(args.output) as fh:
        fh.write(fit.to_json())
        fh.write("\n")
    if args.emit_model:
        x = profile.x - fit.root_offset
        model = np.empty_like(x)
        nz = x != 0
        model[nz] = evaluate(fit.coeffs, profile.anneal_time, x[nz])
        model[~nz] = fit.boundary_derivatives["plus"][0]
        with open(args.emit_model, "w", encoding="utf-8") as fh:
            _write_profile_csv(fh, profile.anneal_time, fit.B_estimate, profile.x, model,
                               f"fitted model: {fit.model}")
    return EXIT_OK


def cmd_compare(args):
    from .fitting import compare_models, load_profile
    profile = load_profile(args.input)
    config = _config_from(args, profile)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows, preferred, _ = compare_models(profile, config)
    clean = [{k: (None if isinstance(v, float) and not math.isfinite(v) else v)
              for k, v in r.items()} for r in rows]
    with _out(args.output) as fh:
        json.dump({"schema": "groovekit-compare/1", "preferred_model": preferred,
                   "models": clean}, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _fit_flags(p):
    p.add_argument("input", help="profile CSV")
    p.add_argument("--model", default="general4",
                   choices=["general4", "decaying", "general-decaying", "mullins", "amram", "flat"])
    p.add_argument("--B", type=float, default=None, help="fixed B (default: B_hint or 1)")
    p.add_argument("--fit-B", dest="fit_B", action="store_true")
    p.add_argument("--B-range", dest="B_range", default=None, metavar="LO:HI")
    p.add_argument("--fit-root-offset", action="store_true")
    p.add_argument("--continuity", action="store_true", help="tie C1+ = C1-")
    p.add_argument("--decay", action="store_true", help="restrict to decaying solutions")
    p.add_argument("-o", "--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="groovekit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"groovekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a solution on a grid")
    p.add_argument("--named", choices=["mullins", "amram", "y1", "y2", "y3", "y4",
                                       "z1", "z2", "z3", "z4"])
    p.add_argument("--coeffs", help="C1,C2,C3,C4 for x > 0 (and x < 0 unless --coeffs-minus)")
    p.add_argument("--coeffs-minus", help="C1,C2,C3,C4 for x < 0")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--m", type=float, default=0.2)
    p.add_argument("--u", help="similarity-variable grid start:stop:step")
    p.add_argument("--x", help="position grid start:stop:step")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("basis", help="tabulate z1..z4 (JSON)")
    p.add_argument("--u", required=True)
    p.add_argument("--order", type=int, default=0, choices=range(5))
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("suite", nargs="?", default="all",
                   choices=["identities", "routes", "asymptotics", "all"])
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="finite-difference groove evolution")
    p.add_argument("--bc", default="mullins", choices=["mullins", "amram"])
    p.add_argument("--m", type=float, default=0.2)
    p.add_argument("--B", type=float, default=1.0)
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=2e-3)
    p.add_argument("--cells", type=int, default=480)
    p.add_argument("--length", type=float, default=None)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--snapshots", default=None, help="comma-separated output times")
    p.add_argument("--max-u", type=float, default=CERTIFIED_U,
                   help="written snapshot extent in u (default %(default)s)")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fit", help="fit a profile, JSON report")
    _fit_flags(p)
    p.add_argument("--emit-model", default=None, help="write the fitted curve as CSV")
    p.add_argument("--no-compare", action="store_true", help="skip the model comparison")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="model comparison table, JSON")
    _fit_flags(p)
    p.set_defaults(func=cmd_compare)
    return parser


_GRID_FLAGS = ("--u", "--x")


def _attach_grid_values(argv):
    # "--u -6:6:0.05" would otherwise read the grid as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok in _GRID_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_grid_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"groovekit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"groovekit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RankDeficient as exc:
        print(f"groovekit: {exc}", file=sys.stderr)
        return EXIT_RANK
    except NoMinimum as exc:
        print(f"groovekit: {exc}", file=sys.stderr)
        return EXIT_NO_MIN
    except (StabilityError, SolveError) as exc:
        print(f"groovekit: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except OSError as exc:
        print(f"groovekit: {exc}", file=sys.stderr)
        return EXIT_PARSE if args.command in ("fit", "compare") else EXIT_EVAL
    except GrooveKitError as exc:
        print(f"groovekit: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
