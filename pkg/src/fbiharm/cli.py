"""Command-line surface: ``fbiharm <command> ...`` (also ``python3 -m fbiharm``).

Exit codes: 0 every verdict as expected, 1 a verdict mismatch, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import catalog
from .catalog import VerificationCase, build_case
from .dsl import profile as dsl_profile
from .errors import (ExprSyntaxError, FbiharmError, InvalidOverride, NonBiharmonicInput, UnknownCase,
                     XVanishes)
from .geometry import ConformalFactor, RotSymMap, WarpedSurface
from .ode import LinearODE2, reduction_of_order_factor, sign_changes, solve_ivp
from .profiles import DEFAULT_EXCLUSION, REAL_LINE, Interval
from .verify import DEFAULT_GRID_N, compare_oracle, emit_report, make_grid, sweep

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _value(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    low = text.strip().lower()
    if low in ("pi", "π"):
        return math.pi
    return text


def _overrides(pairs) -> dict:
    out = {}
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--set expects key=value, got {item!r}")
        out[key.strip()] = _value(val.strip())
    return out


def _case(args) -> VerificationCase:
    return build_case(args.case, _overrides(getattr(args, "set", None)))


def _write_reports(rep, args) -> None:
    if getattr(args, "json", None):
        emit_report(rep, "json", args.json)
    if getattr(args, "csv", None):
        emit_report(rep, "csv", args.csv)


def _status(rep) -> int:
    if rep.verdict == "inconclusive":
        return EXIT_NUMERICAL
    if rep.expected and rep.verdict != rep.expected:
        return EXIT_MISMATCH
    return EXIT_OK


# commands ------------------------------------------------------------------------------

def cmd_catalog_list(args) -> int:
    rows = []
    for name in catalog.CASE_NAMES:
        c = build_case(name)
        rows.append((name, c.mode, c.expected, f"{c.tol:.0e}", c.anchor))
    for name in catalog.BUILDER_NAMES:
        c = build_case(name)
        params = ", ".join(f"{k}={v}" for k, v in catalog.parameters(name).items())
        rows.append((name, c.mode, c.expected, f"{c.tol:.0e}", f"builder({params}): {c.anchor}"))
    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'mode':<21} {'expect':<6} {'tol':<6} anchor")
    for name, mode, exp, tol, anchor in rows:
        print(f"{name:<{width}}  {mode:<21} {exp:<6} {tol:<6} {anchor}")
    return EXIT_OK


def cmd_verify(args) -> int:
    case = _case(args)
    grid = make_grid(case, n=args.grid_n, exclusion=args.exclusion)
    rep = sweep(case, grid, tol=args.tol, mode=args.mode)
    print(rep.summary())
    _write_reports(rep, args)
    return _status(rep)


def cmd_verify_all(args) -> int:
    status = EXIT_OK
    reports = []
    for name in catalog.CASE_NAMES + catalog.BUILDER_NAMES:
        case = build_case(name)
        rep = sweep(case)
        orc = compare_oracle(case)
        ok = rep.matches_expected and orc.verdict == "pass"
        print(f"{rep.summary()} oracle={orc.sup:.1e}:{orc.verdict} -> {'OK' if ok else 'MISMATCH'}")
        if not ok:
            status = EXIT_MISMATCH
        d = rep.to_dict()
        d["oracle"] = orc.oracle
        d["oracle_verdict"] = orc.verdict
        reports.append(d)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(reports, fh, indent=1, sort_keys=True)
    return status


def cmd_oracle(args) -> int:
    case = _case(args)
    rep = compare_oracle(case, make_grid(case, n=args.grid_n))
    for key, val in rep.oracle.items():
        print(f"{key:<20} {val:.3e}")
    print(f"{case.name}: oracle agreement {rep.sup:.3e} (tol {rep.tol:.0e}) -> {rep.verdict}")
    _write_reports(rep, args)
    return EXIT_OK if rep.verdict == "pass" else EXIT_MISMATCH


def cmd_construct_f(args) -> int:
    base = _case(args)
    # the map does not depend on where the case's own factor vanishes
    window = Interval(min(iv.lo for iv in base.working_intervals), max(iv.hi for iv in base.working_intervals))
    if args.lo is not None or args.hi is not None:
        window = Interval(window.lo if args.lo is None else args.lo, window.hi if args.hi is None else args.hi)
    if args.basepoint is not None and not window.lo < args.basepoint < window.hi:
        raise UsageError(f"--basepoint {args.basepoint:g} must lie inside ({window.lo:g}, {window.hi:g})")
    cf = reduction_of_order_factor(base.map, args.c1, args.c2, basepoint=args.basepoint, interval=window)
    cuts = [c for c, _ in sign_changes(cf.f, window)]
    pieces = tuple(window.split(cuts, DEFAULT_EXCLUSION))
    mode = "biharmonic" if args.c2 == 0 else "f-biharmonic"
    case = VerificationCase(f"{base.name}/construct-f", base.map, cf, mode, "pass", pieces,
                            "reduction of order from a biharmonic map", catalog.QUAD_TOL,
                            {"c1": args.c1, "c2": args.c2, "basepoint": args.basepoint})
    show = make_grid(list(pieces), n=max(1, args.print_n // len(pieces)))
    print(f"{'r':>22} {'f(r)':>22}")
    for r, v in zip(show.points, cf.f(show.points)):
        print(f"{r:>22.15g} {v:>22.15g}")
    print("sign chart: " + ", ".join(f"({iv.lo:.6g}, {iv.hi:.6g}):{s:+d}" for iv, s in cf.sign_chart))
    rep = sweep(case, make_grid(case, n=args.grid_n), tol=args.tol)
    print(rep.summary())
    _write_reports(rep, args)
    return _status(rep)


def cmd_solve_ode(args) -> int:
    lo, hi = sorted((args.r0, args.to))
    if lo == hi:
        raise UsageError("--to must differ from --r0")
    dom = Interval(lo, hi)
    p = dsl_profile(args.p, REAL_LINE)
    q = dsl_profile(args.q, REAL_LINE)
    sol = solve_ivp(LinearODE2(p, q, REAL_LINE, f"y'' + ({args.p}) y' + ({args.q}) y = 0"),
                    args.r0, args.y0, args.dy0, dom, tol=args.tol)
    r = np.linspace(lo, hi, args.points)
    if args.r0 > args.to:
        r = r[::-1]
    Y = sol.y.jet(r, 1)
    res = sol.residual(r)
    print(f"{'r':>22} {'y':>22} {'dy':>22} {'residual':>12}")
    for row in zip(r, Y.derivative(0), Y.derivative(1), res):
        print(f"{row[0]:>22.15g} {row[1]:>22.15g} {row[2]:>22.15g} {row[3]:>12.3e}")
    return EXIT_OK


def cmd_residual(args) -> int:
    dom = Interval(args.lo, args.hi)
    sigma = dsl_profile(args.sigma, dom)
    lam = dsl_profile(args.lam, REAL_LINE, var_name="rho")
    rho = dsl_profile(args.rho, dom)
    m = RotSymMap(WarpedSurface(dom, sigma, args.sigma), WarpedSurface(REAL_LINE, lam, args.lam), rho, args.k)
    if args.f:
        f = dsl_profile(args.f, dom)
        cf = ConformalFactor.from_profile(f, dom)
        pieces = tuple(dom.split([iv.lo for iv, _ in cf.sign_chart[1:]], args.exclusion))
    else:
        cf = ConformalFactor.trivial(dom)
        pieces = (dom,)
    mode = args.mode or ("f-biharmonic" if args.f else "biharmonic")
    formulas = {"sigma": args.sigma, "lambda": args.lam, "rho": args.rho}
    if args.f:
        formulas["f"] = args.f
    case = VerificationCase("ad-hoc", m, cf, mode, "pass", pieces, "command-line input",
                            args.tol if args.tol is not None else catalog.JET_TOL, {"k": args.k}, formulas)
    rep = sweep(case, make_grid(case, n=args.grid_n, exclusion=args.exclusion))
    print(rep.summary())
    _write_reports(rep, args)
    return _status(rep)


def cmd_plot(args) -> int:
    case = _case(args)
    rep = sweep(case, make_grid(case, n=args.grid_n))
    emit_report(rep, "csv", args.csv)
    print(f"wrote {len(rep.points)} rows to {args.csv}")
    return EXIT_OK


# parser ----------------------------------------------------------------------------------

def _add_case(p, reports=True):
    p.add_argument("case", help="catalog case or builder name (see `catalog list`)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="parameter override (repeatable)")
    p.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N, help="points per working interval")
    if reports:
        p.add_argument("--json", metavar="PATH", help="write a JSON report")
        p.add_argument("--csv", metavar="PATH", help="write a CSV report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fbiharm", description="Residual verifier for rotationally symmetric "
                                 "biharmonic and f-biharmonic maps between warped surfaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="inspect the case catalog")
    csub = p.add_subparsers(dest="action", required=True)
    csub.add_parser("list", help="table of case names, modes and anchors").set_defaults(func=cmd_catalog_list)

    p = sub.add_parser("verify", help="residual sweep of one case")
    _add_case(p)
    p.add_argument("--tol", type=float)
    p.add_argument("--exclusion", type=float, default=DEFAULT_EXCLUSION)
    p.add_argument("--mode", choices=catalog.MODES, help="residual to evaluate (default: the case's mode)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="every case plus oracle comparisons")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("oracle", help="closed formulas against the first-principles oracle")
    _add_case(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("construct-f", help="reduction-of-order factor for a biharmonic case's map")
    _add_case(p)
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--basepoint", type=float)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--print-n", type=int, default=16, help="how many values of f to print")
    p.set_defaults(func=cmd_construct_f)

    p = sub.add_parser("solve-ode", help="y'' + p y' + q y = 0 from DSL coefficients")
    p.add_argument("--p", required=True, help="DSL expression in r")
    p.add_argument("--q", required=True, help="DSL expression in r")
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--dy0", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_solve_ode)

    p = sub.add_parser("residual", help="ad-hoc case from DSL expressions")
    p.add_argument("--sigma", required=True, help="σ(r)")
    p.add_argument("--lambda", dest="lam", required=True, help="λ(rho)")
    p.add_argument("--rho", required=True, help="ρ(r)")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--f", help="f(r); selects f-biharmonic mode")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--mode", choices=catalog.MODES[:4])
    p.add_argument("--tol", type=float)
    p.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N)
    p.add_argument("--exclusion", type=float, default=DEFAULT_EXCLUSION)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--csv", metavar="PATH")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("plot", help="CSV columns r, rho, f, x, residuals for external plotting")
    _add_case(p, reports=False)
    p.add_argument("--csv", metavar="PATH", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, UnknownCase, InvalidOverride, ExprSyntaxError, NonBiharmonicInput, XVanishes) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FbiharmError, ArithmeticError) as e:
        print(f"numerical failure: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
