"""Command-line front end.

Subcommands: sum, roots, approx, sieve-bound, rho, constants, experiment,
verify.  Outputs are deterministic CSV or JSON with the run configuration in
a provenance header; grid-style reports can render a companion PNG with
--plot.  Exit status: 0 success, 1 verification failure or I/O error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from math import log

from . import __version__
from .arith import CLASS_NUMBER_ONE, FormParameter, Sieve, set_factor_seed
from .approx import iter_approximations
from .calibration import load_calibration
from .constants import g_euler, l_value, theorem_constants
from .expsums import M_RULES, dyadic_grid, sieve_bound_study
from .output import RunConfig, emit_csv, emit_json
from .rho import RhoTable
from .roots import (
    bijection_branch,
    representations_of,
    roots_by_lifting,
    roots_from_representations,
)
from .sums import (
    brute_force_s,
    decomposition_discrepancy,
    hyperbola_s,
    residual_slope,
    residual_study,
)
from .verify import SUITES, suite_approx, suite_bijection, suite_sieve_growth


def _default_threads() -> int:
    env = os.environ.get("DIVFORM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="divform",
                                  description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def common(p, form_required=True):
        p.add_argument("--form", type=int, required=form_required,
                       help=f"N from {CLASS_NUMBER_ONE}")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--seed", type=int, default=None,
                       help="seed for the factoring splitter")

    p = sub.add_parser("sum", help="exact S_N(x) by either engine")
    common(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--engine", choices=("brute", "hyperbola", "both"),
                   default="hyperbola")
    p.add_argument("--diagnostics", action="store_true",
                   help="also evaluate the classical-threshold variant")

    p = sub.add_parser("roots", help="root sets and representations mod d")
    common(p)
    p.add_argument("--modulus", type=int, required=True)

    p = sub.add_parser("approx", help="rational approximations for d <= dmax")
    common(p)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("sieve-bound", help="large-sieve sum across a dyadic grid")
    common(p)
    p.add_argument("--dmin", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--h", type=int, default=16, dest="h_max")
    p.add_argument("--m-rule", choices=sorted(M_RULES), default="d")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("rho", help="rho table with the error function")
    common(p)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("constants", help="asymptotic coefficients with uncertainty")
    common(p)
    p.add_argument("--cutoff", type=int, default=100_000)

    p = sub.add_parser("experiment", help="residual study over an x grid")
    common(p)
    p.add_argument("--grid", required=True,
                   help="geometric grid start:stop:ratio, e.g. 512:4096:2")
    p.add_argument("--cutoff", type=int, default=100_000)
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("verify", help="run a bundled verification suite")
    common(p, form_required=False)
    p.add_argument("--suite", required=True,
                   choices=sorted(SUITES) + ["all"])
    p.add_argument("--dmax", type=int, default=None)
    return top


def _parse_grid(spec: str) -> "list[int]":
    try:
        start_s, stop_s, ratio_s = spec.split(":")
        start, stop, ratio = int(start_s), int(stop_s), float(ratio_s)
        if start < 1 or stop < start or ratio <= 1:
            raise ValueError
    except ValueError:
        raise SystemExit(2)
    out = []
    x = float(start)
    while round(x) <= stop:
        if not out or round(x) != out[-1]:
            out.append(round(x))
        x *= ratio
    return out


def _param(args) -> FormParameter:
    try:
        return FormParameter.make(args.form)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _config(args, **extra) -> RunConfig:
    # provenance covers the computation, not the destination or side renders
    skip = ("subcommand", "out", "plot")
    opts = {k: v for k, v in vars(args).items()
            if k not in skip and v is not None}
    opts.update(extra)
    return RunConfig(args.subcommand, opts)


def _cmd_sum(args) -> int:
    param = _param(args)
    record: dict = {"N": param.n, "x": args.x}
    if args.engine in ("brute", "both"):
        record["S_brute"] = brute_force_s(param, args.x)
    if args.engine in ("hyperbola", "both"):
        d = hyperbola_s(param, args.x)
        record.update({"R": d.r_sum, "Q": d.q_sum, "T": d.t_sum,
                       "S": d.s_sum, "threshold": d.threshold})
    if args.engine == "both":
        record["engines_agree"] = record["S_brute"] == record["S"]
    if args.diagnostics:
        diag = decomposition_discrepancy(param, args.x)
        cl = diag["classical"]
        record["classical"] = {"R": cl.r_sum, "Q": cl.q_sum, "T": cl.t_sum,
                               "S": cl.s_sum, "threshold": cl.threshold}
        record["s_difference"] = diag["s_difference"]
    emit_json(_config(args), record, args.out)
    if args.engine == "both" and not record["engines_agree"]:
        return 1
    return 0


def _cmd_roots(args) -> int:
    param = _param(args)
    d = args.modulus
    lifted = roots_by_lifting(param, d)
    branch = bijection_branch(param, d)
    record = {
        "N": param.n,
        "d": d,
        "branch": branch,
        "roots_by_lifting": list(lifted.roots),
        "rho0": len(lifted.roots),
    }
    if param.n not in (1, 3):
        mapped = roots_from_representations(param, d)
        record["roots_from_representations"] = list(mapped.roots)
        record["representations"] = [asdict(r) for r in representations_of(param, d)]
        record["bijection_holds"] = mapped.roots == lifted.roots if branch else None
    emit_json(_config(args), record, args.out)
    return 0


def _cmd_approx(args) -> int:
    param = _param(args)
    sieve = Sieve(args.dmax)
    rows = []
    for ap in iter_approximations(param, args.dmax, sieve):
        rows.append({"d": ap.d, "v": ap.v, "a": ap.a, "q": ap.q,
                     "q_over_sqrt_d": ap.ratio, "branch": ap.branch,
                     "fallback": ap.fallback})
    emit_csv(_config(args), ["d", "v", "a", "q", "q_over_sqrt_d", "branch",
                             "fallback"], rows, args.out)
    if args.plot:
        from .plots import approx_figure
        approx_figure(rows, _plot_path(args.out))
    return 0


def _cmd_sieve_bound(args) -> int:
    param = _param(args)
    samples = sieve_bound_study(param, dyadic_grid(args.dmin, args.dmax),
                                args.h_max, args.m_rule)
    rows = [{"D": s.d_scale, "H": s.h_max, "M": s.m_len, "value": s.value,
             "boundRatio": s.bound_ratio} for s in samples]
    emit_csv(_config(args), ["D", "H", "M", "value", "boundRatio"], rows,
             args.out)
    if args.plot:
        from .plots import sieve_figure
        sieve_figure(samples, _plot_path(args.out))
    return 0


def _cmd_rho(args) -> int:
    param = _param(args)
    table = RhoTable.build(param, args.limit)
    a_const = l_value(param, 1) * g_euler(param, 1)[0] / 2
    rows = [{"d": d, "rho0": int(table.rho0[d]), "rho": int(table.rho[d]),
             "e_value": table.e_value(d, a_const)}
            for d in range(1, args.limit + 1)]
    emit_csv(_config(args, a_const=a_const), ["d", "rho0", "rho", "e_value"],
             rows, args.out)
    if args.plot:
        from .plots import rho_figure
        rho_figure(rows, _plot_path(args.out))
    return 0


def _cmd_constants(args) -> int:
    param = _param(args)
    table = RhoTable.build(param, max(args.cutoff, 1000))
    tc = theorem_constants(param, table, cutoff=args.cutoff)
    emit_json(_config(args), tc.as_dict(), args.out)
    return 0


def _run_x(job) -> tuple:
    n, x = job
    param = FormParameter.make(n)
    d = hyperbola_s(param, x)
    return x, d.s_sum


def _cmd_experiment(args) -> int:
    param = _param(args)
    grid = _parse_grid(args.grid)
    table = RhoTable.build(param, max(args.cutoff, 1000))
    constants = theorem_constants(param, table, cutoff=args.cutoff)
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            sums = dict(pool.map(_run_x, [(param.n, x) for x in grid]))
    else:
        sums = {x: hyperbola_s(param, x).s_sum for x in grid}
    records = []
    rows = []
    from .sums import ResidualRecord
    for x in grid:
        s_val = sums[x]
        main = constants.c1 * x * x * log(x) + constants.c2 * x * x
        resid = s_val - main
        rec = ResidualRecord(x, s_val, main, resid, resid / x ** 1.5,
                             resid / x ** 2)
        records.append(rec)
        rows.append({"x": x, "S": s_val, "main_term": main, "residual": resid,
                     "residual_x32": rec.residual_x32,
                     "residual_x2": rec.residual_x2})
    extra = {}
    if len([r for r in records if r.residual]) >= 2:
        extra["slope"] = residual_slope(records)
    emit_csv(_config(args, C1=constants.c1, C2=constants.c2, **extra),
             ["x", "S", "main_term", "residual", "residual_x32", "residual_x2"],
             rows, args.out)
    if args.plot:
        from .plots import residual_figure
        residual_figure(records, _plot_path(args.out))
    return 0


def _cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    failed = False
    for name in names:
        runner = SUITES[name]
        if name == "bijection" and (args.form or args.dmax):
            forms = (args.form,) if args.form else None
            result = suite_bijection(d_max=args.dmax or 10_000,
                                     d_max_even7=args.dmax or 512,
                                     forms=forms or (2, 67, 163))
        elif name == "approx" and args.dmax:
            result = suite_approx(d_max=args.dmax)
        elif name == "sieve" and args.dmax:
            result = suite_sieve_growth(d_max=args.dmax)
        else:
            result = runner()
        print(result.line())
        failed |= not result.passed
    return 1 if failed else 0


def _plot_path(out: "str | None") -> str:
    if not out or out == "-":
        print("error: --plot needs --out", file=sys.stderr)
        raise SystemExit(2)
    stem = out.rsplit(".", 1)[0]
    return f"{stem}.png"


_HANDLERS = {
    "sum": _cmd_sum,
    "roots": _cmd_roots,
    "approx": _cmd_approx,
    "sieve-bound": _cmd_sieve_bound,
    "rho": _cmd_rho,
    "constants": _cmd_constants,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
}


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None:
        set_factor_seed(args.seed)
    try:
        return _HANDLERS[args.subcommand](args)
    except SystemExit as exc:  # validation short-circuits inside handlers
        return int(exc.code or 0)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
