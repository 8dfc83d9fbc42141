"""Command-line interface: ``ustatboot {ci, cp, simulate}``.

Exit codes: 0 success, 2 usage or data error, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import warnings

import numpy as np

from . import __version__
from .datagen import DEFAULT_GARCH, CopulaSpec, DgpConfig
from .errors import DataError, UstatError
from .inference import ci_asymptotic, ci_bootstrap, cp_test
from .kernels import as_sample, get_kernel
from .montecarlo import McConfig, run_monte_carlo

SCHEMA_VERSION = 1
THREADS_ENV = "USTATBOOT_THREADS"


class CliError(Exception):
    """Usage or data problem reported with exit code 2."""


def read_csv(path: str) -> np.ndarray:
    """Read a numeric CSV file; a non-numeric first line is taken as a header."""
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows: list[list[float]] = []
    width = None
    for lineno, fields in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        try:
            values = [float(f) for f in fields]
        except ValueError:
            if lineno == 1:
                continue
            raise CliError(f"{path}:{lineno}: non-numeric value") from None
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise CliError(f"{path}:{lineno}: expected {width} columns, found {len(values)}")
        if not all(math.isfinite(v) for v in values):
            raise CliError(f"{path}:{lineno}: non-finite value")
        rows.append(values)
    if not rows:
        raise CliError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _resolve_seed(seed):
    return seed if seed is not None else np.random.SeedSequence().entropy


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
        return
    flat = {k: v for k, v in report.items() if not isinstance(v, (dict, list))}
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(flat.keys())
        writer.writerow(flat.values())
    else:
        width = max(len(k) for k in flat)
        for k, v in flat.items():
            out.write(f"{k:<{width}}  {v}\n")


def _load(args) -> np.ndarray:
    data = read_csv(args.data)
    kernel = get_kernel(args.kernel)
    try:
        kernel.check_dim(data.shape[1])
    except UstatError as exc:
        raise CliError(str(exc)) from exc
    # the library accepts d = 1 for g, but then it is constant; reject it here
    if kernel.name == "kendall" and data.shape[1] < 2:
        raise CliError(f"kernel kendall needs at least 2 columns, got {data.shape[1]}")
    return as_sample(data)


def _bandwidth_fields(diag) -> dict:
    if diag is None:
        return {"Ln": None, "bandwidth": None}
    return {"Ln": diag.Ln, "bandwidth": diag.as_dict()}


def run_ci(args, out=None) -> int:
    out = out or sys.stdout
    x = _load(args)
    seed = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.method == "asymptotic":
            res = ci_asymptotic(x, args.kernel, alpha=args.alpha, ell=args.ell)
        else:
            seed = _resolve_seed(args.seed)
            res = ci_bootstrap(x, args.kernel, alpha=args.alpha, M=args.M, seed=seed, ell=args.ell)
    notes = [str(w.message) for w in caught]
    if res.degenerate:
        notes.append("degenerate interval: estimated long-run variance is zero")
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    report = {
        "schema": f"ustatboot.ci/{SCHEMA_VERSION}",
        "kernel": get_kernel(args.kernel).name,
        "n": int(x.shape[0]),
        "d": int(x.shape[1]),
        "method": res.method,
        "alpha": res.alpha,
        "estimate": res.estimate,
        "lower": res.lower,
        "upper": res.upper,
        "sigma": res.sigma,
        "M": res.M,
        "seed": seed,
        "ell": res.ell,
        **_bandwidth_fields(res.diagnostics),
        "degenerate": res.degenerate,
        "warnings": notes,
    }
    _emit(report, args.format, out)
    return 0


def run_cp(args, out=None) -> int:
    out = out or sys.stdout
    x = _load(args)
    seed = None if args.method == "asymptotic" else _resolve_seed(args.seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = cp_test(x, args.kernel, method=args.method, M=args.M, seed=seed, ell=args.ell)
    notes = [str(w.message) for w in caught]
    if res.degenerate:
        notes.append("degenerate test: estimated long-run variance is zero")
    for note in notes:
        print(f"warning: {note}", file=sys.stderr)
    report = {
        "schema": f"ustatboot.cp/{SCHEMA_VERSION}",
        "kernel": get_kernel(args.kernel).name,
        "n": int(x.shape[0]),
        "d": int(x.shape[1]),
        "method": res.method,
        "statistic": res.statistic,
        "p_value": res.p_value,
        "change_point": res.change_point,
        "sigma": res.sigma,
        "M": res.M,
        "seed": seed,
        "ell": res.ell,
        **_bandwidth_fields(res.diagnostics),
        "degenerate": res.degenerate,
        "warnings": notes,
    }
    _emit(report, args.format, out)
    return 0


def _dgp_from_args(args, n: int) -> DgpConfig:
    innov = args.innov
    if innov is None:
        innov = "copula" if args.copula else "normal"
    copula = after = None
    d = args.d
    if innov == "copula":
        if not args.copula:
            raise CliError("--innov copula requires --copula")
        copula = CopulaSpec(args.copula, args.tau)
        tau2 = args.tau if args.mode == "cplevel" else args.tau2
        if args.mode == "cppower" and tau2 is None:
            raise CliError("cppower requires --tau2")
        after = CopulaSpec(args.copula, tau2)
        d = d or 2
    return DgpConfig(
        n=n,
        d=d or 1,
        model=args.model,
        zeta=args.zeta,
        garch=DEFAULT_GARCH,
        innovations=innov,
        copula=copula,
        copula_after=after,
        break_frac=args.t,
        burn_in=args.burn_in,
    )


def run_simulate(args, out=None) -> int:
    out = out or sys.stdout
    if args.reps < 1:
        raise CliError(f"--reps must be >= 1, got {args.reps}")
    kernel = args.kernel or ("variance" if args.mode == "coverage" else "kendall")
    seed = _resolve_seed(args.seed)
    threads = args.threads or _default_threads()
    methods = tuple(args.methods.split(",")) if args.methods else None
    rows = []
    started = time.perf_counter()
    for n in args.n:
        cfg = McConfig(
            dgp=_dgp_from_args(args, n),
            kernel=kernel,
            reps=args.reps,
            M=args.M,
            alpha=args.alpha,
            mode=args.mode,
            theta_truth=args.theta,
            methods=methods,
            seed=seed,
            ell=args.ell,
        )
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res = run_monte_carlo(cfg, workers=threads)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        dgp = cfg.dgp
        row = {
            "mode": args.mode,
            "model": dgp.model,
            "zeta": dgp.zeta if dgp.model == "ar1" else None,
            "innovations": dgp.innovations,
            "copula": dgp.copula.family if dgp.copula else None,
            "tau": dgp.copula.tau if dgp.copula else None,
            "tau2": dgp.copula_after.tau if dgp.copula_after else None,
            "t": dgp.break_frac if dgp.copula else None,
            "kernel": get_kernel(kernel).name,
            "n": n,
            "alpha": args.alpha,
            "reps": args.reps,
            "M": args.M,
            "theta_truth": res.theta_truth,
        }
        for m in res.percent:
            row[m] = round(res.percent[m], 2)
            row[f"{m}_se"] = round(res.std_error[m], 2)
        row["mean_ell"] = round(res.ell_mean, 3) if not math.isnan(res.ell_mean) else None
        row["elapsed_s"] = round(res.elapsed, 3)
        rows.append(row)
    report = {
        "schema": f"ustatboot.simulate/{SCHEMA_VERSION}",
        "seed": seed,
        "threads": threads,
        "wall_clock_s": round(time.perf_counter() - started, 3),
        "rows": rows,
    }
    target = out
    if args.output:
        target = open(args.output, "w", newline="")
    try:
        if args.format == "json":
            target.write(json.dumps(report, indent=2) + "\n")
        elif args.format == "csv":
            writer = csv.DictWriter(target, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        else:
            cols = list(rows[0])
            target.write("  ".join(cols) + "\n")
            for row in rows:
                target.write("  ".join("" if row[c] is None else str(row[c]) for c in cols) + "\n")
            target.write(f"# seed={seed} wall_clock_s={report['wall_clock_s']}\n")
    finally:
        if target is not out:
            target.close()
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _level(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ustatboot",
        description="Dependent multiplier bootstraps for U-statistics of time series.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kernel_default, method_choices, method_default, M_default):
        p.add_argument("data", help="numeric CSV file, one observation per row")
        p.add_argument("--kernel", default=kernel_default, choices=["variance", "gini", "kendall"])
        p.add_argument("--method", default=method_default, choices=method_choices)
        p.add_argument("--M", type=_positive_int, default=M_default, help="bootstrap replicates")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--ell", type=_positive_int, default=None, help="fixed bandwidth")
        p.add_argument("--format", default="json", choices=["json", "csv", "text"])

    p_ci = sub.add_parser("ci", help="confidence interval for theta")
    common(p_ci, "variance", ["asymptotic", "bootstrap"], "bootstrap", 4999)
    p_ci.add_argument("--alpha", type=_level, default=0.05)
    p_ci.set_defaults(func=run_ci)

    p_cp = sub.add_parser("cp", help="change-point test")
    common(p_cp, "kendall", ["asymptotic", "hat", "check"], "check", 1000)
    p_cp.set_defaults(func=run_cp)

    p_sim = sub.add_parser("simulate", help="Monte Carlo study")
    p_sim.add_argument("mode", choices=["coverage", "cplevel", "cppower"])
    p_sim.add_argument("--model", default="ar1", choices=["ar1", "garch"])
    p_sim.add_argument("--zeta", type=float, default=0.0)
    p_sim.add_argument("--innov", default=None, choices=["normal", "t5", "copula"])
    p_sim.add_argument("--copula", default=None, choices=["clayton", "gumbel", "gh", "cl"])
    p_sim.add_argument("--tau", type=float, default=0.0)
    p_sim.add_argument("--tau2", type=float, default=None)
    p_sim.add_argument("--t", type=float, default=0.5, help="break fraction")
    p_sim.add_argument("--d", type=_positive_int, default=None)
    p_sim.add_argument("--burn-in", type=int, default=100)
    p_sim.add_argument("--kernel", default=None, choices=["variance", "gini", "kendall"])
    p_sim.add_argument("--n", type=_positive_int, nargs="+", default=[100])
    p_sim.add_argument("--alpha", type=_level, default=0.05)
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--M", type=_positive_int, default=1000)
    p_sim.add_argument("--methods", default=None, help="comma-separated method list")
    p_sim.add_argument("--theta", type=float, default=None, help="true theta for coverage")
    p_sim.add_argument("--ell", type=_positive_int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--threads", type=_positive_int, default=None)
    p_sim.add_argument("--format", default="csv", choices=["json", "csv", "text"])
    p_sim.add_argument("--output", default=None, help="write the table here instead of stdout")
    p_sim.set_defaults(func=run_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, UstatError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
