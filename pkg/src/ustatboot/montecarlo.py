"""Monte Carlo studies of interval coverage and change-point test rejection rates.

Replicate ``r`` draws its data from substream ``(0, r, 0)`` and its
multipliers from ``(0, r, 1)`` of the study seed; the reference value of
``theta`` for coverage studies comes from substream ``(1,)``. Results are
therefore identical whatever the number of workers.
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .datagen import DgpConfig, generate
from .errors import ArgumentError
from .inference import CP_METHODS, ci_asymptotic, ci_bootstrap, cp_tests
from .kernels import GINI, VARIANCE, Kernel, as_sample, get_kernel
from .multiplier import as_seed_sequence, child_seed
from .table import build_prefix_table

__all__ = ["McConfig", "McResult", "ReplicateError", "run_monte_carlo", "estimate_theta", "MODES"]

MODES = ("coverage", "cplevel", "cppower")
THETA_SAMPLE_SIZE = 20000
_COVERAGE_METHODS = ("asymptotic", "bootstrap")


class ReplicateError(RuntimeError):
    """A Monte Carlo replicate failed; ``rep`` is its index."""

    def __init__(self, rep: int, cause: BaseException):
        super().__init__(f"replicate {rep} failed: {cause!r}")
        self.rep = rep


@dataclass(frozen=True)
class McConfig:
    """A Monte Carlo study.

    ``methods`` defaults to both intervals for coverage studies and to the
    check bootstrap plus the asymptotic test otherwise.
    """

    dgp: DgpConfig
    kernel: str | Kernel = "kendall"
    reps: int = 1000
    M: int = 1000
    alpha: float = 0.05
    mode: str = "cplevel"
    theta_truth: float | None = None
    methods: tuple[str, ...] | None = None
    seed: int | None = None
    ell: int | None = None

    def __post_init__(self):
        if self.reps < 1:
            raise ArgumentError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 < self.alpha < 1.0:
            raise ArgumentError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.mode not in MODES:
            raise ArgumentError(f"mode must be one of {MODES}, got {self.mode!r}")
        allowed = _COVERAGE_METHODS if self.mode == "coverage" else CP_METHODS
        for m in self.resolved_methods():
            if m not in allowed:
                raise ArgumentError(f"method {m!r} not available in {self.mode} mode")

    def resolved_methods(self) -> tuple[str, ...]:
        if self.methods:
            return tuple(m.lower() for m in self.methods)
        return _COVERAGE_METHODS if self.mode == "coverage" else ("check", "asymptotic")


@dataclass
class McResult:
    """Rejection or coverage percentages per method with binomial standard errors."""

    config: McConfig
    percent: dict[str, float]
    std_error: dict[str, float]
    counts: dict[str, int]
    theta_truth: float | None
    seed: int | None
    elapsed: float
    ell_mean: float = math.nan
    extra: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        row = {"n": self.config.dgp.n, "reps": self.config.reps}
        for m in self.percent:
            row[m] = round(self.percent[m], 4)
            row[f"{m}_se"] = round(self.std_error[m], 4)
        return row


def estimate_theta(data, kernel: str | Kernel) -> float:
    """``U_{h,1:n}`` for a large sample without storing the kernel matrix."""
    x = as_sample(data)
    kernel = get_kernel(kernel)
    kernel.check_dim(x.shape[1])
    n = x.shape[0]
    if n < 2:
        return 0.0
    if kernel is VARIANCE:
        return float(np.var(x[:, 0], ddof=1))
    if kernel is GINI:
        xs = np.sort(x[:, 0])
        j = np.arange(1, n + 1)
        return float(np.sum(xs * (2 * j - n - 1)) / math.comb(n, 2))
    total = 0.0
    block = 1024
    for start in range(0, n, block):
        stop = min(start + block, n)
        vals = kernel.pairwise(x[start:stop], x[start:])
        rows = np.arange(stop - start)[:, None]
        cols = np.arange(n - start)[None, :]
        total += float(np.where(cols > rows, vals, 0.0).sum())
    return total / math.comb(n, 2)


def _one_rep(args) -> dict[str, bool]:
    cfg, rep, theta = args
    root = as_seed_sequence(cfg.seed)
    try:
        with warnings.catch_warnings():
            # per-replicate warnings would repeat reps times; the driver warns once
            warnings.simplefilter("ignore", RuntimeWarning)
            x = generate(cfg.dgp, np.random.default_rng(child_seed(root, 0, rep, 0)))
            mseed = child_seed(root, 0, rep, 1)
            methods = cfg.resolved_methods()
            out: dict[str, bool] = {}
            if cfg.mode == "coverage":
                table = build_prefix_table(x, cfg.kernel)
                if "asymptotic" in methods:
                    out["asymptotic"] = ci_asymptotic(table, alpha=cfg.alpha, ell=cfg.ell).contains(theta)
                if "bootstrap" in methods:
                    ci = ci_bootstrap(table, alpha=cfg.alpha, M=cfg.M, seed=mseed, ell=cfg.ell)
                    out["bootstrap"] = ci.contains(theta)
                    out["_ell"] = ci.ell
            else:
                res = cp_tests(x, cfg.kernel, methods, M=cfg.M, seed=mseed, ell=cfg.ell)
                for m, r in res.items():
                    out[m] = r.p_value <= cfg.alpha
                    out["_ell"] = r.ell
            return out
    except Exception as exc:  # noqa: BLE001
        raise ReplicateError(rep, exc) from exc


def run_monte_carlo(config: McConfig, workers: int = 1) -> McResult:
    """Run ``config.reps`` replicates and tabulate per-method percentages.

    Coverage studies count intervals containing ``theta_truth`` (estimated
    from one sample of size 20000 when not supplied); change-point studies
    count p-values ``<= alpha``.
    """
    if config.seed is None:
        config = replace(config, seed=np.random.SeedSequence().entropy)
    if config.M < 100 and set(config.resolved_methods()) & {"hat", "check", "bootstrap"}:
        warnings.warn(f"M={config.M} bootstrap replicates is small", RuntimeWarning, stacklevel=2)
    start = time.perf_counter()
    theta = config.theta_truth
    if config.mode == "coverage" and theta is None:
        big = replace(config.dgp, n=THETA_SAMPLE_SIZE)
        theta = estimate_theta(
            generate(big, np.random.default_rng(child_seed(as_seed_sequence(config.seed), 1))),
            config.kernel,
        )
    jobs = [(config, r, theta) for r in range(config.reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_one_rep, jobs, chunksize=max(1, config.reps // (4 * workers))))
    else:
        outcomes = [_one_rep(j) for j in jobs]
    methods = config.resolved_methods()
    counts = {m: int(sum(o[m] for o in outcomes)) for m in methods}
    percent, se = {}, {}
    for m in methods:
        p = counts[m] / config.reps
        percent[m] = 100.0 * p
        se[m] = 100.0 * math.sqrt(p * (1.0 - p) / config.reps)
    ells = [o["_ell"] for o in outcomes if "_ell" in o]
    return McResult(
        config=config,
        percent=percent,
        std_error=se,
        counts=counts,
        theta_truth=theta,
        seed=config.seed,
        elapsed=time.perf_counter() - start,
        ell_mean=float(np.mean(ells)) if ells else math.nan,
    )
