"""Confidence intervals for ``theta`` and change-point tests based on ``S_n``."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.special import ndtri

from .bandwidth import BandwidthDiagnostics, estimate_bandwidth, longrun_variance
from .bootstrap import replicate_batch
from .errors import ArgumentError, SizeError
from .kernels import Kernel
from .multiplier import MultiplierConfig, as_seed_sequence, gen_multipliers
from .table import PrefixTable, build_prefix_table
from .ustat import argmax_dn, process_dn, pseudo_obs, statistic_sn

__all__ = [
    "CIResult",
    "CpTestResult",
    "kolmogorov_cdf",
    "ci_asymptotic",
    "ci_bootstrap",
    "bootstrap_quantile_indices",
    "cp_test",
    "cp_tests",
    "CP_METHODS",
]

CP_METHODS = ("asymptotic", "hat", "check")
_MIN_N = 8
_TAIL_TOL = 1e-12


def kolmogorov_cdf(x):
    """C.d.f. of the supremum of a standard Brownian bridge.

    ``F_K(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)``, summed until the
    next term drops below 1e-12. Below ``x = 0.6`` the equivalent series
    ``sqrt(2 pi) / x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))`` is used, as the
    alternating one converges too slowly there.
    """
    xa = np.asarray(x, dtype=np.float64)
    out = np.vectorize(_kolmogorov_scalar, otypes=[np.float64])(xa)
    return out if out.ndim else float(out)


def _kolmogorov_scalar(x: float) -> float:
    if not x > 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < 0.6:
        total = 0.0
        k = 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * x * x))
            total += term
            if term < _TAIL_TOL * max(total, 1e-300) or term == 0.0:
                break
            k += 1
        value = math.sqrt(2.0 * math.pi) / x * total
    else:
        total = 0.0
        k = 1
        while True:
            term = math.exp(-2.0 * k * k * x * x)
            total += term if k % 2 else -term
            if term < _TAIL_TOL:
                break
            k += 1
        value = 1.0 - 2.0 * total
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class CIResult:
    """Confidence interval for ``theta`` with its ingredients.

    ``sigma`` (asymptotic) is the estimated long-run standard deviation of the
    pseudo-observations; ``M`` (bootstrap) the number of replicates.
    """

    estimate: float
    lower: float
    upper: float
    alpha: float
    method: str
    ell: int
    diagnostics: BandwidthDiagnostics | None = field(default=None, repr=False)
    sigma: float | None = None
    M: int | None = None
    seed: int | None = None
    degenerate: bool = False

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class CpTestResult:
    """Outcome of a change-point test based on ``S_n``.

    ``change_point`` is the smallest ``k`` maximizing ``|D_n(k/n)|``.
    """

    statistic: float
    p_value: float
    method: str
    change_point: int
    ell: int
    diagnostics: BandwidthDiagnostics | None = field(default=None, repr=False)
    sigma: float | None = None
    M: int | None = None
    seed: int | None = None
    degenerate: bool = False
    replicate_stats: np.ndarray | None = field(default=None, repr=False, compare=False)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def _prepare(sample, kernel, ell: int | None) -> tuple[PrefixTable, np.ndarray, int, BandwidthDiagnostics | None]:
    table = sample if isinstance(sample, PrefixTable) else build_prefix_table(sample, kernel)
    if table.n < _MIN_N:
        raise SizeError(f"inference needs n >= {_MIN_N}, got n={table.n}")
    h = pseudo_obs(table, 1, table.n)
    if ell is None:
        diag = estimate_bandwidth(h)
        ell = diag.ell_opt
    else:
        diag = None
        ell = int(ell)
        if not 1 <= ell <= table.n:
            raise ArgumentError(f"ell must lie in [1, n={table.n}], got {ell}")
    return table, h, ell, diag


def _seed_value(ss: np.random.SeedSequence) -> int | None:
    return ss.entropy if isinstance(ss.entropy, int) else None


def ci_asymptotic(
    sample,
    kernel: str | Kernel = "variance",
    alpha: float = 0.05,
    ell: int | None = None,
) -> CIResult:
    """Normal-approximation interval ``U_{h,1:n} -/+ z_{1-alpha/2} 2 sigma / sqrt(n)``.

    ``sigma^2`` is the HAC estimate from the full-sample pseudo-observations
    with the estimated bandwidth (or ``ell`` when given). A zero ``sigma``
    yields the point interval flagged as degenerate.
    """
    alpha = _check_alpha(alpha)
    table, h, ell, diag = _prepare(sample, kernel, ell)
    n = table.n
    est = float(table.u_prefix()[n])
    sigma = math.sqrt(max(longrun_variance(h, ell), 0.0))
    half = float(ndtri(1.0 - alpha / 2.0)) * 2.0 * sigma / math.sqrt(n)
    return CIResult(
        estimate=est,
        lower=est - half,
        upper=est + half,
        alpha=alpha,
        method="asymptotic",
        ell=ell,
        diagnostics=diag,
        sigma=sigma,
        degenerate=sigma == 0.0,
    )


def bootstrap_quantile_indices(M: int, alpha: float) -> tuple[int, int]:
    """1-based order-statistic indices ``(ceil(alpha/2 (M+1)), floor((1-alpha/2)(M+1)))``."""
    lo = math.ceil(alpha / 2.0 * (M + 1) - 1e-9)
    hi = math.floor((1.0 - alpha / 2.0) * (M + 1) + 1e-9)
    return min(max(lo, 1), M), min(max(hi, 1), M)


def ci_bootstrap(
    sample,
    kernel: str | Kernel = "variance",
    alpha: float = 0.05,
    M: int = 4999,
    seed=None,
    ell: int | None = None,
) -> CIResult:
    """Basic bootstrap interval from multiplier replicates of ``U_n(1)``.

    With ``v_(1) <= ... <= v_(M)`` the sorted replicates, the interval is
    ``[U - v_(hi) / sqrt(n), U - v_(lo) / sqrt(n)]``.
    """
    alpha = _check_alpha(alpha)
    if M < 1 or M * alpha < 1.0:
        raise ArgumentError(f"need M >= 1/alpha = {1 / alpha:g}, got M={M}")
    table, h, ell, diag = _prepare(sample, kernel, ell)
    n = table.n
    ss = as_seed_sequence(seed)
    batch = gen_multipliers(MultiplierConfig(n, ell, M, ss))
    v = np.sort(2.0 / math.sqrt(n) * (batch.sequences @ h))
    lo, hi = bootstrap_quantile_indices(M, alpha)
    est = float(table.u_prefix()[n])
    return CIResult(
        estimate=est,
        lower=est - v[hi - 1] / math.sqrt(n),
        upper=est - v[lo - 1] / math.sqrt(n),
        alpha=alpha,
        method="bootstrap",
        ell=ell,
        diagnostics=diag,
        M=M,
        seed=_seed_value(ss),
        degenerate=bool(np.all(v == 0.0)),
    )


def cp_tests(
    sample,
    kernel: str | Kernel = "kendall",
    methods: Iterable[str] = ("check", "asymptotic"),
    M: int = 1000,
    seed=None,
    ell: int | None = None,
) -> dict[str, CpTestResult]:
    """Run several change-point tests sharing one kernel table and bandwidth.

    Bootstrap flavours use the same multiplier rows.
    """
    methods = [str(m).lower() for m in methods]
    for m in methods:
        if m not in CP_METHODS:
            raise ArgumentError(f"unknown method {m!r}; expected one of {CP_METHODS}")
    table, h, ell, diag = _prepare(sample, kernel, ell)
    n = table.n
    path = process_dn(table)
    sn = statistic_sn(path)
    cp = argmax_dn(path)
    results: dict[str, CpTestResult] = {}

    if "asymptotic" in methods:
        sigma = math.sqrt(max(longrun_variance(h, ell), 0.0))
        if sigma > 0.0:
            p = 1.0 - float(kolmogorov_cdf(sn / (2.0 * sigma)))
        else:
            p = 1.0 if sn == 0.0 else 0.0
        results["asymptotic"] = CpTestResult(
            statistic=sn,
            p_value=min(max(p, 0.0), 1.0),
            method="asymptotic",
            change_point=cp,
            ell=ell,
            diagnostics=diag,
            sigma=sigma,
            degenerate=sigma == 0.0,
        )

    boot = [m for m in methods if m in ("hat", "check")]
    if boot:
        if M < 1:
            raise ArgumentError(f"M must be >= 1, got {M}")
        if M < 100:
            warnings.warn(f"M={M} bootstrap replicates is small", RuntimeWarning, stacklevel=2)
        ss = as_seed_sequence(seed)
        batch = gen_multipliers(MultiplierConfig(n, ell, M, ss))
        for m in boot:
            stats = replicate_batch(table, batch, target="dn", method=m).stats
            results[m] = CpTestResult(
                statistic=sn,
                p_value=float(np.mean(stats >= sn)),
                method=m,
                change_point=cp,
                ell=ell,
                diagnostics=diag,
                M=M,
                seed=_seed_value(ss),
                replicate_stats=stats,
            )
    return {m: results[m] for m in methods}


def cp_test(
    sample,
    kernel: str | Kernel = "kendall",
    method: str = "check",
    M: int = 1000,
    seed=None,
    ell: int | None = None,
) -> CpTestResult:
    """Change-point test based on ``S_n = max_k |D_n(k/n)|``.

    ``method="asymptotic"`` gives ``1 - F_K(S_n / (2 sigma))``; ``"hat"`` and
    ``"check"`` give the fraction of the ``M`` bootstrap replicates of
    ``S_n`` that are at least ``S_n``.
    """
    return cp_tests(sample, kernel, (method,), M=M, seed=seed, ell=ell)[str(method).lower()]
