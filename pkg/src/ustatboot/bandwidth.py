"""Long-run variance estimation and automatic bandwidth selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, SizeError
from .multiplier import phi, phi_curvature, phi_l2

__all__ = [
    "BandwidthDiagnostics",
    "autocovariance",
    "autocovariances",
    "select_Ln",
    "flat_top",
    "estimate_bandwidth",
    "longrun_variance",
]

# Politis-White defaults for picking the lag-window cutoff
_PW_C = 2.0
_MIN_N = 8


@dataclass(frozen=True)
class BandwidthDiagnostics:
    """Intermediate quantities of the automatic bandwidth choice.

    ``Ln`` is the lag after which autocorrelations look negligible and
    ``window`` the flat-top truncation lag actually used, ``min(2 Ln, ceil(sqrt(n)) + K_n)``.
    ``gamma_hat[k]`` is the lag-``k`` sample autocovariance, ``k = 0..window``.
    """

    Ln: int
    window: int
    gamma_hat: np.ndarray = field(repr=False, compare=False)
    Gamma_hat: float
    Delta_hat: float
    ell_opt: int
    ell_real: float = math.nan

    def as_dict(self) -> dict:
        return {
            "Ln": self.Ln,
            "window": self.window,
            "gamma_hat": [float(v) for v in self.gamma_hat],
            "Gamma_hat": self.Gamma_hat,
            "Delta_hat": self.Delta_hat,
            "ell_opt": self.ell_opt,
        }


def _as_vector(values) -> np.ndarray:
    y = np.asarray(values, dtype=np.float64)
    if y.ndim != 1:
        raise ArgumentError(f"expected a 1-d vector, got shape {y.shape}")
    return y


def autocovariances(values, max_lag: int) -> np.ndarray:
    """Sample autocovariances (divisor ``n``) for lags ``0..max_lag``.

    Lags ``>= n`` are reported as 0.
    """
    y = _as_vector(values)
    n = y.size
    yc = y - y.mean()
    # a constant series must give exactly zero, not centering residue
    if np.max(np.abs(yc), initial=0.0) <= 8.0 * np.finfo(np.float64).eps * np.max(np.abs(y), initial=0.0):
        yc = np.zeros_like(yc)
    out = np.zeros(max_lag + 1)
    top = min(max_lag, n - 1)
    for k in range(top + 1):
        out[k] = np.dot(yc[: n - k], yc[k:]) / n
    return out


def autocovariance(values, k: int) -> float:
    """Sample autocovariance at lag ``k`` with divisor ``n``."""
    y = _as_vector(values)
    if not 0 <= k <= y.size - 1:
        raise ArgumentError(f"lag must lie in [0, {y.size - 1}], got {k}")
    return float(autocovariances(y, k)[k])


def _kn(n: int) -> int:
    return max(5, math.ceil(math.sqrt(math.log10(n))))


def select_Ln(values) -> int:
    """Smallest lag after which the sample autocorrelations look negligible.

    Returns the smallest ``m >= 1`` with ``|rho(m + j)| < 2 sqrt(log10(n) / n)``
    for ``j = 1..K_n``, ``K_n = max(5, ceil(sqrt(log10 n)))``; the scan stops at
    ``ceil(sqrt(n))``, which is returned when no such ``m`` exists.
    """
    y = _as_vector(values)
    n = y.size
    if n < _MIN_N:
        raise SizeError(f"bandwidth selection needs n >= {_MIN_N}, got n={n}")
    kn = _kn(n)
    cap = math.ceil(math.sqrt(n))
    gam = autocovariances(y, cap + kn)
    if gam[0] <= 0.0:
        return 1
    rho = gam / gam[0]
    small = np.abs(rho) < _PW_C * math.sqrt(math.log10(n) / n)
    for m in range(1, cap + 1):
        if small[m + 1 : m + kn + 1].all():
            return m
    return cap


def flat_top(x):
    """Trapezoidal lag window: 1 on ``|x| <= 1/2``, linear to 0 at ``|x| = 1``."""
    xa = np.asarray(x, dtype=np.float64)
    out = np.minimum(np.maximum(2.0 * (1.0 - np.abs(xa)), 0.0), 1.0)
    return out if out.ndim else float(out)


def estimate_bandwidth(values) -> BandwidthDiagnostics:
    """MSE-optimal multiplier bandwidth estimated from (pseudo-)observations.

    The curvature and level of the spectral density at zero are estimated
    with flat-top lag windows truncated at twice the lag returned by
    :func:`select_Ln` (at most ``ceil(sqrt(n)) + K_n``), and plugged
    into ``(4 Gamma^2 / Delta)^{1/5} n^{1/5}``. The result is rounded to the
    nearest integer and kept in ``[1, floor(n / 2)]``.
    """
    y = _as_vector(values)
    n = y.size
    if n < _MIN_N:
        raise SizeError(f"bandwidth selection needs n >= {_MIN_N}, got n={n}")
    Ln = select_Ln(y)
    window = min(2 * Ln, math.ceil(math.sqrt(n)) + _kn(n))
    gam = autocovariances(y, window)
    k = np.arange(1, window + 1)
    lam = flat_top(k / window)
    # symmetric sums over k = -window..window; the k = 0 term of Gamma vanishes
    Gamma = phi_curvature() * float(np.sum(lam * k**2 * gam[1:]))
    level = gam[0] + 2.0 * float(np.sum(lam * gam[1:]))
    Delta = 2.0 * level**2 * phi_l2()
    if Delta <= 0.0:
        ell_real = math.nan
        ell = 1
    else:
        ell_real = (4.0 * Gamma**2 / Delta) ** 0.2 * n**0.2
        ell = int(math.floor(ell_real + 0.5))
        ell = min(max(ell, 1), n // 2)
    return BandwidthDiagnostics(Ln, window, gam, float(Gamma), float(Delta), ell, float(ell_real))


def longrun_variance(values, ell: int) -> float:
    """HAC estimate ``n^{-1} sum_{i,j} phi((i - j) / ell) y_i y_j``.

    Only lags ``|i - j| < ell`` contribute, giving ``O(n ell)`` work.
    """
    y = _as_vector(values)
    n = y.size
    if n < 2:
        raise SizeError(f"long-run variance needs n >= 2, got n={n}")
    if ell < 1:
        raise ArgumentError(f"bandwidth must be >= 1, got {ell}")
    total = float(np.dot(y, y))
    lags = np.arange(1, min(ell, n))
    if lags.size:
        w = phi(lags / ell)
        for h, wh in zip(lags, w):
            if wh != 0.0:
                total += 2.0 * wh * float(np.dot(y[:-h], y[h:]))
    return total / n
