"""Dependent multiplier sequences built by a Parzen-weighted moving average.

The correlation shape is ``phi(x) = (k_P * k_P)(2x) / (k_P * k_P)(0)`` where
``k_P`` is the Parzen kernel and ``*`` is convolution. Sequences are generated
as normalized moving averages of i.i.d. standard normal innovations with
weights ``k_P(j / b)``, ``b = floor(ell / 2) + 1``, which gives mean 0,
variance 1, ``(2b - 2)``-dependence and lag correlations close to
``phi(h / ell)``.

Replicate ``m`` draws its innovations from the substream
``SeedSequence(entropy, spawn_key=spawn_key + (m,))`` of the configured seed,
so any row can be regenerated on its own.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ArgumentError

__all__ = [
    "parzen",
    "parzen_conv",
    "phi",
    "phi_curvature",
    "phi_l2",
    "ma_weights",
    "weight_autocorrelation",
    "MultiplierConfig",
    "MultiplierBatch",
    "gen_multipliers",
    "as_seed_sequence",
    "child_seed",
]

PHI_GRID_SIZE = 4097
_PARZEN_KNOTS = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])


def parzen(x):
    """Parzen kernel, supported on ``[-1, 1]``."""
    a = np.abs(np.asarray(x, dtype=np.float64))
    out = np.where(
        a <= 0.5,
        1.0 - 6.0 * a**2 + 6.0 * a**3,
        np.where(a <= 1.0, 2.0 * (1.0 - a) ** 3, 0.0),
    )
    return out if out.ndim else float(out)


def _parzen_second(x: np.ndarray) -> np.ndarray:
    a = np.abs(x)
    return np.where(a <= 0.5, -12.0 + 36.0 * a, np.where(a <= 1.0, 12.0 * (1.0 - a), 0.0))


def _piecewise_gauss(u: np.ndarray, inner, npts: int) -> np.ndarray:
    """Integrate ``inner(t, u)`` over ``t`` in ``[-1, 1]`` piece by piece.

    Pieces are delimited by the knots of ``k_P(t)`` and ``k_P(u - t)``, so the
    integrand is a polynomial on each piece and Gauss-Legendre is exact.
    """
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    nodes, wts = np.polynomial.legendre.leggauss(npts)
    knots = np.concatenate(
        [np.broadcast_to(_PARZEN_KNOTS, (u.size, 5)), u[:, None] - _PARZEN_KNOTS[None, :]],
        axis=1,
    )
    knots = np.sort(np.clip(knots, -1.0, 1.0), axis=1)
    lo, hi = knots[:, :-1], knots[:, 1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[..., None] + half[..., None] * nodes
    vals = inner(t, u[:, None, None])
    return np.sum(half * np.sum(vals * wts, axis=-1), axis=1)


def parzen_conv(u) -> np.ndarray:
    """Self-convolution ``(k_P * k_P)(u)``, exact up to rounding."""
    return _piecewise_gauss(u, lambda t, uu: parzen(t) * parzen(uu - t), 4)


@functools.cache
def _phi_spline() -> CubicSpline:
    grid = np.linspace(-1.0, 1.0, PHI_GRID_SIZE)
    vals = parzen_conv(2.0 * grid) / parzen_conv(0.0)[0]
    return CubicSpline(grid, vals)


def phi(x):
    """Correlation shape of the multipliers; 1 at 0, 0 outside ``(-1, 1)``."""
    xa = np.asarray(x, dtype=np.float64)
    inside = np.abs(xa) < 1.0
    out = np.zeros(xa.shape)
    out[inside] = np.clip(_phi_spline()(xa[inside]), 0.0, 1.0)
    return out if out.ndim else float(out)


@functools.cache
def phi_curvature() -> float:
    """``phi''(0)``, from the convolution of ``k_P`` with its second derivative."""
    second = _piecewise_gauss(np.zeros(1), lambda t, uu: parzen(t) * _parzen_second(uu - t), 4)
    return float(4.0 * second[0] / parzen_conv(0.0)[0])


@functools.cache
def phi_l2() -> float:
    """``int_{-1}^{1} phi(x)^2 dx``."""
    # phi is a degree-7 polynomial between multiples of 1/4
    nodes, wts = np.polynomial.legendre.leggauss(8)
    edges = np.linspace(-1.0, 1.0, 9)
    total = 0.0
    norm = parzen_conv(0.0)[0]
    for a, b in zip(edges[:-1], edges[1:]):
        x = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        vals = parzen_conv(2.0 * x) / norm
        total += 0.5 * (b - a) * float(np.dot(wts, vals**2))
    return total


def ma_weights(ell: int) -> np.ndarray:
    """Moving-average weights ``k_P(j / b)``, ``j = -b..b``, with ``b = floor(ell/2) + 1``."""
    if ell < 1:
        raise ArgumentError(f"bandwidth must be >= 1, got {ell}")
    b = ell // 2 + 1
    return parzen(np.arange(-b, b + 1) / b)


def weight_autocorrelation(ell: int, max_lag: int) -> np.ndarray:
    """Exact lag-``h`` correlations ``sum_j w_j w_{j+h} / sum_j w_j^2``, ``h = 0..max_lag``."""
    w = ma_weights(ell)
    full = np.correlate(w, w, mode="full")[w.size - 1 :] / np.dot(w, w)
    out = np.zeros(max_lag + 1)
    m = min(max_lag + 1, full.size)
    out[:m] = full[:m]
    return out


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def child_seed(seed, *key: int) -> np.random.SeedSequence:
    """Deterministic substream ``seed -> key``; independent of spawn history."""
    ss = as_seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + tuple(key))


@dataclass(frozen=True)
class MultiplierConfig:
    """Size, bandwidth, replicate count and seed of a multiplier batch."""

    n: int
    ell: int
    M: int
    seed: int | np.random.SeedSequence | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.ell <= self.n:
            raise ArgumentError(f"ell must lie in [1, n={self.n}], got {self.ell}")
        if self.M < 1:
            raise ArgumentError(f"M must be >= 1, got {self.M}")
        if self.ell > self.n / 2:
            warnings.warn(
                f"bandwidth ell={self.ell} exceeds n/2={self.n / 2}", RuntimeWarning, stacklevel=3
            )


@dataclass(frozen=True)
class MultiplierBatch:
    sequences: np.ndarray = field(repr=False)
    config: MultiplierConfig

    @property
    def M(self) -> int:
        return self.sequences.shape[0]

    @property
    def n(self) -> int:
        return self.sequences.shape[1]


def gen_multipliers(config: MultiplierConfig) -> MultiplierBatch:
    """Generate ``M`` independent dependent multiplier sequences of length ``n``.

    Row ``m`` depends only on ``(seed, m, n, ell)``.
    """
    n, ell, M = config.n, config.ell, config.M
    w = ma_weights(ell)
    b = (w.size - 1) // 2
    root = as_seed_sequence(config.seed)
    z = np.empty((M, n + 2 * b))
    for m in range(M):
        z[m] = np.random.default_rng(child_seed(root, m)).standard_normal(n + 2 * b)
    xi = np.zeros((M, n))
    for j in range(w.size):
        if w[j] != 0.0:
            xi += w[j] * z[:, j : j + n]
    xi /= math.sqrt(float(np.dot(w, w)))
    xi.setflags(write=False)
    return MultiplierBatch(xi, config)
