"""Simulated time series: copula innovations fed through AR(1) or GARCH(1,1).

Bivariate innovations are drawn from an Archimedean copula (Clayton or
Gumbel-Hougaard, parameterized by Kendall's tau), mapped to standard normal
margins and filtered componentwise. A change in the copula after
``floor(n * t)`` produces a change point in the cross-sectional dependence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

from .errors import ArgumentError

__all__ = [
    "COPULA_FAMILIES",
    "DEFAULT_GARCH",
    "CopulaSpec",
    "DgpConfig",
    "copula_parameter",
    "sample_copula",
    "generate",
]

COPULA_FAMILIES = ("clayton", "gumbel")
_FAMILY_ALIASES = {"cl": "clayton", "gh": "gumbel", "gumbel-hougaard": "gumbel", "gumbel_hougaard": "gumbel"}

# (omega, beta, alpha) per component, fitted to S&P 500 and DAX log-returns
DEFAULT_GARCH = ((0.012, 0.919, 0.072), (0.037, 0.868, 0.115))

_TINY = np.finfo(np.float64).tiny
_BELOW_ONE = np.nextafter(1.0, 0.0)


def _family(name: str) -> str:
    key = str(name).lower()
    key = _FAMILY_ALIASES.get(key, key)
    if key not in COPULA_FAMILIES:
        raise ArgumentError(f"unknown copula family {name!r}; expected one of {COPULA_FAMILIES}")
    return key


def copula_parameter(family: str, tau: float) -> float:
    """Copula parameter matching Kendall's ``tau``.

    Clayton: ``2 tau / (1 - tau)``; Gumbel-Hougaard: ``1 / (1 - tau)``.
    """
    family = _family(family)
    if not 0.0 <= tau < 1.0:
        raise ArgumentError(f"tau must lie in [0, 1), got {tau}")
    if family == "clayton":
        return 2.0 * tau / (1.0 - tau)
    return 1.0 / (1.0 - tau)


def _positive_stable(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    # Kanter's representation; Laplace transform exp(-t**alpha)
    theta = np.pi * rng.uniform(size=size)
    w = rng.standard_exponential(size)
    return (
        np.sin(alpha * theta) / np.sin(theta) ** (1.0 / alpha)
        * (np.sin((1.0 - alpha) * theta) / w) ** ((1.0 - alpha) / alpha)
    )


def sample_copula(
    family: str, tau: float, count: int, rng: np.random.Generator, dim: int = 2
) -> np.ndarray:
    """Draw ``count`` vectors from a Clayton or Gumbel-Hougaard copula.

    Uses the Marshall-Olkin frailty construction ``U_j = psi(E_j / V)``;
    ``tau = 0`` gives independent uniforms. Values lie strictly inside
    ``(0, 1)``.
    """
    family = _family(family)
    par = copula_parameter(family, tau)
    if count < 0:
        raise ArgumentError(f"count must be >= 0, got {count}")
    if tau == 0.0:
        u = rng.uniform(size=(count, dim))
    elif family == "clayton":
        v = rng.gamma(1.0 / par, size=count)
        e = rng.standard_exponential((count, dim))
        u = (1.0 + e / v[:, None]) ** (-1.0 / par)
    else:
        alpha = 1.0 / par
        v = _positive_stable(alpha, count, rng)
        e = rng.standard_exponential((count, dim))
        u = np.exp(-((e / v[:, None]) ** alpha))
    return np.clip(u, _TINY, _BELOW_ONE)


@dataclass(frozen=True)
class CopulaSpec:
    family: str
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "family", _family(self.family))
        copula_parameter(self.family, self.tau)


@dataclass(frozen=True)
class DgpConfig:
    """Data-generating process.

    ``innovations`` is ``"normal"``, ``"t5"`` or ``"copula"``. With copula
    innovations ``copula`` applies to indices up to ``floor(n * break_frac)``
    and ``copula_after`` (defaults to ``copula``) afterwards. ``garch`` lists
    ``(omega, beta, alpha)`` per component.
    """

    n: int
    d: int = 1
    model: str = "ar1"
    zeta: float = 0.0
    garch: tuple[tuple[float, float, float], ...] = DEFAULT_GARCH
    innovations: str = "normal"
    copula: CopulaSpec | None = None
    copula_after: CopulaSpec | None = None
    break_frac: float = 0.5
    burn_in: int = 100

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ArgumentError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        if self.burn_in < 0:
            raise ArgumentError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.model not in ("ar1", "garch"):
            raise ArgumentError(f"model must be 'ar1' or 'garch', got {self.model!r}")
        if self.model == "ar1" and not abs(self.zeta) < 1.0:
            raise ArgumentError(f"AR(1) coefficient must satisfy |zeta| < 1, got {self.zeta}")
        if self.model == "garch":
            if len(self.garch) < self.d:
                raise ArgumentError(f"need GARCH parameters for {self.d} components")
            for omega, beta, alpha in self.garch[: self.d]:
                if not (omega > 0 and beta >= 0 and alpha >= 0 and beta + alpha < 1):
                    raise ArgumentError(
                        f"invalid GARCH parameters (omega={omega}, beta={beta}, alpha={alpha})"
                    )
        if self.innovations not in ("normal", "t5", "copula"):
            raise ArgumentError(f"unknown innovations {self.innovations!r}")
        if self.innovations == "copula":
            if self.copula is None:
                raise ArgumentError("copula innovations need a copula")
            if not 0.0 < self.break_frac < 1.0:
                raise ArgumentError(f"break fraction must lie in (0, 1), got {self.break_frac}")


def _innovations(cfg: DgpConfig, rng: np.random.Generator) -> np.ndarray:
    total = cfg.burn_in + cfg.n + 1
    if cfg.innovations == "normal":
        return rng.standard_normal((total, cfg.d))
    if cfg.innovations == "t5":
        return rng.standard_t(5, size=(total, cfg.d))
    # rows are indices -burn_in..n; the first copula covers indices <= floor(n t)
    first = cfg.burn_in + 1 + int(np.floor(cfg.n * cfg.break_frac))
    after = cfg.copula_after or cfg.copula
    u1 = sample_copula(cfg.copula.family, cfg.copula.tau, first, rng, cfg.d)
    u2 = sample_copula(after.family, after.tau, total - first, rng, cfg.d)
    return ndtri(np.vstack([u1, u2]))


def generate(cfg: DgpConfig, rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Simulate ``X_1, ..., X_n`` as an ``(n, d)`` array.

    The recursion starts at ``X_{-burn_in} = eps_{-burn_in}`` and the GARCH
    variance at its stationary level ``omega / (1 - beta - alpha)``; only
    rows ``1..n`` are returned.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    eps = _innovations(cfg, rng)
    if cfg.model == "ar1":
        x = lfilter([1.0], [1.0, -cfg.zeta], eps, axis=0)
    else:
        params = np.asarray(cfg.garch[: cfg.d], dtype=np.float64)
        omega, beta, alpha = params[:, 0], params[:, 1], params[:, 2]
        x = np.empty_like(eps)
        sig2 = omega / (1.0 - beta - alpha)
        x[0] = eps[0]
        for i in range(1, eps.shape[0]):
            sig2 = omega + beta * sig2 + alpha * eps[i - 1] ** 2
            x[i] = np.sqrt(sig2) * eps[i]
    return np.ascontiguousarray(x[cfg.burn_in + 1 :])
