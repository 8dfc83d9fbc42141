"""Symmetric kernels of order two and sample validation.

Three kernels ship with the library:

* ``variance``: ``e(x, y) = (x - y)**2 / 2``, whose U-statistic is the
  unbiased sample variance (``d = 1``);
* ``gini``: ``f(x, y) = |x - y|``, Gini's mean difference (``d = 1``);
* ``kendall``: ``g(x, y) = 1(x < y) + 1(y < x)`` with strict componentwise
  order, a multivariate concordance probability (any ``d >= 1``).

Custom kernels are wrapped with :func:`custom_kernel`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ArgumentError, DataError

__all__ = [
    "Kernel",
    "VARIANCE",
    "GINI",
    "KENDALL",
    "custom_kernel",
    "get_kernel",
    "kernel_eval",
    "as_sample",
]


def _variance_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    diff = x[:, None, 0] - y[None, :, 0]
    return 0.5 * diff * diff


def _gini_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.abs(x[:, None, 0] - y[None, :, 0])


def _kendall_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    less = np.ones((x.shape[0], y.shape[0]), dtype=bool)
    greater = np.ones_like(less)
    for c in range(x.shape[1]):
        xc = x[:, None, c]
        yc = y[None, :, c]
        less &= xc < yc
        greater &= xc > yc
    return less.astype(np.float64) + greater.astype(np.float64)


@dataclass(frozen=True)
class Kernel:
    """A symmetric kernel ``h`` of two d-vectors.

    Parameters
    ----------
    name : str
        Identifier used in reports (``"variance"``, ``"gini"``, ``"kendall"``
        or the name given to a custom kernel).
    pairwise : callable
        ``pairwise(x, y)`` maps an ``(a, d)`` and a ``(b, d)`` array to the
        ``(a, b)`` matrix of kernel values.
    dim : int or None
        Required dimension, or ``None`` when any ``d >= 1`` is accepted.
    """

    name: str
    pairwise: Callable[[np.ndarray, np.ndarray], np.ndarray]
    dim: int | None = None

    def check_dim(self, d: int) -> None:
        if self.dim is not None and d != self.dim:
            raise ArgumentError(
                f"kernel '{self.name}' requires d={self.dim}, got d={d}"
            )

    def __call__(self, x, y) -> float:
        return kernel_eval(self, x, y)


VARIANCE = Kernel("variance", _variance_matrix, dim=1)
GINI = Kernel("gini", _gini_matrix, dim=1)
KENDALL = Kernel("kendall", _kendall_matrix, dim=None)

_BUILTIN = {k.name: k for k in (VARIANCE, GINI, KENDALL)}
_ALIASES = {"e": "variance", "f": "gini", "g": "kendall"}


def custom_kernel(
    func: Callable[[np.ndarray, np.ndarray], float],
    name: str = "custom",
    dim: int | None = None,
) -> Kernel:
    """Wrap a scalar function ``func(x, y)`` of two d-vectors as a kernel.

    ``func`` must be symmetric. It is evaluated once per pair, so the
    resulting kernel is slow for large samples.
    """

    def pairwise(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.empty((x.shape[0], y.shape[0]))
        for i in range(x.shape[0]):
            for j in range(y.shape[0]):
                out[i, j] = func(x[i], y[j])
        return out

    return Kernel(name, pairwise, dim=dim)


def get_kernel(kernel: str | Kernel) -> Kernel:
    """Return a :class:`Kernel` from a name or pass an instance through."""
    if isinstance(kernel, Kernel):
        return kernel
    key = str(kernel).lower()
    key = _ALIASES.get(key, key)
    try:
        return _BUILTIN[key]
    except KeyError:
        raise ArgumentError(
            f"unknown kernel '{kernel}'; expected one of {sorted(_BUILTIN)}"
        ) from None


def as_sample(data) -> np.ndarray:
    """Validate observations and return them as an ``(n, d)`` float array.

    A one-dimensional input is treated as ``n`` scalar observations.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ArgumentError(f"sample must be 1- or 2-dimensional, got {x.ndim}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ArgumentError(f"sample must have n >= 1 and d >= 1, got {x.shape}")
    if not np.all(np.isfinite(x)):
        i, j = np.argwhere(~np.isfinite(x))[0]
        raise DataError(f"non-finite observation at row {i}, column {j}")
    return x


def kernel_eval(kernel: str | Kernel, x, y) -> float:
    """Evaluate the kernel at a single pair of d-vectors."""
    kernel = get_kernel(kernel)
    xv = np.atleast_1d(np.asarray(x, dtype=np.float64))
    yv = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if xv.ndim != 1 or xv.shape != yv.shape:
        raise ArgumentError(
            f"kernel arguments must be d-vectors of equal length, "
            f"got shapes {xv.shape} and {yv.shape}"
        )
    kernel.check_dim(xv.shape[0])
    if not (np.all(np.isfinite(xv)) and np.all(np.isfinite(yv))):
        raise DataError("kernel arguments must be finite")
    return float(kernel.pairwise(xv[None, :], yv[None, :])[0, 0])
