"""U-statistics over index ranges, pseudo-observations and sequential processes.

Index ranges ``k..l`` are 1-based and inclusive so that they read like the
usual ``U_{h,k:l}`` notation. Process paths are arrays of length ``n + 1``
whose entry ``k`` is the value of the process at ``s = k / n``; the value at
any ``s`` in ``[0, 1]`` is the entry at ``floor(n * s)``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ArgumentError, SizeError
from .table import PrefixTable

__all__ = [
    "u_statistic",
    "pseudo_obs",
    "process_un",
    "process_dn",
    "statistic_sn",
    "argmax_dn",
    "path_value",
]


def _check_range(table: PrefixTable, k: int, l: int) -> None:
    if not 1 <= k <= l <= table.n:
        raise ArgumentError(f"need 1 <= k <= l <= n={table.n}, got k={k}, l={l}")


def u_statistic(table: PrefixTable, k: int, l: int) -> float:
    """``U_{h,k:l}``, the kernel average over pairs in ``k..l``.

    A single-point range gives 0.
    """
    _check_range(table, k, l)
    if k == l:
        return 0.0
    pairs = math.comb(l - k + 1, 2)
    if k == 1:
        return float(table.pair_prefix[l]) / pairs
    if l == table.n:
        return float(table.pair_suffix[k - 1]) / pairs
    sub = table.submatrix(k, l)
    return float(np.triu(sub, 1).sum()) / pairs


def pseudo_obs(table: PrefixTable, k: int, l: int) -> np.ndarray:
    """Pseudo-observations ``hat h_{1,k:l}(X_i)`` for ``i = k..l``.

    ``hat h_{1,k:l}(X_i) = (l - k)^{-1} sum_{j in k..l, j != i} h(X_i, X_j) - U_{h,k:l}``,
    and the single-point range gives ``[0.0]``. The entries sum to zero.
    """
    _check_range(table, k, l)
    if k == l:
        return np.zeros(1)
    if k == 1 and l == table.n:
        sums = np.asarray(table.row_totals)
    else:
        sums = table.submatrix(k, l).sum(axis=1)
    return sums / (l - k) - u_statistic(table, k, l)


def process_un(table: PrefixTable, theta: float) -> np.ndarray:
    """Path of ``U_n(s) = sqrt(n) (k/n) (U_{h,1:k} - theta)``, zero for ``k < 2``."""
    n = table.n
    if n < 2:
        raise SizeError(f"process U_n needs n >= 2, got n={n}")
    if not math.isfinite(theta):
        raise ArgumentError("theta must be finite")
    k = np.arange(n + 1)
    out = math.sqrt(n) * (k / n) * (table.u_prefix() - theta)
    out[:2] = 0.0
    return out


def process_dn(table: PrefixTable) -> np.ndarray:
    """Path of ``D_n(s) = sqrt(n) (k/n) ((n-k)/n) (U_{h,1:k} - U_{h,k+1:n})``.

    Nonzero only on ``2 <= k <= n - 2``.
    """
    n = table.n
    if n < 4:
        raise SizeError(f"process D_n needs n >= 4, got n={n}")
    k = np.arange(n + 1)
    out = math.sqrt(n) * (k / n) * ((n - k) / n) * (table.u_prefix() - table.u_suffix())
    out[:2] = 0.0
    out[n - 1 :] = 0.0
    return out


def statistic_sn(path: np.ndarray) -> float:
    """``S_n = max_{2 <= k <= n-2} |D_n(k/n)|``; 0 when that range is empty."""
    path = np.asarray(path, dtype=np.float64)
    n = path.shape[-1] - 1
    if n < 4:
        stats = np.zeros(path.shape[:-1])
    else:
        stats = np.abs(path[..., 2 : n - 1]).max(axis=-1)
    return float(stats) if path.ndim == 1 else stats


def argmax_dn(path: np.ndarray) -> int:
    """Smallest ``k`` in ``2..n-2`` maximizing ``|D_n(k/n)|``."""
    path = np.asarray(path, dtype=np.float64)
    n = path.shape[0] - 1
    if n < 4:
        raise SizeError(f"D_n path needs n >= 4, got n={n}")
    return int(np.argmax(np.abs(path[2 : n - 1]))) + 2


def path_value(path: np.ndarray, s: float) -> float:
    """Value of a process path at ``s in [0, 1]`` (floor grid)."""
    if not 0.0 <= s <= 1.0:
        raise ArgumentError(f"s must lie in [0, 1], got {s}")
    n = len(path) - 1
    k = math.floor(n * s)
    # n * (k / n) may land just below k in floating point
    if k < n and n * s > k + 1 - 1e-9:
        k += 1
    return float(path[k])
