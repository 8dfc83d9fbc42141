"""Dependent multiplier bootstrap replicates of the sequential processes.

Two flavours are available for every process:

* ``"hat"`` weights the full-sample pseudo-observations ``hat h_{1,1:n}``;
* ``"check"`` weights the pseudo-observations of the current window,
  ``hat h_{1,1:k}`` for the forward process and ``hat h_{1,k+1:n}`` for the
  backward one.

For the check flavour the window sums are accumulated incrementally. With
``K`` the kernel matrix (zero diagonal) and ``xi`` a multiplier row,

    A(k)  = sum_{i, j <= k} xi_i K[i, j]
          = A(k - 1) + xi_k * sum_{j < k} K[k, j] + sum_{i < k} xi_i K[i, k],

and the last term is column ``k`` of ``xi @ triu(K, 1)``, so a whole batch of
``M`` replicates costs two ``(M, n) x (n, n)`` products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ArgumentError, SizeError
from .multiplier import MultiplierBatch
from .table import PrefixTable
from .ustat import pseudo_obs

__all__ = [
    "ReplicateSet",
    "replicate_un",
    "replicate_un_star",
    "replicate_dn",
    "replicate_batch",
]

Method = Literal["hat", "check"]
Target = Literal["un", "un_star", "dn"]

_BLOCK = 1024


def _check_method(method: str) -> str:
    method = str(method).lower()
    if method not in ("hat", "check"):
        raise ArgumentError(f"method must be 'hat' or 'check', got {method!r}")
    return method


def _as_rows(table: PrefixTable, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=np.float64)
    rows = np.atleast_2d(xi)
    if rows.ndim != 2 or rows.shape[1] != table.n:
        raise ArgumentError(
            f"multipliers must have length n={table.n}, got shape {xi.shape}"
        )
    return rows


def _triangular_products(table: PrefixTable, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``xi @ triu(K, 1)`` and ``xi @ tril(K, -1)``."""
    n = table.n
    upper = np.zeros_like(xi)
    lower = np.zeros_like(xi)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        block = table.rows(start, stop)
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(n)[None, :]
        upper += xi[:, start:stop] @ np.where(cols > rows, block, 0.0)
        lower += xi[:, start:stop] @ np.where(cols < rows, block, 0.0)
    return upper, lower


def _forward(table: PrefixTable, xi: np.ndarray, method: str, upper=None) -> np.ndarray:
    n = table.n
    scale = 2.0 / math.sqrt(n)
    out = np.zeros((xi.shape[0], n + 1))
    if method == "hat":
        h = pseudo_obs(table, 1, n)
        out[:, 1:] = scale * np.cumsum(xi * h, axis=1)
        return out
    if upper is None:
        upper, _ = _triangular_products(table, xi)
    acc = np.cumsum(xi * table.lower + upper, axis=1)
    xsum = np.cumsum(xi, axis=1)
    k = np.arange(2, n + 1)
    u = table.u_prefix()[2:]
    out[:, 2:] = scale * (acc[:, 1:] / (k - 1) - u * xsum[:, 1:])
    return out


def _backward(table: PrefixTable, xi: np.ndarray, method: str, lower=None) -> np.ndarray:
    n = table.n
    scale = 2.0 / math.sqrt(n)
    out = np.zeros((xi.shape[0], n + 1))
    if method == "hat":
        h = pseudo_obs(table, 1, n)
        terms = xi * h
        # out[:, k] = sum over i > k (1-based), i.e. 0-based columns k..n-1
        out[:, :n] = scale * np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
        return out
    if lower is None:
        _, lower = _triangular_products(table, xi)
    terms = xi * table.upper + lower
    acc = np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
    xsum = np.cumsum(xi[:, ::-1], axis=1)[:, ::-1]
    # suffix k+1..n has length n - k >= 2 for k = 0..n-2
    k = np.arange(0, n - 1)
    size = n - k
    u = table.u_suffix()[: n - 1]
    out[:, : n - 1] = scale * (acc[:, : n - 1] / (size - 1) - u * xsum[:, : n - 1])
    return out


def _dn(table: PrefixTable, xi: np.ndarray, method: str) -> np.ndarray:
    n = table.n
    if n < 4:
        raise SizeError(f"D_n replicates need n >= 4, got n={n}")
    upper = lower = None
    if method == "check":
        upper, lower = _triangular_products(table, xi)
    fwd = _forward(table, xi, method, upper=upper)
    bwd = _backward(table, xi, method, lower=lower)
    k = np.arange(n + 1)
    return ((n - k) / n) * fwd - (k / n) * bwd


def replicate_un(table: PrefixTable, xi, method: Method = "check") -> np.ndarray:
    """Bootstrap replicate of the forward process ``U_n``.

    ``hat``: ``(2/sqrt(n)) sum_{i<=k} xi_i hat h_{1,1:n}(X_i)``;
    ``check``: ``(2/sqrt(n)) sum_{i<=k} xi_i hat h_{1,1:k}(X_i)``.
    Both flavours coincide at ``k = n``.
    """
    method = _check_method(method)
    rows = _as_rows(table, xi)
    if table.n < 2:
        raise SizeError(f"U_n replicates need n >= 2, got n={table.n}")
    out = _forward(table, rows, method)
    return out[0] if np.ndim(xi) == 1 else out


def replicate_un_star(table: PrefixTable, xi, method: Method = "check") -> np.ndarray:
    """Bootstrap replicate of the backward process ``U_n^*``.

    ``hat``: ``(2/sqrt(n)) sum_{i>k} xi_i hat h_{1,1:n}(X_i)``;
    ``check``: ``(2/sqrt(n)) sum_{i>k} xi_i hat h_{1,k+1:n}(X_i)``, which is 0
    once the suffix holds a single observation.
    """
    method = _check_method(method)
    rows = _as_rows(table, xi)
    if table.n < 2:
        raise SizeError(f"U_n^* replicates need n >= 2, got n={table.n}")
    out = _backward(table, rows, method)
    return out[0] if np.ndim(xi) == 1 else out


def replicate_dn(table: PrefixTable, xi, method: Method = "check") -> np.ndarray:
    """Bootstrap replicate ``((n-k)/n) U_rep(k) - (k/n) U*_rep(k)`` of ``D_n``."""
    method = _check_method(method)
    rows = _as_rows(table, xi)
    out = _dn(table, rows, method)
    return out[0] if np.ndim(xi) == 1 else out


@dataclass(frozen=True)
class ReplicateSet:
    """``M`` replicate paths on the grid ``k = 0..n``.

    For ``D_n`` targets ``stats[m]`` is ``max_{2<=k<=n-2} |paths[m, k]|``.
    """

    method: str
    target: str
    paths: np.ndarray = field(repr=False)
    stats: np.ndarray | None = field(default=None, repr=False)

    @property
    def M(self) -> int:
        return self.paths.shape[0]


def replicate_batch(
    table: PrefixTable,
    batch: MultiplierBatch | np.ndarray,
    target: Target = "dn",
    method: Method = "check",
) -> ReplicateSet:
    """Replicates of ``U_n``, ``U_n^*`` or ``D_n`` for every multiplier row."""
    method = _check_method(method)
    xi = batch.sequences if isinstance(batch, MultiplierBatch) else np.asarray(batch, dtype=np.float64)
    if xi.ndim != 2 or xi.shape[1] != table.n:
        raise ArgumentError(
            f"multiplier batch must be (M, n={table.n}), got shape {xi.shape}"
        )
    if target == "un":
        paths = replicate_un(table, xi, method)
        return ReplicateSet(method, target, paths)
    if target == "un_star":
        paths = replicate_un_star(table, xi, method)
        return ReplicateSet(method, target, paths)
    if target == "dn":
        paths = _dn(table, xi, method)
        n = table.n
        stats = np.abs(paths[:, 2 : n - 1]).max(axis=1)
        return ReplicateSet(method, target, paths, stats)
    raise ArgumentError(f"target must be 'un', 'un_star' or 'dn', got {target!r}")
