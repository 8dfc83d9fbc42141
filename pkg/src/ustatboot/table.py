"""Pairwise kernel aggregates shared by all U-statistic computations."""

from __future__ import annotations

import numpy as np

from .errors import ArgumentError, DataError
from .kernels import Kernel, as_sample, get_kernel

__all__ = ["PrefixTable", "build_prefix_table", "DENSE_THRESHOLD"]

DENSE_THRESHOLD = 4096
_BLOCK_ROWS = 512


class PrefixTable:
    """Cached kernel sums over a sample ``X_1, ..., X_n``.

    With ``K[i, j] = h(X_i, X_j)`` for ``i != j`` and ``K[i, i] = 0`` the
    table holds (indices 1-based, as in the formulas)

    * ``lower[i] = sum_{j < i} K[i, j]`` and ``upper[i] = sum_{j > i} K[i, j]``,
    * ``pair_prefix[k] = P(k) = sum_{1 <= i < j <= k} K[i, j]``, ``k = 0..n``,
    * ``pair_suffix[k] = Q(k) = sum_{k < i < j <= n} K[i, j]``, ``k = 0..n``.

    The dense matrix ``K`` is kept when ``n <= dense_threshold``; above it,
    kernel rows are recomputed in blocks whenever they are needed.
    Instances are read-only after construction.
    """

    def __init__(self, sample, kernel: str | Kernel, dense_threshold: int = DENSE_THRESHOLD):
        x = as_sample(sample)
        kernel = get_kernel(kernel)
        kernel.check_dim(x.shape[1])
        self.data = x
        self.kernel = kernel
        self.n, self.d = x.shape
        self.dense = self.n <= dense_threshold

        n = self.n
        lower = np.zeros(n)
        upper = np.zeros(n)
        matrix = np.empty((n, n)) if self.dense else None
        for start in range(0, n, _BLOCK_ROWS):
            stop = min(start + _BLOCK_ROWS, n)
            block = self._compute_rows(start, stop)
            cols = np.arange(n)
            rows = np.arange(start, stop)[:, None]
            lower[start:stop] = np.where(cols[None, :] < rows, block, 0.0).sum(axis=1)
            upper[start:stop] = np.where(cols[None, :] > rows, block, 0.0).sum(axis=1)
            if matrix is not None:
                matrix[start:stop] = block
        self._matrix = matrix
        if matrix is not None:
            matrix.setflags(write=False)
        self.lower = lower
        self.upper = upper
        self.row_totals = lower + upper

        # Extended precision for the running sums of O(n^2) mixed-sign terms.
        acc = np.zeros(n + 1, dtype=np.longdouble)
        acc[1:] = np.cumsum(lower.astype(np.longdouble))
        self.pair_prefix = acc.astype(np.float64)
        acc = np.zeros(n + 1, dtype=np.longdouble)
        acc[:-1] = np.cumsum(upper[::-1].astype(np.longdouble))[::-1]
        self.pair_suffix = acc.astype(np.float64)
        for arr in (self.lower, self.upper, self.row_totals, self.pair_prefix, self.pair_suffix):
            arr.setflags(write=False)

    def _compute_rows(self, start: int, stop: int) -> np.ndarray:
        block = np.asarray(
            self.kernel.pairwise(self.data[start:stop], self.data), dtype=np.float64
        )
        idx = np.arange(start, stop)
        block[idx - start, idx] = 0.0
        bad = ~np.isfinite(block)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise DataError(
                f"non-finite kernel value h(X_{start + i + 1}, X_{j + 1})"
            )
        return block

    @property
    def matrix(self) -> np.ndarray:
        """The full kernel matrix (recomputed when not cached)."""
        if self._matrix is not None:
            return self._matrix
        return self.rows(0, self.n)

    def rows(self, start: int, stop: int) -> np.ndarray:
        """Kernel rows ``start..stop-1`` (0-based, half-open) as a block."""
        if self._matrix is not None:
            return self._matrix[start:stop]
        return self._compute_rows(start, stop)

    def submatrix(self, k: int, l: int) -> np.ndarray:
        """Kernel values among observations ``k..l`` (1-based, inclusive)."""
        if self._matrix is not None:
            return self._matrix[k - 1 : l, k - 1 : l]
        return self._compute_rows(k - 1, l)[:, k - 1 : l]

    def row_prefix(self, i: int, k: int) -> float:
        """``R_i(k) = sum_{j <= k, j != i} h(X_i, X_j)`` (1-based)."""
        self._check_index(i, 1)
        self._check_index(k, 0)
        return float(self.rows(i - 1, i)[0, :k].sum())

    def row_suffix(self, i: int, k: int) -> float:
        """``T_i(k) = sum_{j > k, j != i} h(X_i, X_j)`` (1-based)."""
        self._check_index(i, 1)
        self._check_index(k, 0)
        return float(self.rows(i - 1, i)[0, k:].sum())

    def u_prefix(self) -> np.ndarray:
        """``U_{h,1:k}`` for ``k = 0..n``; entries ``k < 2`` are 0."""
        k = np.arange(self.n + 1)
        pairs = k * (k - 1) / 2.0
        out = np.zeros(self.n + 1)
        ok = k >= 2
        out[ok] = self.pair_prefix[ok] / pairs[ok]
        return out

    def u_suffix(self) -> np.ndarray:
        """``U_{h,k+1:n}`` for ``k = 0..n``; entries with fewer than two points are 0."""
        m = self.n - np.arange(self.n + 1)
        pairs = m * (m - 1) / 2.0
        out = np.zeros(self.n + 1)
        ok = m >= 2
        out[ok] = self.pair_suffix[ok] / pairs[ok]
        return out

    def _check_index(self, k: int, low: int) -> None:
        if not low <= k <= self.n:
            raise ArgumentError(f"index {k} outside [{low}, {self.n}]")

    def __repr__(self) -> str:
        return (
            f"PrefixTable(n={self.n}, d={self.d}, kernel={self.kernel.name!r}, "
            f"dense={self.dense})"
        )


def build_prefix_table(sample, kernel: str | Kernel, dense_threshold: int = DENSE_THRESHOLD) -> PrefixTable:
    """Evaluate all pairwise kernel values once and cache their aggregates."""
    return PrefixTable(sample, kernel, dense_threshold=dense_threshold)
