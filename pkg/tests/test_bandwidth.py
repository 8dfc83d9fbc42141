import math

import numpy as np
import pytest
from scipy.signal import lfilter

from ustatboot.bandwidth import (
    autocovariance,
    autocovariances,
    estimate_bandwidth,
    flat_top,
    longrun_variance,
    select_Ln,
)
from ustatboot.errors import ArgumentError, SizeError


def test_autocovariance_examples():
    y = [1.0, -1.0, 1.0, -1.0]
    assert autocovariance(y, 0) == pytest.approx(1.0)
    assert autocovariance(y, 1) == pytest.approx(-0.75)
    assert np.all(autocovariances(np.full(10, 2.5), 9) == 0.0)
    with pytest.raises(ArgumentError):
        autocovariance(y, 4)


def test_autocovariance_bounded_by_variance():
    y = np.random.default_rng(0).standard_normal(200)
    g = autocovariances(y, 199)
    assert np.all(np.abs(g) <= g[0] + 1e-15)


def test_autocovariance_matches_numpy():
    y = np.random.default_rng(1).standard_normal(50)
    yc = y - y.mean()
    for k in (0, 1, 7, 49):
        assert autocovariance(y, k) == pytest.approx(np.sum(yc[: 50 - k] * yc[k:]) / 50)


def test_flat_top_examples():
    assert flat_top(0.0) == 1.0
    assert flat_top(0.5) == 1.0
    assert flat_top(0.75) == 0.5
    assert flat_top(1.0) == 0.0 and flat_top(-3.0) == 0.0


def test_select_Ln_iid_and_constant():
    y = np.random.default_rng(2).standard_normal(500)
    assert select_Ln(y) == 1
    assert select_Ln(np.zeros(40)) == 1
    assert select_Ln(np.full(40, 7.0)) == 1


def test_select_Ln_large_lag_one_only():
    # MA(1) with a large lag-1 correlation and nothing beyond
    rng = np.random.default_rng(3)
    e = rng.standard_normal(20001)
    y = e[1:] + e[:-1]
    assert abs(autocovariance(y, 1) / autocovariance(y, 0)) > 0.45
    assert select_Ln(y) == 1


def test_select_Ln_strong_dependence_and_cap():
    rng = np.random.default_rng(4)
    y = lfilter([1.0], [1.0, -0.9], rng.standard_normal(1000))
    assert select_Ln(y) > 5
    trend = np.arange(100.0)
    assert select_Ln(trend) == math.ceil(math.sqrt(100))


def test_small_sizes_rejected():
    with pytest.raises(SizeError):
        select_Ln(np.ones(7))
    with pytest.raises(SizeError):
        estimate_bandwidth(np.ones(7))
    with pytest.raises(SizeError):
        longrun_variance([1.0], 1)


def test_estimate_bandwidth_degenerate_branches():
    diag = estimate_bandwidth(np.zeros(50))
    assert diag.ell_opt == 1 and diag.Delta_hat == 0.0
    iid = estimate_bandwidth(np.random.default_rng(5).standard_normal(400))
    assert iid.Ln == 1 and iid.ell_opt >= 1


def test_estimate_bandwidth_invariants():
    rng = np.random.default_rng(6)
    for zeta in (0.0, 0.3, 0.7):
        for n in (20, 300):
            y = lfilter([1.0], [1.0, -zeta], rng.standard_normal(n))
            diag = estimate_bandwidth(y)
            assert diag.gamma_hat[0] >= 0.0
            assert diag.Delta_hat >= 0.0
            assert 1 <= diag.ell_opt <= n // 2
            assert diag.Ln >= 1


def test_bandwidth_grows_with_dependence():
    rng = np.random.default_rng(7)
    mean_ell = []
    for zeta in (0.2, 0.5, 0.8):
        vals = [estimate_bandwidth(lfilter([1.0], [1.0, -zeta], rng.standard_normal(1000))).ell_opt for _ in range(30)]
        mean_ell.append(np.mean(vals))
    assert mean_ell[0] < mean_ell[1] < mean_ell[2]


def test_longrun_variance_examples():
    y = np.random.default_rng(8).standard_normal(40)
    assert longrun_variance(y, 1) == pytest.approx(np.dot(y, y) / 40)
    assert longrun_variance(np.zeros(10), 3) == 0.0
    with pytest.raises(ArgumentError):
        longrun_variance(y, 0)


def test_longrun_variance_close_to_truth_for_ar1():
    zeta = 0.5
    rng = np.random.default_rng(9)
    est = [longrun_variance(lfilter([1.0], [1.0, -zeta], rng.standard_normal(5000)), 25) for _ in range(20)]
    # spectral density at zero times 2 pi: 1 / (1 - zeta)^2 = 4
    assert np.mean(est) == pytest.approx(1.0 / (1.0 - zeta) ** 2, rel=0.1)
