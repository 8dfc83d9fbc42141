import numpy as np
import pytest
from scipy import stats

from ustatboot.datagen import (
    DEFAULT_GARCH,
    CopulaSpec,
    DgpConfig,
    copula_parameter,
    generate,
    sample_copula,
)
from ustatboot.errors import ArgumentError


def _tau(u):
    return stats.kendalltau(u[:, 0], u[:, 1])[0]


def test_copula_parameters():
    assert copula_parameter("clayton", 0.5) == pytest.approx(2.0)
    assert copula_parameter("gumbel", 0.5) == pytest.approx(2.0)
    assert copula_parameter("gh", 0.0) == 1.0
    with pytest.raises(ArgumentError):
        copula_parameter("clayton", 1.0)
    with pytest.raises(ArgumentError):
        copula_parameter("frank", 0.2)


@pytest.mark.parametrize("family", ["clayton", "gumbel"])
@pytest.mark.parametrize("tau", [0.0, 0.2, 0.5, 0.8])
def test_copula_kendall_tau(family, tau):
    u = sample_copula(family, tau, 100000, np.random.default_rng(int(tau * 10)))
    assert u.shape == (100000, 2)
    assert np.all((u > 0.0) & (u < 1.0))
    assert _tau(u) == pytest.approx(tau, abs=0.01)


def test_copula_uniform_margins():
    u = sample_copula("gumbel", 0.6, 50000, np.random.default_rng(1))
    for j in range(2):
        assert stats.kstest(u[:, j], "uniform").pvalue > 1e-3


def test_clayton_lower_tail_dependence():
    # Clayton is lower-tail dependent, Gumbel upper-tail dependent
    rng = np.random.default_rng(2)
    cl = sample_copula("clayton", 0.5, 200000, rng)
    gh = sample_copula("gumbel", 0.5, 200000, rng)
    q = 0.01
    low = lambda u: np.mean((u[:, 0] < q) & (u[:, 1] < q)) / q
    high = lambda u: np.mean((u[:, 0] > 1 - q) & (u[:, 1] > 1 - q)) / q
    assert low(cl) > high(cl)
    assert high(gh) > low(gh)


def test_iid_copula_rows_have_normal_margins():
    cfg = DgpConfig(n=100000, d=2, innovations="copula", copula=CopulaSpec("clayton", 0.3))
    x = generate(cfg, 3)
    assert np.var(x, axis=0) == pytest.approx([1.0, 1.0], rel=0.05)
    assert _tau(x) == pytest.approx(0.3, abs=0.01)


def test_ar1_autocorrelation():
    x = generate(DgpConfig(n=100000, zeta=0.5), 4)[:, 0]
    assert np.corrcoef(x[:-1], x[1:])[0, 1] == pytest.approx(0.5, abs=0.01)


def test_garch_stable():
    cfg = DgpConfig(n=100000, d=2, model="garch", innovations="copula", copula=CopulaSpec("gumbel", 0.4))
    x = generate(cfg, 5)
    assert np.all(np.isfinite(x))
    omega, beta, alpha = DEFAULT_GARCH[0]
    assert np.var(x[:, 0]) == pytest.approx(omega / (1 - beta - alpha), rel=0.3)


def test_break_in_copula():
    cfg = DgpConfig(
        n=40000, d=2, innovations="copula",
        copula=CopulaSpec("gh", 0.2), copula_after=CopulaSpec("gh", 0.6), break_frac=0.25,
    )
    x = generate(cfg, 6)
    assert _tau(x[:10000]) == pytest.approx(0.2, abs=0.02)
    assert _tau(x[10000:]) == pytest.approx(0.6, abs=0.02)


def test_reproducible_and_shapes():
    cfg = DgpConfig(n=50, innovations="t5", zeta=0.3)
    a, b = generate(cfg, 7), generate(cfg, np.random.default_rng(7))
    np.testing.assert_array_equal(a, b)
    assert a.shape == (50, 1)


def test_burn_in_does_not_change_distribution():
    a = np.concatenate([generate(DgpConfig(n=200, zeta=0.7, burn_in=100), s)[:, 0] for s in range(200)])
    b = np.concatenate([generate(DgpConfig(n=200, zeta=0.7, burn_in=200), 1000 + s)[:, 0] for s in range(200)])
    assert a.shape == b.shape
    assert stats.ks_2samp(a[::10], b[::10]).pvalue > 1e-3


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 0},
        {"n": 10, "zeta": 1.0},
        {"n": 10, "model": "arma"},
        {"n": 10, "model": "garch", "garch": ((0.1, 0.6, 0.5),)},
        {"n": 10, "innovations": "copula"},
        {"n": 10, "innovations": "copula", "copula": CopulaSpec("clayton", 0.2), "break_frac": 1.0},
        {"n": 10, "innovations": "cauchy"},
    ],
)
def test_invalid_configs(kwargs):
    with pytest.raises(ArgumentError):
        DgpConfig(**kwargs)
