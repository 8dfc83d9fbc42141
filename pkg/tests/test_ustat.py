import math

import numpy as np
import pytest

from ustatboot import (
    GINI,
    KENDALL,
    VARIANCE,
    build_prefix_table,
    custom_kernel,
    get_kernel,
    kernel_eval,
    process_dn,
    process_un,
    pseudo_obs,
    statistic_sn,
    u_statistic,
)
from ustatboot.errors import ArgumentError, DataError, SizeError
from ustatboot.ustat import argmax_dn, path_value

import naive


# kernels


def test_kernel_examples():
    assert kernel_eval("variance", 1.0, 3.0) == 2.0
    assert kernel_eval("kendall", (0, 0), (1, 1)) == 1.0
    assert kernel_eval("kendall", (0, 1), (1, 0)) == 0.0
    for x in (-2.5, 0.0, 7.1):
        assert kernel_eval("gini", x, x) == 0.0


def test_kendall_ties_are_not_concordant():
    assert kernel_eval(KENDALL, (0, 0), (0, 1)) == 0.0
    assert kernel_eval(KENDALL, (0, 0), (0, 0)) == 0.0


def test_kernel_symmetry_on_random_pairs():
    rng = np.random.default_rng(0)
    for kern, d in ((VARIANCE, 1), (GINI, 1), (KENDALL, 3)):
        for _ in range(50):
            x, y = rng.standard_normal(d), rng.standard_normal(d)
            assert kern(x, y) == kern(y, x)


def test_kernel_dimension_mismatch():
    with pytest.raises(ArgumentError):
        kernel_eval("variance", (1.0, 2.0), (3.0, 4.0))
    with pytest.raises(ArgumentError):
        kernel_eval("kendall", (1.0, 2.0), (3.0,))
    with pytest.raises(ArgumentError):
        build_prefix_table(np.zeros((5, 2)), "gini")


def test_kernel_aliases_and_unknown():
    assert get_kernel("e") is VARIANCE
    assert get_kernel("f") is GINI
    assert get_kernel("g") is KENDALL
    with pytest.raises(ArgumentError):
        get_kernel("nope")


def test_custom_kernel_matches_builtin():
    kern = custom_kernel(lambda x, y: 0.5 * (x[0] - y[0]) ** 2, name="half-square", dim=1)
    x = np.random.default_rng(1).standard_normal(15)
    a = build_prefix_table(x, kern)
    b = build_prefix_table(x, VARIANCE)
    assert u_statistic(a, 1, 15) == pytest.approx(u_statistic(b, 1, 15), rel=1e-13)


def test_non_finite_data_rejected():
    with pytest.raises(DataError):
        build_prefix_table([1.0, np.nan, 2.0], "variance")


def test_non_finite_kernel_value_names_pair():
    bad = custom_kernel(lambda x, y: np.inf if x[0] * y[0] == 2.0 else 0.0, name="bad", dim=1)
    with pytest.raises(DataError, match="X_1.*X_2|X_2.*X_1"):
        build_prefix_table([1.0, 2.0, 3.0], bad)


# U-statistics and pseudo-observations


def test_u_statistic_examples():
    assert u_statistic(build_prefix_table([0.0, 2.0, 4.0], "e"), 1, 3) == pytest.approx(4.0)
    assert u_statistic(build_prefix_table([1.0, 2.0, 4.0], "f"), 1, 3) == pytest.approx(2.0)
    t = build_prefix_table(np.full(9, 3.3), "e")
    assert all(u_statistic(t, k, l) == 0.0 for k in range(1, 10) for l in range(k, 10))


def test_u_statistic_single_point_and_range_errors():
    t = build_prefix_table([1.0, 5.0, 2.0], "e")
    assert u_statistic(t, 2, 2) == 0.0
    for k, l in ((0, 2), (2, 1), (1, 4)):
        with pytest.raises(ArgumentError):
            u_statistic(t, k, l)
        with pytest.raises(ArgumentError):
            pseudo_obs(t, k, l)


def test_n_equal_one_table():
    t = build_prefix_table([4.2], "variance")
    assert t.n == 1
    assert u_statistic(t, 1, 1) == 0.0
    assert np.array_equal(pseudo_obs(t, 1, 1), [0.0])


def test_pseudo_obs_examples():
    t = build_prefix_table([0.0, 2.0, 4.0], "e")
    np.testing.assert_allclose(pseudo_obs(t, 1, 3), [1.0, -2.0, 1.0])
    np.testing.assert_array_equal(pseudo_obs(t, 2, 2), [0.0])


def test_u_statistic_matches_brute_force_n20():
    x = np.random.default_rng(3).standard_normal(20)
    t = build_prefix_table(x, "gini")
    K = naive.kmat(x, lambda a, b: abs(a - b))
    for k in range(2, 21):
        assert u_statistic(t, 1, k) == pytest.approx(naive.u_stat(K, 1, k), rel=1e-12)


def test_prefix_table_partition_identities():
    rng = np.random.default_rng(4)
    x = rng.standard_normal((25, 2))
    t = build_prefix_table(x, "kendall")
    n = t.n
    for i in range(1, n + 1):
        for k in range(0, n + 1):
            assert t.row_prefix(i, k) + t.row_suffix(i, k) == t.row_prefix(i, n)
    K = t.matrix
    for k in range(0, n + 1):
        cross = sum(t.row_suffix(i, k) for i in range(1, k + 1))
        assert t.pair_prefix[n] == pytest.approx(t.pair_prefix[k] + t.pair_suffix[k] + cross, abs=1e-9)
        assert t.pair_prefix[k] == pytest.approx(np.triu(K[:k, :k], 1).sum(), abs=1e-9)


def test_streaming_table_matches_dense():
    x = np.random.default_rng(5).standard_normal(60)
    dense = build_prefix_table(x, "gini")
    stream = build_prefix_table(x, "gini", dense_threshold=10)
    np.testing.assert_allclose(stream.pair_prefix, dense.pair_prefix, rtol=1e-13)
    np.testing.assert_allclose(stream.rows(10, 20), dense.rows(10, 20))
    np.testing.assert_allclose(pseudo_obs(stream, 3, 40), pseudo_obs(dense, 3, 40), atol=1e-13)


# processes


def test_process_un_examples():
    t = build_prefix_table(np.full(6, 1.5), "e")
    assert np.all(process_un(t, 0.0) == 0.0)
    path = process_un(build_prefix_table([0.0, 2.0], "e"), theta=1.0)
    assert path[0] == path[1] == 0.0
    assert path[2] == pytest.approx(math.sqrt(2.0))


def test_process_un_size_error():
    with pytest.raises(SizeError):
        process_un(build_prefix_table([1.0], "e"), 0.0)


def test_process_dn_examples():
    assert np.all(process_dn(build_prefix_table(np.ones(10), "e")) == 0.0)
    path = process_dn(build_prefix_table([0.0, 2.0, 0.0, 2.0], "e"))
    assert path[2] == pytest.approx(0.0, abs=1e-15)
    assert statistic_sn(path) == pytest.approx(0.0, abs=1e-15)
    x = np.array([3.0, -1.0, 0.5, 2.0, 7.0, -4.0])
    t = build_prefix_table(np.concatenate([x, x[::-1]]), "gini")
    assert process_dn(t)[6] == pytest.approx(0.0, abs=1e-12)


def test_process_dn_support_and_size_error():
    path = process_dn(build_prefix_table(np.random.default_rng(6).standard_normal(12), "e"))
    assert path[0] == path[1] == path[11] == path[12] == 0.0
    with pytest.raises(SizeError):
        process_dn(build_prefix_table([1.0, 2.0, 3.0], "e"))


def test_statistic_sn_examples():
    assert statistic_sn(np.zeros(11)) == 0.0
    path = np.zeros(11)
    path[4] = -3.5
    assert statistic_sn(path) == 3.5
    assert statistic_sn(np.zeros(4)) == 0.0


def test_argmax_ties_go_to_smallest_index():
    path = np.zeros(11)
    path[3] = 2.0
    path[7] = -2.0
    assert argmax_dn(path) == 3
    assert argmax_dn(np.zeros(11)) == 2


def test_path_value_floor_grid():
    path = np.arange(11.0)
    assert path_value(path, 0.0) == 0.0
    assert path_value(path, 0.35) == 3.0
    assert path_value(path, 0.3) == 3.0
    assert path_value(path, 1.0) == 10.0
