"""Dependent multiplier bootstraps for U-statistics of weakly dependent time series.

The package offers confidence intervals for the target ``theta = E h(X, X')``
of an order-2 U-statistic and change-point tests based on
``S_n = max_k |D_n(k/n)|``, together with the simulation tools used to
study them.
"""

from .bandwidth import BandwidthDiagnostics, estimate_bandwidth, longrun_variance
from .bootstrap import ReplicateSet, replicate_batch, replicate_dn, replicate_un, replicate_un_star
from .datagen import CopulaSpec, DgpConfig, generate, sample_copula
from .errors import ArgumentError, DataError, SizeError, UstatError
from .inference import (
    CIResult,
    CpTestResult,
    ci_asymptotic,
    ci_bootstrap,
    cp_test,
    cp_tests,
    kolmogorov_cdf,
)
from .kernels import GINI, KENDALL, VARIANCE, Kernel, custom_kernel, get_kernel, kernel_eval
from .montecarlo import McConfig, McResult, run_monte_carlo
from .multiplier import MultiplierBatch, MultiplierConfig, gen_multipliers, phi
from .table import PrefixTable, build_prefix_table
from .ustat import argmax_dn, process_dn, process_un, pseudo_obs, statistic_sn, u_statistic

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BandwidthDiagnostics",
    "CIResult",
    "CopulaSpec",
    "CpTestResult",
    "DataError",
    "DgpConfig",
    "GINI",
    "KENDALL",
    "Kernel",
    "McConfig",
    "McResult",
    "MultiplierBatch",
    "MultiplierConfig",
    "PrefixTable",
    "ReplicateSet",
    "SizeError",
    "UstatError",
    "VARIANCE",
    "argmax_dn",
    "build_prefix_table",
    "ci_asymptotic",
    "ci_bootstrap",
    "cp_test",
    "cp_tests",
    "custom_kernel",
    "estimate_bandwidth",
    "gen_multipliers",
    "generate",
    "get_kernel",
    "kernel_eval",
    "kolmogorov_cdf",
    "longrun_variance",
    "phi",
    "process_dn",
    "process_un",
    "pseudo_obs",
    "replicate_batch",
    "replicate_dn",
    "replicate_un",
    "replicate_un_star",
    "run_monte_carlo",
    "sample_copula",
    "statistic_sn",
    "u_statistic",
]
