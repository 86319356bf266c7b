"""Exact counts, samplers and limit-law experiments for compositions of
random involutions."""

from .perm import (
    CycleType,
    PartialMatching,
    Permutation,
    Superposition,
    compose,
    cycle_type,
    induced_cycle_type,
    involutions,
    superpose,
)
from .series import TruncatedSeries, series_exp, series_log, series_mul
from .egf import (
    acyclic_probability,
    cycle_type_sum_count,
    exact_component_means,
    exact_k_cycle_distribution,
    exact_mean_cycles,
    exact_mean_k_cycles,
    expected_component_counts,
    fpf_cycle_count_distribution,
    involution_pair_counts,
    path_cycle_table,
    poisson_mixture,
    s_permutation_counts,
)
from .factorization import (
    count_factorizations,
    count_fpf_factorizations,
    enumerate_involution_factorizations,
    expected_log_f,
    f_factor,
    variance_log_f,
)
from .samplers import SeededStream

__version__ = "0.1.0"
