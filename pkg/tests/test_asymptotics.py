import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involucomp.asymptotics import (
    SPermutationFamily,
    closed_form_estimates,
    exact_s_log_probability,
    exact_s_probability,
    expected_k_cycle_asymptotic,
    fpf_element_law,
    fpf_length_law,
    hayman_estimate,
    hayman_relative_error,
    log_fpf_cycle_elements,
    s123_closed_form_log,
    s123_radius_expansion,
    saddle_radius,
)
from involucomp.egf import (
    acyclic_probability,
    exact_component_means,
    exact_mean_cycles,
    fpf_cycle_elements,
    pair_coefficient,
)

HAYMAN_NS = (50, 100, 200, 400, 800)


def test_family_fields():
    fam = SPermutationFamily([3, 1, 2, 2])
    assert fam.S == (1, 2, 3) and fam.m == 3 and fam.gcd_one
    assert SPermutationFamily({4, 6}).gcd == 2
    with pytest.raises(ValueError):
        SPermutationFamily([])
    with pytest.raises(ValueError):
        SPermutationFamily([0, 1])


def test_saddle_radius_examples():
    assert saddle_radius({1, 2}, 6) == pytest.approx(2, rel=1e-12)
    for n in (1, 10, 1e3, 1e8):
        assert saddle_radius({1, 2}, n) == pytest.approx((-1 + math.sqrt(1 + 4 * n)) / 2, rel=1e-12)
    # three-term expansion has error O(n^{-2/3})
    for n in (1e3, 1e6, 1e9):
        assert abs(saddle_radius({1, 2, 3}, n) - s123_radius_expansion(n)) < 2 * n ** (-2 / 3)
    with pytest.raises(ValueError):
        saddle_radius({1}, 0)


@settings(derandomize=True, max_examples=80, deadline=None)
@given(st.sets(st.integers(1, 8), min_size=1, max_size=4), st.floats(0.01, 1e9))
def test_saddle_radius_solves_equation(S, n):
    fam = SPermutationFamily(S)
    r = saddle_radius(fam, n)
    assert r > 0
    assert fam.a(r) == pytest.approx(n, rel=1e-10)


def test_hayman_small_examples():
    assert abs(hayman_estimate({1, 2}, 4) / (10 / 24) - 1) < 0.05
    assert hayman_relative_error({1, 2}, 500) < 0.01
    with pytest.raises(ValueError):
        hayman_estimate({2}, 10)
    with pytest.raises(ValueError):
        hayman_estimate({2, 4}, 10)


@pytest.mark.parametrize("S", [{1, 2}, {1, 2, 3}, {2, 3}])
def test_hayman_error_decreases(S):
    errs = [hayman_relative_error(S, n) for n in HAYMAN_NS]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_hayman_error_small_when_sign_changes():
    # for {1, 3} the signed error crosses zero near n = 50
    assert all(hayman_relative_error({1, 3}, n) < 0.005 for n in HAYMAN_NS)


def test_s123_closed_form_within_ten_percent():
    assert abs(math.expm1(s123_closed_form_log(300) - exact_s_log_probability({1, 2, 3}, 300))) < 0.10


def test_exact_probability_helpers():
    assert exact_s_probability({1, 2}, 4) == pytest.approx(10 / 24)
    assert exact_s_log_probability({2}, 5) == -math.inf
    assert exact_s_probability({1, 2, 3}, 3) == pytest.approx(1.0)


def test_k_cycle_asymptotic_examples():
    a = expected_k_cycle_asymptotic({1, 2}, 1, 10**4)
    assert a.leading == pytest.approx(100) and a.boltzmann == pytest.approx(100, rel=0.01)
    b = expected_k_cycle_asymptotic({1, 2}, 2, 10**4)
    assert b.leading == pytest.approx(5000) and b.boltzmann == pytest.approx(5000, rel=0.02)
    c = expected_k_cycle_asymptotic({1, 2, 5}, 5, 10**5)
    assert c.leading == pytest.approx(10**5 / 5)
    with pytest.raises(ValueError):
        expected_k_cycle_asymptotic({1, 2}, 3, 100)


def test_boltzmann_sizes_sum_to_target():
    fam = SPermutationFamily({1, 3, 4})
    n = 5000
    total = sum(k * expected_k_cycle_asymptotic(fam, k, n).boltzmann for k in fam.S)
    assert total == pytest.approx(n, rel=1e-10)


def test_closed_form_examples():
    est = closed_form_estimates(100)
    assert abs(est.pair_coefficient_estimate / float(pair_coefficient(100)) - 1) < 0.10
    assert est.mean_factorizations_estimate == est.pair_coefficient_estimate
    big = closed_form_estimates(2000)
    assert abs(float(acyclic_probability(2000)) / big.acyclic_estimate - 1) < 0.10
    for n in (1, 7, 100):
        e = closed_form_estimates(n)
        # (1/2) sqrt(4n) - (1/2) sqrt(n) = (1/2) sqrt(n)
        assert closed_form_estimates(4 * n).mean_cycle_elements_estimate - e.mean_cycle_elements_estimate == pytest.approx(
            0.5 * math.sqrt(n)
        )
        # (1/4) ln n vanishes at n = 1, so positivity starts at n = 2
        assert all((v > 0 if n > 1 else v >= 0) and math.isfinite(v) for v in vars(e).values())
    with pytest.raises(ValueError):
        closed_form_estimates(0)


def test_mean_cycle_offset_stabilizes():
    d = [float(exact_mean_cycles(n)) - math.sqrt(n) - 0.5 * math.log(n) for n in range(500, 2001, 100)]
    assert max(d) - min(d) < 0.5


def test_graph_cycles_grow_like_quarter_log():
    diff = float(exact_component_means(2000)[1] - exact_component_means(500)[1])
    assert diff == pytest.approx(0.25 * math.log(4), rel=0.05)


def test_mean_paths_and_elements_track_estimates():
    for n in (500, 2000):
        paths, _, elements = exact_component_means(n)
        est = closed_form_estimates(n)
        assert float(paths) / est.mean_paths_estimate == pytest.approx(1, abs=0.1)
        assert float(elements) / est.mean_cycle_elements_estimate == pytest.approx(1, abs=0.1)


def test_fpf_law_examples():
    assert fpf_element_law(8, 3) == pytest.approx(2)
    assert fpf_length_law(0, 0.5) == pytest.approx(1)
    assert fpf_length_law(1 / 8, 3 / 8) == pytest.approx(0.3660, abs=1e-4)
    with pytest.raises(ValueError):
        fpf_element_law(8, 4)
    with pytest.raises(ValueError):
        fpf_length_law(0.3, 0.2)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_fpf_elements_on_long_cycles(alpha):
    n = 2000
    r = int(alpha * n)
    value = math.exp(log_fpf_cycle_elements(n, r))
    assert value == pytest.approx(1 / math.sqrt(1 - alpha), rel=0.05)
    assert value == pytest.approx(float(fpf_cycle_elements(n, r)), rel=1e-9)


def test_log_fpf_elements_domain():
    with pytest.raises(ValueError):
        log_fpf_cycle_elements(7, 2)
    with pytest.raises(ValueError):
        log_fpf_cycle_elements(8, 3)
