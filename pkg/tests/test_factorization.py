import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involucomp.factorization import (
    count_factorizations,
    count_fpf_factorizations,
    enumerate_involution_factorizations,
    expected_log_f,
    f_factor,
    factorization_census,
    log_count_factorizations,
    log_f_moment_arrays,
    mean_factorizations_exact,
    variance_log_f,
)
from involucomp.perm import CycleType, PartialMatching, Permutation, compose, cycle_type, invert
from involucomp.samplers import SeededStream, sample_uniform_permutation

from oracles import INVOLUTIONS, all_permutations, brute_force_factorizations


def test_f_factor_examples():
    assert all(f_factor(1, k) == k for k in range(1, 20))
    assert f_factor(4, 1) == 10
    assert f_factor(2, 2) == 6
    assert f_factor(0, 7) == 1
    with pytest.raises(ValueError):
        f_factor(2, 0)


@settings(derandomize=True, max_examples=60, deadline=None)
@given(st.integers(0, 30), st.integers(1, 12))
def test_f_factor_matches_defining_sum(r, k):
    direct = sum(
        math.factorial(r) // (math.factorial(r - 2 * j) * math.factorial(j) * 2**j) * k ** (r - j)
        for j in range(r // 2 + 1)
    )
    assert f_factor(r, k) == direct


def test_count_examples():
    assert count_factorizations({4: 1}).value == 4
    for n in range(13):
        assert count_factorizations({1: n} if n else {}).value == INVOLUTIONS[n]
    for n in range(3, 12):
        assert count_factorizations({n - 1: 1, 1: 1}).value == n - 1
    fc = count_factorizations({3: 5, 7: 2})
    assert fc.log_value == pytest.approx(math.log(fc.value), rel=1e-12)


def test_count_fpf_examples():
    assert count_fpf_factorizations({2: 2}) == 2
    assert count_fpf_factorizations({1: 2}) == 1
    assert count_fpf_factorizations({3: 1, 1: 1}) == 0


def test_huge_counts_stay_in_log_space():
    # 10^6 fixed points: a_n has about 2.7e7 bits, beyond the exact limit
    fc = count_factorizations({1: 10**6})
    assert fc.value is None
    with pytest.raises(OverflowError):
        int(fc)
    assert fc.log_value == pytest.approx(log_count_factorizations({1: 10**6}))
    # a_n ~ (n/e)^{n/2} e^{sqrt n} / (sqrt 2 e^{1/4})
    n = 10**6
    approx = n / 2 * math.log(n / math.e) + math.sqrt(n) - 0.5 * math.log(2) - 0.25
    assert fc.log_value == pytest.approx(approx, rel=1e-9)


def test_cycle_enumeration_matches_known_list():
    pairs = enumerate_involution_factorizations(Permutation.parse("(1234)"))
    got = {(s, t) for s, t in pairs}
    expected = {
        (PartialMatching.parse("(1)(24)(3)"), PartialMatching.parse("(12)(34)")),
        (PartialMatching.parse("(13)(2)(4)"), PartialMatching.parse("(14)(23)")),
        (PartialMatching.parse("(12)(34)"), PartialMatching.parse("(2)(13)(4)")),
        (PartialMatching.parse("(14)(23)"), PartialMatching.parse("(24)(1)(3)")),
    }
    assert got == expected and len(pairs) == 4


def test_enumeration_small_cases():
    idp = enumerate_involution_factorizations(Permutation.identity(2))
    assert set(idp) == {
        (PartialMatching.identity(2), PartialMatching.identity(2)),
        (PartialMatching.parse("(12)"), PartialMatching.parse("(12)")),
    }
    assert len(enumerate_involution_factorizations(Permutation.parse("(12)(34)"), fpf_only=True)) == 2
    with pytest.raises(ValueError):
        enumerate_involution_factorizations(Permutation.identity(11))


@pytest.mark.parametrize("n", range(0, 8))
def test_exhaustive_counts(n):
    total = 0
    for pi in all_permutations(n):
        pairs = enumerate_involution_factorizations(pi)
        assert len(pairs) == count_factorizations(cycle_type(pi)).value
        total += len(pairs)
        for s, t in pairs:
            assert compose(t, s) == pi
            assert s.as_permutation().is_involution() and t.as_permutation().is_involution()
        assert len(set(pairs)) == len(pairs)
        if n % 2 == 0:
            fpf = enumerate_involution_factorizations(pi, fpf_only=True)
            assert len(fpf) == count_fpf_factorizations(cycle_type(pi))
            assert all(s.is_fixed_point_free() and t.is_fixed_point_free() for s, t in fpf)
    # the mean of F over S_n is a_n^2 / n!
    assert Fraction(total, math.factorial(n)) == Fraction(INVOLUTIONS[n] ** 2, math.factorial(n))
    assert mean_factorizations_exact(n) == pytest.approx(INVOLUTIONS[n] ** 2 / math.factorial(n))


def test_fpf_counts_on_eight():
    for pi in itertools.islice(all_permutations(8), 0, 40320, 97):
        assert len(enumerate_involution_factorizations(pi, fpf_only=True)) == count_fpf_factorizations(cycle_type(pi))


@pytest.mark.parametrize("n", [8, 9])
def test_random_permutations_agree_with_oracle(n):
    for t in range(200 if n == 8 else 60):
        pi = sample_uniform_permutation(n, SeededStream(n, t))
        assert len(enumerate_involution_factorizations(pi)) == count_factorizations(cycle_type(pi)).value


def test_independent_pair_oracle():
    for img in ([2, 3, 4, 1], [2, 1, 4, 3, 5], [3, 1, 2, 5, 4, 6]):
        pi = Permutation(img)
        assert brute_force_factorizations(pi) == count_factorizations(cycle_type(pi)).value
    assert brute_force_factorizations(Permutation([2, 1, 4, 3]), fpf_only=True) == 2


@settings(derandomize=True, max_examples=40, deadline=None)
@given(st.permutations(range(1, 10)), st.permutations(range(1, 10)))
def test_conjugacy_invariance(a, b):
    pi, g = Permutation(a), Permutation(b)
    conj = compose(g, compose(pi, invert(g)))
    assert len(enumerate_involution_factorizations(conj)) == len(enumerate_involution_factorizations(pi))


def test_fpf_bijection_with_even_cycles():
    # pairs of fpf involutions on [2n] with 2c_k k-cycles  <->  permutations
    # of [2n] with c_k 2k-cycles and no odd cycles
    from involucomp.perm import _compose_matchings, _cycle_counts, involution_partners

    for two_n in (2, 4, 6, 8):
        pairs = Counter()
        rows = involution_partners(two_n, 0)
        for s in rows:
            for t in rows:
                c = _cycle_counts(_compose_matchings(t, s))
                assert all(c[k] % 2 == 0 for k in range(len(c)))
                pairs[CycleType({k: int(c[k]) // 2 for k in range(1, len(c)) if c[k]})] += 1
        perms = Counter()
        for pi in all_permutations(two_n):
            ct = cycle_type(pi)
            if all(k % 2 == 0 for k in ct):
                perms[CycleType({k // 2: m for k, m in ct.items()})] += 1
        assert pairs == perms


def test_census_sums_to_pairs():
    for n in range(1, 8):
        census = factorization_census(n)
        assert sum(census.values()) == INVOLUTIONS[n] ** 2
        for ct, v in census.items():
            classes = math.factorial(n) // math.prod(k**c * math.factorial(c) for k, c in ct.items())
            assert v == classes * count_factorizations(ct).value


def test_expected_log_f_examples():
    assert expected_log_f(1, tol=1e-6) == pytest.approx(0.2604, abs=1e-4)
    # oracle: direct sum over the first 60 Poisson(1) terms with f(r,1) = a_r
    direct = math.fsum(math.exp(-1) * math.log(f_factor(r, 1)) / math.factorial(r) for r in range(1, 60))
    assert expected_log_f(1) == pytest.approx(direct, abs=1e-12)
    for k in (10, 30, 100, 1000):
        assert abs(expected_log_f(k) - math.log(k) / k) < 2 / k**3


def test_variance_log_f_against_direct_sum():
    for k in (1, 2, 5):
        lam = 1 / k
        w = [math.exp(-lam) * lam**r / math.factorial(r) for r in range(80)]
        lf = [math.log(f_factor(r, k)) for r in range(80)]
        m1 = math.fsum(a * b for a, b in zip(w, lf))
        m2 = math.fsum(a * b * b for a, b in zip(w, lf))
        assert variance_log_f(k) == pytest.approx(m2 - m1 * m1, rel=1e-10)
    for k in (50, 500):
        assert variance_log_f(k) == pytest.approx(math.log(k) ** 2 / k, rel=0.05)


def test_moment_arrays_agree_with_scalar_sums():
    mu, var = log_f_moment_arrays(200)
    for k in (1, 2, 63, 64, 65, 100, 200):
        assert mu[k - 1] == pytest.approx(expected_log_f(k), rel=1e-12, abs=1e-15)
        assert var[k - 1] == pytest.approx(variance_log_f(k), rel=1e-10, abs=1e-15)
    assert np.all(np.diff(mu[5:]) < 0)
