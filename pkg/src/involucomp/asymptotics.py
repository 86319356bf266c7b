"""Saddle-point and closed-form asymptotic estimates.

Everything is evaluated in log space. ``math.lgamma`` supplies log
factorials; ``math.fsum`` supplies compensated sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable


@dataclass(frozen=True)
class SPermutationFamily:
    """Permutations all of whose cycle lengths lie in the finite set S."""

    S: tuple[int, ...]

    def __init__(self, S: Iterable[int]):
        items = tuple(sorted(set(int(s) for s in S)))
        if not items or items[0] < 1:
            raise ValueError("S must be a nonempty set of positive integers")
        object.__setattr__(self, "S", items)

    @property
    def m(self) -> int:
        return self.S[-1]

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, self.S)

    @property
    def gcd_one(self) -> bool:
        return self.gcd == 1

    def a(self, r: float) -> float:
        return math.fsum(r**s for s in self.S)

    def b(self, r: float) -> float:
        return math.fsum(s * r**s for s in self.S)


def _family(fam) -> SPermutationFamily:
    return fam if isinstance(fam, SPermutationFamily) else SPermutationFamily(fam)


def saddle_radius(fam: SPermutationFamily | Iterable[int], n: float) -> float:
    """Positive root r of sum_{s in S} r^s = n."""
    fam = _family(fam)
    if n <= 0:
        raise ValueError("n must be positive")
    r = n ** (1.0 / fam.m)
    for _ in range(100):
        a = fam.a(r) - n
        da = fam.b(r) / r
        step = a / da
        r_new = r - step
        if not r_new > 0:
            break
        if abs(step) <= 1e-12 * r_new:
            r = r_new
            if abs(fam.a(r) - n) <= 1e-10 * n:
                return r
            break
        r = r_new
    # a is increasing on (0, inf) with a(0) = 0, so bisection always works
    lo, hi = 0.0, max(1.0, n)
    while fam.a(hi) < n:
        hi *= 2
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if fam.a(mid) < n:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def hayman_log_estimate(fam: SPermutationFamily | Iterable[int], n: int) -> float:
    """ln of f(r)/(r^n sqrt(2 pi b(r))) with f = exp(sum z^s/s)."""
    fam = _family(fam)
    if not fam.gcd_one:
        raise ValueError(f"gcd of S is {fam.gcd}; the saddle-point estimate needs gcd 1")
    r = saddle_radius(fam, n)
    log_f = math.fsum(r**s / s for s in fam.S)
    return log_f - n * math.log(r) - 0.5 * math.log(2 * math.pi * fam.b(r))


def hayman_estimate(fam: SPermutationFamily | Iterable[int], n: int) -> float:
    """Estimate of the probability p_n that a uniform permutation of [n]
    has all cycle lengths in S."""
    return math.exp(hayman_log_estimate(fam, n))


def exact_s_log_probability(fam: SPermutationFamily | Iterable[int], n: int) -> float:
    from .egf import s_permutation_counts

    fam = _family(fam)
    count = s_permutation_counts(fam.S, n)[n]
    if count == 0:
        return -math.inf
    return math.log(count) - math.lgamma(n + 1)


def exact_s_probability(fam, n: int) -> float:
    return math.exp(exact_s_log_probability(fam, n))


def hayman_relative_error(fam, n: int) -> float:
    return abs(math.expm1(hayman_log_estimate(fam, n) - exact_s_log_probability(fam, n)))


def s123_closed_form_log(n: int) -> float:
    """ln of (e^5 2^6 3^9 pi^6)^(-1/18) n^(-1/3) exp(n^(2/3)/2 + 5 n^(1/3)/6) / n!^(1/3)."""
    const = -(5 + 6 * math.log(2) + 9 * math.log(3) + 6 * math.log(math.pi)) / 18
    return const - math.log(n) / 3 + 0.5 * n ** (2 / 3) + 5 * n ** (1 / 3) / 6 - math.lgamma(n + 1) / 3


def s123_closed_form(n: int) -> float:
    return math.exp(s123_closed_form_log(n))


def s123_radius_expansion(n: float) -> float:
    """Three-term expansion of the saddle radius for S = {1, 2, 3}."""
    c = n ** (1 / 3)
    return c - 1 / 3 - 2 / (9 * c)


@dataclass(frozen=True)
class KCycleAsymptotic:
    boltzmann: float
    leading: float


def expected_k_cycle_asymptotic(fam: SPermutationFamily | Iterable[int], k: int, n: float) -> KCycleAsymptotic:
    """Expected number of k-cycles: r_n^k/k (Boltzmann) and n^{k/m}/k."""
    fam = _family(fam)
    if k not in fam.S:
        raise ValueError(f"cycle length {k} not in S={fam.S}")
    r = saddle_radius(fam, n)
    return KCycleAsymptotic(r**k / k, n ** (k / fam.m) / k)


# ---------------------------------------------------------------- pairs of involutions


def log_pair_coefficient_estimate(n: float) -> float:
    return 2 * math.sqrt(n) - 0.5 * math.log(8 * math.pi * math.e * n)


@dataclass(frozen=True)
class AsymptoticEstimates:
    n: int
    mean_cycles_estimate: float
    mean_paths_estimate: float
    mean_graph_cycles_estimate: float
    mean_cycle_elements_estimate: float
    acyclic_estimate: float
    pair_coefficient_estimate: float
    mean_factorizations_estimate: float


def closed_form_estimates(n: int) -> AsymptoticEstimates:
    if n < 1:
        raise ValueError("n must be positive")
    rt = math.sqrt(n)
    b_hat = math.exp(log_pair_coefficient_estimate(n))
    return AsymptoticEstimates(
        n=n,
        mean_cycles_estimate=rt + 0.5 * math.log(n),
        mean_paths_estimate=rt,
        mean_graph_cycles_estimate=0.25 * math.log(n),
        mean_cycle_elements_estimate=0.5 * rt,
        acyclic_estimate=math.sqrt(2) * n**-0.25,
        pair_coefficient_estimate=b_hat,
        mean_factorizations_estimate=b_hat,
    )


# ---------------------------------------------------------------- fixed-point-free superpositions


def fpf_element_law(n: float, k: float) -> float:
    """Limit of the expected number of elements on k-cycles: (1 - 2k/n)^(-1/2)."""
    if not 0 < k / n < 0.5:
        raise ValueError("need 0 < k/n < 1/2")
    return (1 - 2 * k / n) ** -0.5


def fpf_length_law(gamma: float, delta: float) -> float:
    """Limit probability that a given vertex lies on a cycle of length in [gamma n, delta n]."""
    if not 0 <= gamma <= delta <= 0.5:
        raise ValueError("need 0 <= gamma <= delta <= 1/2")
    return math.sqrt(1 - 2 * gamma) - math.sqrt(1 - 2 * delta)


def log_fpf_cycle_elements(n: int, r: int) -> float:
    """ln of ((n/2)!/((n-r)/2)!)^2 2^r (n-r)!/n!, the expected number of
    vertices on r-cycles when both matchings are perfect on [n]."""
    if n % 2 or r % 2 or not 0 < r <= n:
        raise ValueError("need even n and even r in 1..n")
    lg = math.lgamma
    return (
        2 * (lg(n / 2 + 1) - lg((n - r) / 2 + 1)) + r * math.log(2) + lg(n - r + 1) - lg(n + 1)
    )
