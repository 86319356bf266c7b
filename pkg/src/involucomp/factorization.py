"""Counting factorizations of a permutation into two involutions.

A factorization of pi is an ordered pair (sigma, tau) of involutions with
``tau o sigma = pi``. The count depends only on the cycle type and factors
over cycle lengths: ``F(pi) = prod_k f(c_k, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .perm import CycleType, PartialMatching, Permutation, cycle_type, involution_partners

EXACT_BIT_LIMIT = 10**6
ORACLE_BOUND = 10


@lru_cache(maxsize=1 << 16)
def f_factor(r: int, k: int) -> int:
    """Sum over matchings on r points of k**(r - pairs)."""
    if r < 0 or k < 1:
        raise ValueError("need r >= 0 and k >= 1")
    prev, cur = 0, 1
    for m in range(r):
        # element m+1 is fixed (weight k) or paired with one of m others (weight k)
        prev, cur = cur, k * cur + m * k * prev
    return cur


_LOG_EXACT_BELOW = 4096


@lru_cache(maxsize=1 << 16)
def log_f(r: int, k: int) -> float:
    """ln f(r, k). Large r skips the big integer: with q_m = f(m, k)/f(m-1, k),
    q_m = k + (m-1) k / q_{m-1} and ln f = sum ln q_m."""
    if r < _LOG_EXACT_BELOW:
        return math.log(f_factor(r, k)) if r else 0.0
    q = np.empty(r)
    prev = q[0] = float(k)
    for i in range(1, r):
        prev = k + i * k / prev
        q[i] = prev
    return math.fsum(np.log(q))


@dataclass(frozen=True)
class FactorizationCount:
    value: int | None
    log_value: float

    def __int__(self) -> int:
        if self.value is None:
            raise OverflowError("count too large to materialize")
        return self.value


def _multiplicities(ct: Mapping[int, int] | CycleType) -> list[tuple[int, int]]:
    return [(int(k), int(c)) for k, c in sorted(ct.items()) if c]


def log_count_factorizations(ct: Mapping[int, int] | CycleType) -> float:
    return math.fsum(log_f(c, k) for k, c in _multiplicities(ct))


def count_factorizations(ct: Mapping[int, int] | CycleType) -> FactorizationCount:
    items = _multiplicities(ct)
    log_value = math.fsum(log_f(c, k) for k, c in items)
    value = None
    if log_value / math.log(2) < EXACT_BIT_LIMIT:
        value = 1
        for k, c in items:
            value *= f_factor(c, k)
    return FactorizationCount(value, log_value)


def count_fpf_factorizations(ct: Mapping[int, int] | CycleType) -> int:
    """Factorizations into two fixed-point-free involutions."""
    total = 1
    for k, c in _multiplicities(ct):
        if c % 2:
            return 0
        total *= math.prod(range(c - 1, 0, -2)) * k ** (c // 2)
    return total


def enumerate_involution_factorizations(
    pi: Permutation, fpf_only: bool = False, bound: int = ORACLE_BOUND
) -> list[tuple[PartialMatching, PartialMatching]]:
    """Brute-force list of (sigma, tau) with tau o sigma = pi."""
    n = pi.n
    if n > bound:
        raise ValueError(f"oracle bound exceeded: n={n} > {bound}")
    rows = involution_partners(n, 0 if fpf_only else None)
    if rows.shape[0] == 0:
        return []
    ident = np.arange(n)
    sigma = np.where(rows < 0, ident, rows)
    tau = pi._a[sigma]
    ok = np.all(np.take_along_axis(tau, tau, axis=1) == ident, axis=1)
    if fpf_only:
        ok &= np.all(tau != ident, axis=1)
    out = []
    for s, t in zip(rows[ok], tau[ok]):
        tp = np.where(t == ident, -1, t)
        out.append((PartialMatching._wrap(s), PartialMatching._wrap(tp)))
    return out


def brute_force_count(pi: Permutation, fpf_only: bool = False, bound: int = ORACLE_BOUND) -> int:
    return len(enumerate_involution_factorizations(pi, fpf_only, bound))


# ---------------------------------------------------------------- moments under Poisson(1/k)


def _tail_ok(r: int, k: int, log_term: float, tol: float) -> bool:
    # successive terms shrink by at most a factor 1/((r+1)k) * (growth of log f);
    # once that factor is below 1/2 the tail is bounded by twice the current term
    return (r + 1) * k >= 4 and math.exp(log_term) * 2 < tol


def expected_log_f(k: int, tol: float = 1e-12) -> float:
    """E[ln f(X, k)] for X ~ Poisson(1/k)."""
    return _poisson_log_f_moment(k, 1, tol)


def variance_log_f(k: int, tol: float = 1e-12) -> float:
    m1 = _poisson_log_f_moment(k, 1, tol)
    m2 = _poisson_log_f_moment(k, 2, tol)
    return max(m2 - m1 * m1, 0.0)


def _poisson_log_f_moment(k: int, power: int, tol: float) -> float:
    if k < 1:
        raise ValueError("k must be positive")
    lam = 1.0 / k
    terms = []
    r = 1
    while True:
        lf = log_f(r, k)
        log_w = -lam + r * math.log(lam) - math.lgamma(r + 1)
        term = math.exp(log_w) * lf**power
        terms.append(term)
        bound_log = log_w + power * math.log(max(lf, 1.0) + r)
        if _tail_ok(r, k, bound_log, tol) or r > 400:
            break
        r += 1
    return math.fsum(terms)


_VEC_FROM = 64
_VEC_TERMS = 10


def log_f_moment_arrays(n: int, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """(mu_k, sigma_k^2) for k = 1..n.

    Small k use the exact term-by-term sums. For k >= 64 the Poisson(1/k)
    weights drop below 64**-10 within ten terms, so a fixed-length
    vectorized sum is accurate to well under 1e-15.
    """
    mu = np.zeros(n)
    var = np.zeros(n)
    head = min(n, _VEC_FROM - 1)
    for k in range(1, head + 1):
        mu[k - 1] = expected_log_f(k, tol)
        var[k - 1] = variance_log_f(k, tol)
    if n >= _VEC_FROM:
        k = np.arange(_VEC_FROM, n + 1, dtype=np.float64)
        logk = np.log(k)
        m1 = np.zeros_like(k)
        m2 = np.zeros_like(k)
        for r in range(1, _VEC_TERMS + 1):
            # ln f(r,k) = r ln k + ln sum_j C(r,2j)(2j-1)!! k^{-j}
            inner = np.zeros_like(k)
            for j in range(r // 2 + 1):
                inner += math.comb(r, 2 * j) * math.prod(range(2 * j - 1, 0, -2)) * k ** (-j)
            lf = r * logk + np.log(inner)
            w = np.exp(-1.0 / k - r * logk - math.lgamma(r + 1))
            m1 += w * lf
            m2 += w * lf * lf
        mu[_VEC_FROM - 1 :] = m1
        var[_VEC_FROM - 1 :] = np.maximum(m2 - m1 * m1, 0.0)
    return mu, var


def mean_factorizations_exact(n: int) -> float:
    """Average of F(pi) over S_n, which is a_n^2 / n!."""
    from .egf import pair_counts

    return pair_counts(n)[n] / math.factorial(n)


def factorization_census(n: int) -> dict[CycleType, int]:
    """Number of ordered pairs of involutions of [n] whose composition has
    each cycle type (brute force)."""
    from .perm import _compose_matchings, _cycle_counts

    rows = involution_partners(n)
    census: dict[CycleType, int] = {}
    for s in rows:
        for t in rows:
            ct = CycleType._from_array(_cycle_counts(_compose_matchings(t, s)))
            census[ct] = census.get(ct, 0) + 1
    return census


__all__ = [
    "FactorizationCount",
    "brute_force_count",
    "count_factorizations",
    "count_fpf_factorizations",
    "enumerate_involution_factorizations",
    "expected_log_f",
    "f_factor",
    "log_count_factorizations",
    "log_f",
    "log_f_moment_arrays",
    "variance_log_f",
]
