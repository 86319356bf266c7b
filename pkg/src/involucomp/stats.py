"""Distances and goodness-of-fit helpers for Monte Carlo comparisons."""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping

import numpy as np
from scipy import stats as _st


def empirical_pmf(values: Iterable[int]) -> dict[int, float]:
    counts = Counter(int(v) for v in values)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {k: c / total for k, c in sorted(counts.items())}


def total_variation(p: Mapping[int, float], q: Mapping[int, float]) -> float:
    """(1/2) sum |p - q| over the union of supports."""
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(float(p.get(k, 0.0)) - float(q.get(k, 0.0))) for k in keys)


def ks_distance_pmf(p: Mapping[int, float], q: Mapping[int, float]) -> float:
    """Sup distance between the CDFs of two integer-valued laws."""
    keys = sorted(set(p) | set(q))
    cp = cq = 0.0
    best = 0.0
    for k in keys:
        cp += float(p.get(k, 0.0))
        cq += float(q.get(k, 0.0))
        best = max(best, abs(cp - cq))
    return min(best, 1.0)


def ks_normal(samples: Iterable[float], loc: float = 0.0, scale: float = 1.0) -> float:
    x = np.asarray(list(samples), dtype=float)
    if x.size == 0:
        return 0.0
    return float(_st.kstest(x, "norm", args=(loc, scale)).statistic)


def ks_two_sample(a: Iterable[float], b: Iterable[float]) -> float:
    return float(_st.ks_2samp(np.asarray(list(a), float), np.asarray(list(b), float)).statistic)


def chi_square_uniform(counts: Iterable[int], categories: int | None = None) -> float:
    """p-value of Pearson's test that the counts come from a uniform law on
    ``categories`` cells; unobserved cells count as zero."""
    obs = list(counts)
    if categories is not None:
        if len(obs) > categories:
            raise ValueError("more observed cells than categories")
        obs = obs + [0] * (categories - len(obs))
    if len(obs) < 2:
        return 1.0
    return float(_st.chisquare(np.asarray(obs, dtype=float)).pvalue)


def mean_and_se(values: Iterable[float]) -> tuple[float, float]:
    x = np.asarray(list(values), dtype=float)
    if x.size == 0:
        return math.nan, math.nan
    if x.size == 1:
        return float(x[0]), math.nan
    return math.fsum(x) / x.size, float(x.std(ddof=1) / math.sqrt(x.size))


def variance_and_se(values: Iterable[float]) -> tuple[float, float]:
    """Sample variance with the standard error sqrt((m4 - s^4 (n-3)/(n-1)) / n)."""
    x = np.asarray(list(values), dtype=float)
    n = x.size
    if n < 4:
        return (float(x.var(ddof=1)) if n > 1 else math.nan), math.nan
    centered = x - math.fsum(x) / n
    s2 = math.fsum(centered**2) / (n - 1)
    m4 = math.fsum(centered**4) / n
    se = math.sqrt(max(m4 - s2 * s2 * (n - 3) / (n - 1), 0.0) / n)
    return s2, se


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2))
