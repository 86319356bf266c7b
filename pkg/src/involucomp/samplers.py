"""Seeded random generation of involutions, matchings, S-permutations and
P*_n cycle types.

Every sampler takes a ``SeededStream``. A stream is a numpy ``Generator``
keyed by ``(seed, stream_id)`` through ``SeedSequence`` spawn keys, so equal
keys replay equal draws and distinct ids give independent streams.
Experiments use one stream per trial with ``stream_id`` equal to the trial
index.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable

import numpy as np
from numba import njit

from .asymptotics import saddle_radius
from .perm import CycleType, PartialMatching, Permutation

POISSON_INVERSION_MAX = 30.0
_MASK64 = (1 << 64) - 1


class SeededStream:
    __slots__ = ("seed", "stream_id", "rng")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.rng = np.random.Generator(np.random.PCG64(ss))

    def uniforms(self, size) -> np.ndarray:
        return self.rng.random(size)

    def poisson(self, lam: float) -> int:
        """Inversion for small means (exact up to float rounding), numpy's
        rejection sampler above ``POISSON_INVERSION_MAX``."""
        if lam <= POISSON_INVERSION_MAX:
            return poisson_inversion(lam, self.rng.random())
        return int(self.rng.poisson(lam))

    def __repr__(self) -> str:
        return f"SeededStream(seed={self.seed}, stream_id={self.stream_id})"


def poisson_inversion(lam: float, u: float) -> int:
    if lam < 0:
        raise ValueError("Poisson mean must be nonnegative")
    p = math.exp(-lam)
    cdf = p
    j = 0
    while u >= cdf:
        j += 1
        p *= lam / j
        if p == 0.0:
            break
        cdf += p
    return j


# ---------------------------------------------------------------- involutions


@lru_cache(maxsize=8)
def _ratio_table(n: int) -> np.ndarray:
    # a_{m-1}/a_m by correctly rounded big-integer division
    out = np.empty(n + 1)
    out[0] = 1.0
    prev, cur = 1, 1
    for m in range(1, n + 1):
        if m > 1:
            prev, cur = cur, cur + (m - 1) * prev
        out[m] = prev / cur
    return out


def involution_ratios(n: int) -> np.ndarray:
    """``r[m] = a_{m-1}/a_m`` for m <= n, from a cached table sized to the next power of two."""
    size = 64
    while size < n:
        size *= 2
    return _ratio_table(size)


@njit(cache=True)
def _involution_into(n, ratios, u, out):
    # one remaining label is fixed w.p. a_{m-1}/a_m, else paired with a
    # uniform other remaining label; the law does not depend on which label
    # is singled out, so the remaining set is kept by swap-removal.
    # u holds 2n uniforms
    free = np.arange(n)
    m = n
    t = 0
    while m > 0:
        last = free[m - 1]
        if u[t] < ratios[m]:
            out[last] = -1
            m -= 1
        else:
            j = int(u[t + 1] * (m - 1))
            if j > m - 2:
                j = m - 2
            other = free[j]
            out[last] = other
            out[other] = last
            free[j] = free[m - 2]
            m -= 2
        t += 2


@njit(cache=True)
def _fpf_into(n, u, out):
    # smallest unmatched label is matched to a uniform other unmatched label;
    # pos/free is an index-addressable set of unmatched labels
    free = np.arange(n)
    pos = np.arange(n)
    m = n
    t = 0
    nxt = 0
    while m > 0:
        while out[nxt] != -2:
            nxt += 1
        i = nxt
        # remove i
        pi = pos[i]
        last = free[m - 1]
        free[pi] = last
        pos[last] = pi
        m -= 1
        j = int(u[t] * m)
        if j > m - 1:
            j = m - 1
        other = free[j]
        last = free[m - 1]
        free[j] = last
        pos[last] = j
        m -= 1
        out[i] = other
        out[other] = i
        t += 1


def _check_size(n: int):
    if n < 0:
        raise ValueError("size must be nonnegative")


def sample_involution_array(n: int, stream: SeededStream) -> np.ndarray:
    _check_size(n)
    out = np.empty(n, dtype=np.int64)
    if n:
        _involution_into(n, involution_ratios(n), stream.uniforms(2 * n), out)
    return out


def sample_involution(n: int, stream: SeededStream) -> PartialMatching:
    """Uniform involution of [n]."""
    return PartialMatching._wrap(sample_involution_array(n, stream))


def sample_fpf_array(n: int, stream: SeededStream) -> np.ndarray:
    _check_size(n)
    if n % 2:
        raise ValueError(f"no perfect matching of [{n}] with n odd")
    out = np.full(n, -2, dtype=np.int64)
    if n:
        _fpf_into(n, stream.uniforms(n // 2), out)
    return out


def sample_fpf_involution(n: int, stream: SeededStream) -> PartialMatching:
    """Uniform perfect matching of [n]; n must be even."""
    return PartialMatching._wrap(sample_fpf_array(n, stream))


@njit(cache=True)
def _fixed_point_into(n, k, u, out):
    # Fisher-Yates shuffle from n uniforms; the first k shuffled labels are
    # fixed and the rest are paired consecutively
    perm = np.arange(n)
    for i in range(n - 1, 0, -1):
        j = int(u[i] * (i + 1))
        if j > i:
            j = i
        perm[i], perm[j] = perm[j], perm[i]
    for i in range(k):
        out[perm[i]] = -1
    for i in range(k, n, 2):
        a, b = perm[i], perm[i + 1]
        out[a] = b
        out[b] = a


def _check_fixed(n: int, k: int):
    if not 0 <= k <= n or (n - k) % 2:
        raise ValueError(f"need 0 <= k <= n with n - k even (n={n}, k={k})")


def sample_fixed_point_array(n: int, k: int, stream: SeededStream) -> np.ndarray:
    _check_fixed(n, k)
    out = np.empty(n, dtype=np.int64)
    if n:
        _fixed_point_into(n, k, stream.uniforms(n), out)
    return out


def sample_involution_with_fixed_points(n: int, k: int, stream: SeededStream) -> PartialMatching:
    """Uniform involution of [n] with exactly k fixed points."""
    return PartialMatching._wrap(sample_fixed_point_array(n, k, stream))


def sample_uniform_permutation(n: int, stream: SeededStream) -> Permutation:
    _check_size(n)
    return Permutation._wrap(stream.rng.permutation(n).astype(np.int64))


# ---------------------------------------------------------------- Boltzmann and P*_n


@lru_cache(maxsize=64)
def _boltzmann_means(S: tuple[int, ...], target_n: float) -> tuple[float, ...]:
    if target_n < 1:
        raise ValueError("target size must be at least 1")
    x = saddle_radius(S, target_n)
    return tuple(x**s / s for s in S)


def boltzmann_cycle_counts(S: Iterable[int], target_n: float, stream: SeededStream) -> dict[int, int]:
    S = tuple(sorted(set(int(s) for s in S)))
    means = _boltzmann_means(S, float(target_n))
    return {s: stream.poisson(lam) for s, lam in zip(S, means)}


def sample_boltzmann_s_permutation(S: Iterable[int], target_n: float, stream: SeededStream) -> Permutation:
    """Independent Poisson(x^s/s) cycle counts, x the saddle radius for
    ``target_n``; labels 1..m are arranged uniformly into those cycles."""
    counts = boltzmann_cycle_counts(S, target_n, stream)
    m = sum(s * c for s, c in counts.items())
    labels = stream.rng.permutation(m).tolist()
    image = [0] * m
    pos = 0
    for s, c in counts.items():
        for _ in range(c):
            for i in range(s):
                image[labels[pos + i]] = labels[pos + (i + 1) % s]
            pos += s
    return Permutation._wrap(np.array(image, dtype=np.int64))


@lru_cache(maxsize=4)
def _harmonic_cdf(n: int) -> np.ndarray:
    return np.cumsum(1.0 / np.arange(1, n + 1))


def pstar_lengths(n: int, stream: SeededStream) -> np.ndarray:
    """Cycle lengths (unsorted) of a P*_n cycle type.

    Independent Poisson(1/k) multiplicities are produced by Poisson
    splitting: a Poisson(H_n) total, each cycle given length k with
    probability (1/k)/H_n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    cdf = _harmonic_cdf(n)
    h = float(cdf[-1])
    total = stream.poisson(h)
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    u = stream.uniforms(total) * h
    return np.minimum(np.searchsorted(cdf, u, side="right"), n - 1).astype(np.int64) + 1


def sample_pstar_cycle_type(n: int, stream: SeededStream) -> CycleType:
    return CycleType.from_lengths(pstar_lengths(n, stream).tolist())
