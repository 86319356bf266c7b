"""Exact counts, means and distributions extracted from exponential
generating functions.

Two integer fast paths back the rational series engine. Both track
``n! * [z^n]`` so every quantity stays an integer:

* ``labelled_exp_counts`` is the exponential formula
  ``E_n = sum_k C(n-1, k-1) w_k E_{n-k}``. It costs O(N * nnz(w)).
* ``holonomic_exp_counts`` handles ``exp(G)`` when ``G'`` is rational. It
  solves ``D F' = A F`` in O(N * deg) steps and is used for the
  pair-of-involutions series at large n.

Throughout, ``b_n = [z^n] exp(z/(1-z)) / sqrt(1-z^2)`` and the pair count
``c_n = n! b_n = a_n**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .series import TruncatedSeries, series_exp, series_log

# D(z) = (1-z)^2 (1+z) and P'/P = A/D for P(z) = exp(z/(1-z))/sqrt(1-z^2)
_PAIR_DEN = (1, -1, -1, 1)
_PAIR_NUM = (1, 2, -1)


# ---------------------------------------------------------------- integer paths


def labelled_exp_counts(weights: Sequence[int], N: int) -> list[int]:
    """``n! [z^n] exp(W)`` for n <= N, where ``weights[k] = k! [z^k] W``.

    ``weights[0]`` must be zero; missing trailing weights count as zero.
    """
    if weights and weights[0]:
        raise ValueError("exponential formula needs a zero constant term")
    w = list(weights[: N + 1]) + [0] * max(0, N + 1 - len(weights))
    nz = [k for k in range(1, N + 1) if w[k]]
    dense = len(nz) > N // 4
    E = [1] + [0] * N
    for n in range(1, N + 1):
        total = 0
        if dense:
            binom = 1
            for k in range(1, n + 1):
                if w[k]:
                    total += binom * w[k] * E[n - k]
                binom = binom * (n - k) // k
        else:
            for k in nz:
                if k > n:
                    break
                total += math.comb(n - 1, k - 1) * w[k] * E[n - k]
        E[n] = total
    return E


class _Holonomic:
    """Cached integer-scaled coefficients of exp(G) with ``G' = num/den``."""

    def __init__(self, num: Sequence[int], den: Sequence[int]):
        if not den or den[0] not in (1, -1):
            raise ValueError("denominator must have constant term +-1")
        self.num = tuple(int(x) for x in num)
        self.den = tuple(int(x) for x in den)
        self.values = [1]

    def upto(self, N: int) -> list[int]:
        F = self.values
        A, D = self.num, self.den
        d0 = D[0]
        span = max(len(A), len(D))
        while len(F) <= N:
            n = len(F) - 1
            total = 0
            ff = 1  # n!/(n-i)!
            for i in range(0, min(n, span) + 1):
                if i:
                    ff *= n - i + 1
                if i < len(A) and A[i]:
                    total += A[i] * F[n - i] * ff
                if i + 1 < len(D) and D[i + 1]:
                    total -= D[i + 1] * F[n - i] * ff * (n - i)
            F.append(total * d0)
        return F[: N + 1]


def holonomic_exp_counts(num: Sequence[int], den: Sequence[int], N: int) -> list[int]:
    """``n! [z^n] exp(G)`` for n <= N where ``G(0) = 0`` and ``G' = num/den``
    with integer polynomial coefficients (lowest degree first)."""
    return _Holonomic(num, den).upto(N)


_PAIRS = _Holonomic(_PAIR_NUM, _PAIR_DEN)


def pair_counts(N: int) -> list[int]:
    """Number of ordered pairs of involutions of [n], n <= N (cached)."""
    return _PAIRS.upto(N)


def pair_coefficient(n: int) -> Fraction:
    """``b_n``; zero for negative n."""
    if n < 0:
        return Fraction(0)
    return Fraction(pair_counts(n)[n], math.factorial(n))


@lru_cache(maxsize=None)
def involution_count(n: int) -> int:
    a, b = 1, 1
    for m in range(2, n + 1):
        a, b = b, b + (m - 1) * a
    return b if n >= 1 else 1


def involution_counts(N: int) -> list[int]:
    a = [1, 1][: N + 1]
    for m in range(2, N + 1):
        a.append(a[m - 1] + (m - 1) * a[m - 2])
    return a


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    h = Fraction(0)
    for k in range(1, n + 1):
        h += Fraction(1, k)
    return h


# ---------------------------------------------------------------- series builders


def path_series(order: int) -> TruncatedSeries:
    """z/(1-z): there are n! colored labelled n-paths."""
    return TruncatedSeries._raw([{}] + [{(0, 0): Fraction(1)} for _ in range(order)], order, None)


def cycle_series(order: int) -> TruncatedSeries:
    """(1/2) log(1/(1-z^2)), the colored labelled even cycles."""
    one_minus = TruncatedSeries.monomial(0, order, max_degree=None) - TruncatedSeries.monomial(2, order, max_degree=None)
    return series_log(one_minus) * Fraction(-1, 2)


def s_permutation_series(S: Iterable[int], order: int) -> TruncatedSeries:
    exponent = TruncatedSeries.zero(order, None)
    for s in sorted(set(S)):
        exponent = exponent + TruncatedSeries.monomial(s, order, Fraction(1, s), None)
    return series_exp(exponent)


def pair_series(order: int) -> TruncatedSeries:
    """P(z) = exp(z/(1-z)) / sqrt(1-z^2) in exact rationals."""
    return series_exp(path_series(order) + cycle_series(order))


def trivariate_series(order: int) -> TruncatedSeries:
    """Q(z, u, v) = exp(u z/(1-z)) / (1-z^2)^(v/2); u marks paths, v cycles."""
    u = TruncatedSeries.marker("u")
    v = TruncatedSeries.marker("v")
    exponent = path_series(order) * u + cycle_series(order) * v
    return series_exp(exponent.with_max_degree(None))


def cycle_marked_series(order: int) -> TruncatedSeries:
    """R(z, u) = Q(z, u, u^2): u marks cycles of the composition."""
    u = TruncatedSeries.marker("u")
    exponent = path_series(order) * u + cycle_series(order) * TruncatedSeries.marker("u", 2)
    return series_exp(exponent)


def _integer_scaled(series: TruncatedSeries) -> list[int]:
    out = []
    for n, c in enumerate(series.univariate()):
        x = c * math.factorial(n)
        if x.denominator != 1:
            raise ValueError(f"coefficient {n} is not an integer-scaled EGF entry")
        out.append(x.numerator)
    return out


# ---------------------------------------------------------------- counts


def s_permutation_counts(S: Iterable[int], N: int) -> list[int]:
    """Permutations of [n] with every cycle length in S, n = 0..N."""
    S = sorted(set(int(s) for s in S))
    if not S or S[0] < 1:
        raise ValueError("S must be a nonempty set of positive integers")
    weights = [0] * (N + 1)
    for s in S:
        if s <= N:
            weights[s] = math.factorial(s - 1)
    return labelled_exp_counts(weights, N)


def cycle_type_sum_count(S: Iterable[int], n: int) -> int:
    """Sum of n!/prod(c_i! s_i^c_i) over cycle types with lengths in S."""
    S = sorted(set(int(s) for s in S))
    nf = math.factorial(n)
    total = 0

    def rec(i: int, remaining: int, denom: int):
        nonlocal total
        if remaining == 0:
            total += nf // denom
            return
        if i == len(S):
            return
        s = S[i]
        c = 0
        d = denom
        while c * s <= remaining:
            rec(i + 1, remaining - c * s, d)
            c += 1
            d *= c * s
    rec(0, n, 1)
    return total


def involution_pair_counts(N: int) -> list[tuple[int, Fraction]]:
    """``(n! b_n, b_n)`` for n <= N via the exponential formula applied to
    the path and cycle component series."""
    weights = _integer_scaled(path_series(N) + cycle_series(N))
    counts = labelled_exp_counts(weights, N)
    return [(c, Fraction(c, math.factorial(n))) for n, c in enumerate(counts)]


@lru_cache(maxsize=8)
def _component_table(kind: str, N: int) -> tuple[tuple[int, ...], ...]:
    """T[m][p]: number of sets of exactly p components of one kind on [m]."""
    series = path_series(N) if kind == "path" else cycle_series(N)
    w = _integer_scaled(series)
    T = [[1]]
    for m in range(1, N + 1):
        row = [0] * (m + 1)
        binom = 1
        for j in range(1, m + 1):
            if w[j]:
                prev = T[m - j]
                coef = binom * w[j]
                for p in range(len(prev)):
                    if prev[p]:
                        row[p + 1] += coef * prev[p]
            binom = binom * (m - j) // j
        while len(row) > 1 and row[-1] == 0:
            row.pop()
        T.append(row)
    return tuple(tuple(r) for r in T)


def path_cycle_table(n: int) -> dict[tuple[int, int], int]:
    """Pairs of matchings on [n] by (number of paths, number of cycles)."""
    paths = _component_table("path", n)
    cycles = _component_table("cycle", n)
    table: dict[tuple[int, int], int] = {}
    for m in range(n + 1):
        binom = math.comb(n, m)
        prow, crow = paths[m], cycles[n - m]
        for p, x in enumerate(prow):
            if not x:
                continue
            for c, y in enumerate(crow):
                if y:
                    table[(p, c)] = table.get((p, c), 0) + binom * x * y
    return table


# ---------------------------------------------------------------- means


def pair_expectation(kernel: Sequence[Fraction], n: int) -> Fraction:
    """``[z^n] P(z) T(z) / [z^n] P(z)`` for a kernel series T."""
    c = pair_counts(n)
    whole = 0
    frac = Fraction(0)
    ff = 1
    for s in range(0, min(len(kernel) - 1, n) + 1):
        if s:
            ff *= n - s + 1
        t = kernel[s]
        if not t:
            continue
        x = t * ff
        if x.denominator == 1:
            whole += x.numerator * c[n - s]
        else:
            frac += x * c[n - s]
    return (frac + whole) / c[n]


def _linear_marker_kernel(exponent: TruncatedSeries) -> list[Fraction]:
    # exponent has no marker-free part, so exp(H) = 1 + [w]H * w mod w^2
    return exponent.marker_coefficient("u", 1).univariate()


def k_cycle_moment_kernels(k: int, order: int) -> tuple[list[Fraction], list[Fraction]]:
    """Kernels T_1, T_2 with E[(chi)_r] = [z^n] P T_r / [z^n] P for the
    number chi of k-cycles of tau o sigma.

    The marking factor exp((u-1) z^k + (u^2-1) z^{2k} / 2k) is expanded in
    w = u - 1 (stored in the ``u`` slot) and truncated at degree 2, which is
    exact for the first two factorial moments.
    """
    w = TruncatedSeries.marker("u")
    w2 = TruncatedSeries.marker("u", 2)
    exponent = TruncatedSeries.monomial(k, order, max_degree=2) * w
    tail = TruncatedSeries.monomial(2 * k, order, Fraction(1, k), max_degree=2)
    exponent = exponent + tail * w + tail * w2 * Fraction(1, 2)
    marked = series_exp(exponent)
    t1 = marked.marker_coefficient("u", 1).univariate()
    t2 = [2 * x for x in marked.marker_coefficient("u", 2).univariate()]
    return t1, t2


def _check_k(n: int, k: int):
    if not 1 <= k <= n:
        raise ValueError(f"cycle length k={k} outside 1..{n}")


def exact_mean_k_cycles(n: int, k: int) -> Fraction:
    """Mean number of k-cycles of tau o sigma over all pairs of involutions."""
    _check_k(n, k)
    t1, _ = k_cycle_moment_kernels(k, n)
    return pair_expectation(t1, n)


def k_cycle_factorial_moments(n: int, k: int) -> tuple[Fraction, Fraction]:
    _check_k(n, k)
    t1, t2 = k_cycle_moment_kernels(k, n)
    return pair_expectation(t1, n), pair_expectation(t2, n)


def exact_k_cycle_distribution(n: int, k: int) -> dict[int, Fraction]:
    """Exact law of the number of k-cycles of tau o sigma on [n].

    The marked components (k-paths and 2k-cycles) of a pair with j such
    cycles cover exactly kj vertices, so the count factors as
    C(n, kj) * X_j * Y_{n-kj}. X_j counts sets of marked components. Y counts
    pairs with no marked component.
    """
    _check_k(n, k)
    mono = [0] * (2 * k)
    mono[k - 1] += k
    mono[2 * k - 1] += 1
    # Y = P * exp(-z^k - z^{2k}/2k), so Y'/Y = A/D - (k z^{k-1} + z^{2k-1})
    num = _poly_sub(_PAIR_NUM, _poly_mul(_PAIR_DEN, mono))
    Y = holonomic_exp_counts(num, _PAIR_DEN, n)
    total = pair_counts(n)[n]
    dist: dict[int, Fraction] = {}
    for j in range(n // k + 1):
        count = math.comb(n, k * j) * _marked_sets(j, k) * Y[n - k * j]
        if count:
            dist[j] = Fraction(count, total)
    return dist


def _marked_sets(j: int, k: int) -> int:
    """(kj)! * sum_{a+2b=j} 1/(a! b! (2k)^b): sets of k-paths and 2k-cycles
    covering kj labelled vertices."""
    h = j // 2
    matchings = 1  # j!/((j-2b)! b! 2^b)
    total = 0
    for b in range(h + 1):
        total += matchings * k ** (h - b)
        matchings = matchings * (j - 2 * b) * (j - 2 * b - 1) // (2 * (b + 1))
    x = Fraction(math.factorial(k * j) * total, math.factorial(j) * k**h)
    assert x.denominator == 1
    return x.numerator


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return out


def exact_mean_cycles(n: int) -> Fraction:
    """Mean number of cycles of tau o sigma, from R(z, 1 + w)."""
    w = TruncatedSeries.marker("u")
    w2 = TruncatedSeries.marker("u", 2)
    cyc = cycle_series(n)
    # u = 1 + w: u z/(1-z) + u^2 C(z) minus its w-free part
    exponent = path_series(n) * w + cyc * w * 2 + cyc * w2
    return pair_expectation(_linear_marker_kernel(exponent), n)


def exact_component_means(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """(mean paths, mean graph cycles, mean vertices on cycles) of sigma u tau."""
    w = TruncatedSeries.marker("u")
    paths = pair_expectation(_linear_marker_kernel(path_series(n) * w), n)
    cycles = pair_expectation(_linear_marker_kernel(cycle_series(n) * w), n)
    # exp(z/(1-z)) / sqrt(1 - u^2 z^2) with u = 1 + w, divided by P(z)
    one = TruncatedSeries.monomial(0, n, max_degree=1)
    marked_sq = {(0, 0): Fraction(1), (1, 0): Fraction(2), (2, 0): Fraction(1)}
    inner = one - TruncatedSeries.monomial(2, n, max_degree=1) * marked_sq
    exponent = series_log(inner) * Fraction(-1, 2) - cycle_series(n)
    elements = pair_expectation(_linear_marker_kernel(exponent), n)
    return paths, cycles, elements


def acyclic_probability(n: int) -> Fraction:
    """Probability that sigma u tau has no cyclic component."""
    numerator = holonomic_exp_counts([1], [1, -2, 1], n)[n]
    return Fraction(numerator, pair_counts(n)[n])


# ---------------------------------------------------------------- limit laws


@dataclass(frozen=True)
class PoissonMixture:
    """Law of A + 2B with A ~ Poisson(1), B ~ Poisson(1/2k), truncated at j_max."""

    k: int
    pmf: tuple[float, ...]

    def __call__(self, j: int) -> float:
        return self.pmf[j] if 0 <= j < len(self.pmf) else 0.0

    @property
    def mean(self) -> float:
        return math.fsum(j * p for j, p in enumerate(self.pmf))

    def factorial_moment(self, r: int) -> float:
        return math.fsum(math.perm(j, r) * p for j, p in enumerate(self.pmf))

    def as_dict(self) -> dict[int, float]:
        return {j: p for j, p in enumerate(self.pmf) if p > 0}


def poisson_mixture(k: int, j_max: int = 60) -> PoissonMixture:
    if k < 1:
        raise ValueError("k must be positive")
    lam = 1.0 / (2 * k)
    pmf = []
    for j in range(j_max + 1):
        terms = [
            math.exp(-1.0 - math.lgamma(j - 2 * b + 1) - lam + b * math.log(lam) - math.lgamma(b + 1))
            for b in range(j // 2 + 1)
        ]
        pmf.append(math.fsum(terms))
    return PoissonMixture(k, tuple(pmf))


@dataclass(frozen=True)
class FpfCycleDistribution:
    """Exact law of the cycle count of tau o sigma for fixed-point-free
    sigma, tau on [2n]; keys are the (even) cycle counts."""

    n: int
    pmf: dict[int, Fraction] = field(repr=False)

    @property
    def mean(self) -> Fraction:
        return sum((c * p for c, p in self.pmf.items()), Fraction(0))

    @property
    def harmonic_mean_formula(self) -> Fraction:
        return 2 * harmonic(2 * self.n) - harmonic(self.n)


def fpf_cycle_count_distribution(n: int) -> FpfCycleDistribution:
    """Twice a sum of independent Bernoulli(1/(2k-1)), k = 1..n."""
    if n < 1:
        raise ValueError("ground set is [2n] with n >= 1")
    # prod_k ((2k-2) + x) / prod_k (2k-1): coefficient of x^j is P(j successes)
    poly = [1]
    denom = 1
    for k in range(1, n + 1):
        poly = _poly_mul(poly, [2 * k - 2, 1])
        denom *= 2 * k - 1
    return FpfCycleDistribution(n, {2 * j: Fraction(c, denom) for j, c in enumerate(poly) if c})


def _falling(x: Fraction | int, m: int) -> Fraction:
    out = Fraction(1)
    for i in range(m):
        out *= x - i
    return out


def expected_component_counts(n: int, k: int, l: int, r: int) -> tuple[Fraction, Fraction]:
    """Expected numbers of r-paths and r-cycles in sigma u tau, where sigma
    and tau are uniform among matchings of [n] with k and l fixed points."""
    if not (0 <= k <= n and 0 <= l <= n) or (n - k) % 2 or (n - l) % 2:
        raise ValueError(f"need n-k and n-l even with 0 <= k, l <= n (n={n}, k={k}, l={l})")
    if r < 1:
        raise ValueError("r must be positive")
    if r > n:
        return Fraction(0), Fraction(0)
    hk, hl = Fraction(n - k, 2), Fraction(n - l, 2)
    nr = _falling(n, r)
    if r % 2:
        h = (r - 1) // 2
        paths = k * l * _falling(hk, h) * _falling(hl, h) * 2 ** (r - 1) / nr
        cycles = Fraction(0)
    else:
        h = r // 2
        paths = (
            (k * (k - 1) * _falling(hk, h - 1) * _falling(hl, h) + l * (l - 1) * _falling(hk, h) * _falling(hl, h - 1))
            * 2 ** (r - 1)
            / (2 * nr)
        )
        cycles = _falling(hk, h) * _falling(hl, h) * 2**r / (r * nr)
    return paths, cycles


def fpf_cycle_elements(n: int, r: int) -> Fraction:
    """Expected number of vertices on r-cycles of sigma u tau, both
    fixed-point-free on [n]."""
    return r * expected_component_counts(n, 0, 0, r)[1]
