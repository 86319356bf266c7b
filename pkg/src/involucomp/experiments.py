"""Monte Carlo experiments for the limit laws, with machine-readable reports.

Trial ``t`` of every experiment draws from ``SeededStream(seed, t)``, so a
report depends only on its parameters and seed. Sampling and cycle counting
run in fused numba kernels over chunks of trials.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np
from numba import njit

from . import egf
from .asymptotics import closed_form_estimates, fpf_length_law
from .factorization import log_count_factorizations, log_f, log_f_moment_arrays
from .perm import _compose_matchings, _cycle_counts, _cycle_length_of
from .samplers import (
    SeededStream,
    _fixed_point_into,
    _fpf_into,
    _involution_into,
    involution_ratios,
    pstar_lengths,
    sample_uniform_permutation,
)
from .stats import (
    empirical_pmf,
    ks_normal,
    mean_and_se,
    total_variation,
    variance_and_se,
)

_CHUNK_FLOATS = 1 << 22
EXACT_REFERENCE_MAX_N = 2000


# ---------------------------------------------------------------- report


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    seed: int
    trials: int
    summaries: dict = field(default_factory=dict)
    references: dict = field(default_factory=dict)
    distances: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def check(self, name: str, passed: bool, **detail) -> bool:
        self.checks[name] = {"passed": bool(passed), **detail}
        return bool(passed)

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "name": self.name,
            "parameters": self.parameters,
            "seed": self.seed,
            "trials": self.trials,
            "summaries": self.summaries,
            "references": self.references,
            "distances": self.distances,
            "checks": self.checks,
            "passed": self.passed,
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return _plain(d)

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)

    def pmf_csv(self) -> str:
        """Empirical and reference pmf tables side by side."""
        emp = self.summaries.get("pmf", {})
        refs = {k: v for k, v in self.references.items() if k.endswith("pmf")}
        keys = sorted(set(emp) | {j for r in refs.values() for j in r})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = sorted(refs)
        w.writerow(["value", "empirical", *names])
        for j in keys:
            w.writerow([j, repr(float(emp.get(j, 0.0))), *(repr(float(refs[r].get(j, 0.0))) for r in names)])
        return buf.getvalue()


def _timed(fn: Callable[..., ExperimentReport]) -> Callable[..., ExperimentReport]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.wall_time = time.perf_counter() - start
        return report

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _within_se(report: ExperimentReport, name: str, value: float, se: float, ref: float, z: float) -> bool:
    if not math.isfinite(se):
        ok = value == ref
    elif se == 0:
        ok = abs(value - ref) <= 1e-12 * max(1.0, abs(ref))
    else:
        ok = abs(value - ref) <= z * se
    return report.check(name, ok, value=value, reference=ref, standard_error=se, z=z)


def _pmf_float(d: dict) -> dict[int, float]:
    return {int(k): float(v) for k, v in d.items()}


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def _pair_kernel(n, ratios, U, lengths, counts, totals):
    sp = np.empty(n, np.int64)
    tp = np.empty(n, np.int64)
    for t in range(U.shape[0]):
        _involution_into(n, ratios, U[t, : 2 * n], sp)
        _involution_into(n, ratios, U[t, 2 * n :], tp)
        c = _cycle_counts(_compose_matchings(tp, sp))
        for i in range(lengths.shape[0]):
            counts[t, i] = c[lengths[i]] if lengths[i] <= n else 0
        totals[t] = c.sum()


@njit(cache=True)
def _fpf_kernel(n, U, totals, longest, odd, first_len):
    sp = np.empty(n, np.int64)
    tp = np.empty(n, np.int64)
    h = n // 2
    for t in range(U.shape[0]):
        sp[:] = -2
        tp[:] = -2
        _fpf_into(n, U[t, :h], sp)
        _fpf_into(n, U[t, h:], tp)
        img = _compose_matchings(tp, sp)
        c = _cycle_counts(img)
        totals[t] = c.sum()
        m = 0
        bad = False
        for k in range(1, n + 1):
            if c[k] > 0:
                m = k
                if c[k] % 2:
                    bad = True
        longest[t] = m
        odd[t] = bad
        first_len[t] = _cycle_length_of(img, 0)


@njit(cache=True)
def _component_counts(sp, tp, paths, cycles):
    """paths[r], cycles[r]: components of sigma u tau with r vertices."""
    n = sp.shape[0]
    seen = np.zeros(n, np.bool_)
    for v in range(n):
        if seen[v] or (sp[v] >= 0 and tp[v] >= 0):
            continue
        color = 0 if sp[v] >= 0 else 1
        cur = v
        seen[v] = True
        length = 1
        while True:
            nxt = sp[cur] if color == 0 else tp[cur]
            if nxt < 0:
                break
            cur = nxt
            seen[cur] = True
            length += 1
            color ^= 1
        paths[length] += 1
    for v in range(n):
        if seen[v]:
            continue
        cur = v
        color = 0
        length = 0
        while not seen[cur]:
            seen[cur] = True
            length += 1
            cur = sp[cur] if color == 0 else tp[cur]
            color ^= 1
        cycles[length] += 1


@njit(cache=True)
def _fixed_point_pair_kernel(n, k, l, U, r_max, path_out, cycle_out):
    sp = np.empty(n, np.int64)
    tp = np.empty(n, np.int64)
    paths = np.zeros(n + 1, np.int64)
    cycles = np.zeros(n + 1, np.int64)
    for t in range(U.shape[0]):
        _fixed_point_into(n, k, U[t, :n], sp)
        _fixed_point_into(n, l, U[t, n:], tp)
        paths[:] = 0
        cycles[:] = 0
        _component_counts(sp, tp, paths, cycles)
        for r in range(1, r_max + 1):
            path_out[t, r] = paths[r] if r <= n else 0
            cycle_out[t, r] = cycles[r] if r <= n else 0


def _uniform_chunks(seed: int, trials: int, width: int):
    """Yield (start, U) with row i of U the first ``width`` uniforms of trial start + i."""
    chunk = max(1, _CHUNK_FLOATS // max(width, 1))
    for start in range(0, trials, chunk):
        stop = min(trials, start + chunk)
        U = np.empty((stop - start, width))
        for i in range(stop - start):
            U[i] = SeededStream(seed, start + i).uniforms(width)
        yield start, U


def sample_pair_cycle_counts(n: int, lengths: Sequence[int], trials: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per trial: numbers of cycles of tau o sigma of each requested length,
    and the total number of cycles; sigma, tau uniform involutions of [n]."""
    lengths = np.asarray(lengths, dtype=np.int64)
    counts = np.zeros((trials, len(lengths)), np.int64)
    totals = np.zeros(trials, np.int64)
    ratios = involution_ratios(n)
    for start, U in _uniform_chunks(seed, trials, 4 * n):
        stop = start + U.shape[0]
        _pair_kernel(n, ratios, U, lengths, counts[start:stop], totals[start:stop])
    return counts, totals


# ---------------------------------------------------------------- experiments


@_timed
def run_k_cycle_experiment(n: int, k: int, trials: int, seed: int, tv_tol: float = 0.02) -> ExperimentReport:
    """k-cycles of tau o sigma against the A_k + 2B_k limit law."""
    rep = ExperimentReport("kcycles", {"n": n, "k": k, "tv_tol": tv_tol}, seed, trials)
    if trials <= 0:
        return rep
    counts, _ = sample_pair_cycle_counts(n, [k], trials, seed)
    x = counts[:, 0]
    pmf = empirical_pmf(x)
    mean, se = mean_and_se(x)
    limit = egf.poisson_mixture(k)
    limit_pmf = limit.as_dict()
    rep.summaries.update(pmf=pmf, mean=mean, mean_se=se, variance=float(np.var(x, ddof=1)) if trials > 1 else None)
    rep.references.update(limit_pmf=limit_pmf, limit_mean=1 + 1 / k)
    tv = total_variation(pmf, limit_pmf)
    rep.distances["tv_vs_limit"] = tv
    rep.check("tv_vs_limit", tv < tv_tol, value=tv, tolerance=tv_tol)
    _within_se(rep, "mean_vs_limit", mean, se, 1 + 1 / k, 3)
    if n <= EXACT_REFERENCE_MAX_N:
        exact = _pmf_float(egf.exact_k_cycle_distribution(n, k))
        exact_mean = float(egf.exact_mean_k_cycles(n, k))
        rep.references.update(exact_pmf=exact, exact_mean=exact_mean)
        rep.distances["tv_exact_vs_limit"] = total_variation(exact, limit_pmf)
        tv_exact = total_variation(pmf, exact)
        rep.distances["tv_vs_exact"] = tv_exact
        rep.check("tv_vs_exact", tv_exact < tv_tol, value=tv_exact, tolerance=tv_tol)
        _within_se(rep, "mean_vs_exact", mean, se, exact_mean, 4)
    return rep


@_timed
def run_total_cycles_experiment(n: int, trials: int, seed: int) -> ExperimentReport:
    rep = ExperimentReport("cycles", {"n": n}, seed, trials)
    if trials <= 0:
        return rep
    _, totals = sample_pair_cycle_counts(n, [1], trials, seed)
    mean, se = mean_and_se(totals)
    var, var_se = variance_and_se(totals)
    est = closed_form_estimates(n).mean_cycles_estimate if n >= 1 else 0.0
    rep.summaries.update(mean=mean, mean_se=se, variance=var, variance_se=var_se)
    rep.references["asymptotic_mean"] = est
    # the O(1) constant is unknown: reported only
    rep.distances["mean_minus_asymptotic"] = mean - est
    if n <= EXACT_REFERENCE_MAX_N:
        exact = float(egf.exact_mean_cycles(n))
        rep.references["exact_mean"] = exact
        _within_se(rep, "mean_vs_exact", mean, se, exact, 4)
    return rep


def sample_fpf_statistics(two_n: int, trials: int, seed: int) -> dict[str, np.ndarray]:
    if two_n % 2 or two_n < 2:
        raise ValueError("ground set size must be even and positive")
    totals = np.zeros(trials, np.int64)
    longest = np.zeros(trials, np.int64)
    odd = np.zeros(trials, np.bool_)
    first = np.zeros(trials, np.int64)
    for start, U in _uniform_chunks(seed, trials, two_n):
        s = slice(start, start + U.shape[0])
        _fpf_kernel(two_n, U, totals[s], longest[s], odd[s], first[s])
    return {"totals": totals, "longest": longest, "odd": odd, "first_length": first}


@_timed
def run_fpf_experiment(two_n: int, trials: int, seed: int, tv_tol: float = 0.01) -> ExperimentReport:
    """Cycle counts of the composition of two uniform perfect matchings."""
    rep = ExperimentReport("fpf", {"two_n": two_n, "tv_tol": tv_tol}, seed, trials)
    if trials <= 0:
        return rep
    st = sample_fpf_statistics(two_n, trials, seed)
    x = st["totals"]
    pmf = empirical_pmf(x)
    ref = egf.fpf_cycle_count_distribution(two_n // 2)
    ref_pmf = _pmf_float(ref.pmf)
    mean, se = mean_and_se(x)
    rep.summaries.update(pmf=pmf, mean=mean, mean_se=se, longest_cycle=int(st["longest"].max()))
    rep.references.update(exact_pmf=ref_pmf, exact_mean=float(ref.harmonic_mean_formula))
    tv = total_variation(pmf, ref_pmf)
    rep.distances["tv_vs_exact"] = tv
    rep.check("tv_vs_exact", tv < tv_tol, value=tv, tolerance=tv_tol)
    _within_se(rep, "mean_vs_harmonic", mean, se, float(ref.harmonic_mean_formula), 3)
    rep.check("no_cycle_longer_than_half", int(st["longest"].max()) <= two_n // 2, longest=int(st["longest"].max()))
    rep.check("cycle_multiplicities_even", not bool(st["odd"].any()))
    return rep


@_timed
def run_length_law_experiment(
    two_n: int, gamma: float, delta: float, trials: int, seed: int, tol: float = 0.02
) -> ExperimentReport:
    """Frequency with which label 1 lies on a cycle of length in [gamma n, delta n]."""
    rep = ExperimentReport("lengthlaw", {"two_n": two_n, "gamma": gamma, "delta": delta, "tol": tol}, seed, trials)
    ref = fpf_length_law(gamma, delta)
    rep.references["limit"] = ref
    if trials <= 0:
        return rep
    st = sample_fpf_statistics(two_n, trials, seed)
    L = st["first_length"]
    hit = (L >= gamma * two_n) & (L <= delta * two_n)
    freq = float(hit.mean())
    rep.summaries.update(frequency=freq, frequency_se=math.sqrt(max(freq * (1 - freq), 0.0) / trials))
    rep.distances["abs_error"] = abs(freq - ref)
    rep.check("frequency_vs_limit", abs(freq - ref) <= tol, value=freq, reference=ref, tolerance=tol)
    return rep


@dataclass(frozen=True)
class LognormalModel:
    """Centering and scale of ln F under P*_n from the exact per-length moments."""

    n: int
    mean_sum: float
    var_sum: float

    @classmethod
    def build(cls, n: int) -> "LognormalModel":
        mu, var = log_f_moment_arrays(n)
        return cls(n, math.fsum(mu), math.fsum(var))

    @property
    def s_n(self) -> float:
        return math.sqrt(self.var_sum)

    @property
    def mean_asymptote(self) -> float:
        return 0.5 * math.log(self.n) ** 2

    @property
    def var_asymptote(self) -> float:
        return math.log(self.n) ** 3 / 3

    def standardize(self, log_f_values: np.ndarray) -> np.ndarray:
        return (np.asarray(log_f_values, float) - self.mean_sum) / self.s_n


def pstar_log_factorizations(n: int, trials: int, seed: int) -> np.ndarray:
    """ln F for ``trials`` independent P*_n cycle types (never building permutations)."""
    out = np.empty(trials)
    for t in range(trials):
        lengths = pstar_lengths(n, SeededStream(seed, t))
        if lengths.size == 0:
            out[t] = 0.0
            continue
        out[t] = math.fsum(log_f(c, int(k)) for k, c in Counter(lengths.tolist()).items())
    return out


@_timed
def run_lognormal_experiment(n: int, trials: int, seed: int, ratio_band: tuple[float, float] = (0.9, 1.1)) -> ExperimentReport:
    rep = ExperimentReport("lognormal", {"n": n, "ratio_band": list(ratio_band)}, seed, trials)
    model = LognormalModel.build(n)
    lo, hi = ratio_band
    mean_ratio = model.mean_sum / model.mean_asymptote if n > 1 else math.nan
    var_ratio = model.var_sum / model.var_asymptote if n > 1 else math.nan
    rep.references.update(
        mean_sum=model.mean_sum,
        var_sum=model.var_sum,
        mean_asymptote=model.mean_asymptote,
        var_asymptote=model.var_asymptote,
        mean_ratio=mean_ratio,
        var_ratio=var_ratio,
    )
    rep.check("mean_sum_ratio", lo <= mean_ratio <= hi, value=mean_ratio, band=[lo, hi])
    rep.check("var_sum_ratio", lo <= var_ratio <= hi, value=var_ratio, band=[lo, hi])
    if trials <= 0:
        return rep
    x = pstar_log_factorizations(n, trials, seed)
    mean, se = mean_and_se(x)
    var, var_se = variance_and_se(x)
    rep.summaries.update(mean=mean, mean_se=se, variance=var, variance_se=var_se)
    _within_se(rep, "mean_vs_mean_sum", mean, se, model.mean_sum, 3)
    _within_se(rep, "variance_vs_var_sum", var, var_se, model.var_sum, 3)
    if model.var_sum > 0:
        rep.distances["ks_vs_normal"] = ks_normal(model.standardize(x))
    return rep


def run_lognormal_sweep(ns: Sequence[int], trials: int, seed: int) -> ExperimentReport:
    """KS distance of the standardized ln F to the normal law across sizes."""
    start = time.perf_counter()
    rep = ExperimentReport("lognormal_sweep", {"ns": list(ns)}, seed, trials)
    ks = []
    for n in ns:
        sub = run_lognormal_experiment(n, trials, seed)
        ks.append(sub.distances.get("ks_vs_normal", math.nan))
        rep.summaries[f"n={n}"] = sub.to_dict(include_timing=False)
    rep.distances["ks_vs_normal"] = ks
    rep.check("ks_strictly_decreasing", all(b < a for a, b in zip(ks, ks[1:])), values=ks)
    rep.wall_time = time.perf_counter() - start
    return rep


@_timed
def run_fixed_point_component_experiment(
    n: int, k: int, l: int, r_max: int, trials: int, seed: int
) -> ExperimentReport:
    """Mean numbers of r-paths and r-cycles of sigma u tau with k and l fixed points."""
    rep = ExperimentReport("components", {"n": n, "k": k, "l": l, "r_max": r_max}, seed, trials)
    r_max = min(r_max, n)
    exact = {r: egf.expected_component_counts(n, k, l, r) for r in range(1, r_max + 1)}
    rep.references["exact_paths"] = {r: float(v[0]) for r, v in exact.items()}
    rep.references["exact_cycles"] = {r: float(v[1]) for r, v in exact.items()}
    if k == l and n > 0:
        p = k / n
        # path means grow linearly in n at fixed p; the per-vertex law is p^2 (1-p)^(r-1)
        rep.references["scaled_path_law"] = {r: n * p * p * (1 - p) ** (r - 1) for r in range(1, r_max + 1)}
        rep.references["unscaled_path_law"] = {r: p * p * (1 - p) ** (r - 1) for r in range(1, r_max + 1)}
        rep.references["cycle_law"] = {r: (1 - p) ** r / r for r in range(2, r_max + 1, 2)}
    if trials <= 0:
        return rep
    path_out = np.zeros((trials, r_max + 1), np.int64)
    cycle_out = np.zeros((trials, r_max + 1), np.int64)
    for start, U in _uniform_chunks(seed, trials, 2 * n):
        s = slice(start, start + U.shape[0])
        _fixed_point_pair_kernel(n, k, l, U, r_max, path_out[s], cycle_out[s])
    pm, cm = path_out.mean(axis=0), cycle_out.mean(axis=0)
    sd_p = path_out.std(axis=0, ddof=1) if trials > 1 else np.full(r_max + 1, math.nan)
    sd_c = cycle_out.std(axis=0, ddof=1) if trials > 1 else np.full(r_max + 1, math.nan)
    rep.summaries["path_means"] = {r: float(pm[r]) for r in range(1, r_max + 1)}
    rep.summaries["cycle_means"] = {r: float(cm[r]) for r in range(1, r_max + 1)}
    worst = 0.0
    for r in range(1, r_max + 1):
        for mean, sd, ref in ((pm[r], sd_p[r], exact[r][0]), (cm[r], sd_c[r], exact[r][1])):
            se = sd / math.sqrt(trials)
            ref = float(ref)
            if se > 0:
                worst = max(worst, abs(mean - ref) / se)
            elif abs(mean - ref) > 1e-12 * max(1.0, ref):
                worst = math.inf
    rep.distances["max_z_vs_exact"] = worst
    rep.check("means_vs_exact", worst <= 4.0, max_z=worst, z=4.0)
    return rep


def log_factorizations_of_permutation(pi) -> float:
    from .perm import cycle_type

    return log_count_factorizations(cycle_type(pi))


@_timed
def run_uniform_factorization_experiment(
    n: int, trials: int, seed: int, bootstrap: int = 200
) -> ExperimentReport:
    """ln F for uniform permutations; estimates the scale of the fluctuations
    around (ln n)^2 / 2 relative to (ln n)^3. Exploratory: no checks."""
    rep = ExperimentReport("factorization", {"n": n, "bootstrap": bootstrap}, seed, trials)
    if trials <= 0:
        return rep
    x = np.array([log_factorizations_of_permutation(sample_uniform_permutation(n, SeededStream(seed, t))) for t in range(trials)])
    mean, se = mean_and_se(x)
    rep.summaries.update(mean=mean, mean_se=se, sd=float(x.std(ddof=1)) if trials > 1 else 0.0)
    L = math.log(n) if n > 1 else 0.0
    rep.references["center"] = 0.5 * L * L
    if L > 0 and trials > 1:
        def estimates(sample: np.ndarray) -> tuple[float, float]:
            sd = float(sample.std(ddof=1))
            # c as the sd scale (sd = c L^3) and as the variance scale (var = c L^3)
            return sd / L**3, sd * sd / L**3

        c_sd, c_var = estimates(x)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trials,))))
        boots = np.array([estimates(x[rng.integers(0, trials, trials)]) for _ in range(bootstrap)])
        rep.summaries["c_sd_scale"] = c_sd
        rep.summaries["c_sd_scale_interval"] = np.quantile(boots[:, 0], [0.025, 0.975]).tolist()
        rep.summaries["c_var_scale"] = c_var
        rep.summaries["c_var_scale_interval"] = np.quantile(boots[:, 1], [0.025, 0.975]).tolist()
        rep.summaries["mean_offset_over_L3"] = (mean - 0.5 * L * L) / L**3
    return rep
