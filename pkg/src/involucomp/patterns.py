"""Classical pattern avoidance for permutations and involutions.

Avoiders are counted by depth-first construction of the one-line notation.
A prefix is abandoned as soon as it contains the pattern. Since its parent
prefix was pattern-free, only occurrences ending at the newest entry need
checking. Involutions are built position by position: an entry is forced by
an earlier pairing, a fixed point, or paired with a later free position.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .perm import Permutation

DEFAULT_BOUND = {"all": 12, "involutions": 14}
PatternLike = Permutation | Sequence[int] | str


def as_pattern(pat: PatternLike) -> Permutation:
    if isinstance(pat, Permutation):
        return pat
    if isinstance(pat, str):
        return Permutation([int(c) for c in pat.strip()])
    return Permutation(list(pat))


def _neighbour_tables(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each pattern index j, the index j' > j holding the largest value
    below p[j] (lo) and the smallest value above p[j] (hi), or -1."""
    k = len(p)
    lo = np.full(k, -1, dtype=np.int64)
    hi = np.full(k, -1, dtype=np.int64)
    for j in range(k):
        for t in range(j + 1, k):
            if p[t] < p[j] and (lo[j] < 0 or p[t] > p[lo[j]]):
                lo[j] = t
            if p[t] > p[j] and (hi[j] < 0 or p[t] < p[hi[j]]):
                hi[j] = t
    return lo, hi


@njit(cache=True)
def _ends_with_occurrence(seq, L, k, lo, hi, pos, cand):
    """Does seq[:L] contain the pattern with its last entry at index L-1?"""
    if L < k:
        return False
    if k == 1:
        return True
    pos[k - 1] = L - 1
    j = k - 2
    cand[j] = L - 2
    while True:
        i = cand[j]
        if i < j:
            j += 1
            if j == k - 1:
                return False
            cand[j] -= 1
            continue
        v = seq[i]
        if (lo[j] >= 0 and v < seq[pos[lo[j]]]) or (hi[j] >= 0 and v > seq[pos[hi[j]]]):
            cand[j] -= 1
            continue
        pos[j] = i
        if j == 0:
            return True
        j -= 1
        cand[j] = i - 1


@njit(cache=True)
def _contains(seq, k, lo, hi):
    pos = np.empty(k, dtype=np.int64)
    cand = np.empty(k, dtype=np.int64)
    for L in range(k, len(seq) + 1):
        if _ends_with_occurrence(seq, L, k, lo, hi, pos, cand):
            return True
    return False


@njit(cache=True)
def _count_all(n, k, lo, hi):
    seq = np.empty(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    nxt = np.zeros(n + 1, dtype=np.int64)
    pos = np.empty(k, dtype=np.int64)
    cand = np.empty(k, dtype=np.int64)
    count = 0
    d = 0
    while d >= 0:
        if d == n:
            count += 1
            d -= 1
            used[seq[d]] = False
            continue
        v = nxt[d]
        while v < n and used[v]:
            v += 1
        if v >= n:
            nxt[d] = 0
            d -= 1
            if d >= 0:
                used[seq[d]] = False
            continue
        nxt[d] = v + 1
        seq[d] = v
        if _ends_with_occurrence(seq, d + 1, k, lo, hi, pos, cand):
            continue
        used[v] = True
        d += 1
    return count


@njit(cache=True)
def _count_involutions(n, k, lo, hi):
    seq = np.empty(n, dtype=np.int64)
    # forced[q] = i < q when position q was paired with an earlier position i
    forced = np.full(n, -1, dtype=np.int64)
    # nxt[d] = -1 on a fresh visit, else the next candidate value
    # (d itself is the fixed-point choice)
    nxt = np.full(n, -1, dtype=np.int64)
    pos = np.empty(k, dtype=np.int64)
    cand = np.empty(k, dtype=np.int64)
    count = 0
    d = 0
    while d >= 0:
        if d == n:
            count += 1
            d -= 1
            continue
        if nxt[d] >= 0 and seq[d] > d:
            forced[seq[d]] = -1
        if forced[d] >= 0:
            if nxt[d] >= 0:
                nxt[d] = -1
                d -= 1
                continue
            nxt[d] = 0
            v = forced[d]
        else:
            v = d if nxt[d] < 0 else nxt[d]
            while v < n and v > d and forced[v] >= 0:
                v += 1
            if v >= n:
                nxt[d] = -1
                d -= 1
                continue
            nxt[d] = v + 1
            if v > d:
                forced[v] = d
        seq[d] = v
        if _ends_with_occurrence(seq, d + 1, k, lo, hi, pos, cand):
            continue
        d += 1
    return count


def contains_pattern(pi: PatternLike, pat: PatternLike) -> bool:
    pi, pat = as_pattern(pi), as_pattern(pat)
    if pat.n == 0:
        return True
    if pat.n > pi.n:
        return False
    lo, hi = _neighbour_tables(np.asarray(pat._a))
    return bool(_contains(np.asarray(pi._a), pat.n, lo, hi))


def count_avoiders(n: int, pat: PatternLike, cls: str = "all", bound: int | None = None) -> int:
    """|S_n(pat)| (cls='all') or |I_n(pat)| (cls='involutions')."""
    if cls in ("inv", "involution"):
        cls = "involutions"
    if cls not in DEFAULT_BOUND:
        raise ValueError(f"unknown class {cls!r}")
    limit = DEFAULT_BOUND[cls] if bound is None else bound
    if n > limit:
        raise ValueError(f"n={n} exceeds the enumeration bound {limit} for class {cls!r}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    pat = as_pattern(pat)
    if pat.n == 0:
        return 0
    if n == 0:
        return 1
    lo, hi = _neighbour_tables(np.asarray(pat._a))
    kernel = _count_all if cls == "all" else _count_involutions
    return int(kernel(n, pat.n, lo, hi))


# ---------------------------------------------------------------- references


def _catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def _motzkin(n: int) -> int:
    m = [1, 1]
    for i in range(2, n + 1):
        m.append(((2 * i + 1) * m[i - 1] + (3 * i - 3) * m[i - 2]) // (i + 2))
    return m[n]


def closed_form_reference(name: str, n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if name == "catalan":
        return _catalan(n)
    if name == "motzkin":
        return _motzkin(n)
    if name == "central_binomial":
        return math.comb(n, n // 2)
    if name == "power2":
        return 2 ** (n - 1) if n else 1
    if name == "catalan_product":
        return _catalan((n + 1) // 2) * _catalan(1 + n // 2)
    raise ValueError(f"unknown closed form {name!r}")


def pattern_label(pat: PatternLike) -> str:
    p = as_pattern(pat)
    return "".join(map(str, p.image)) if p.n < 10 else p.one_line()


def reverse_pattern(pat: PatternLike) -> Permutation:
    p = as_pattern(pat)
    return Permutation(list(reversed(p.image)))


def direct_sum_one(pat: PatternLike) -> Permutation:
    """1 (+) pat: prepend a new minimum."""
    p = as_pattern(pat)
    return Permutation([1] + [v + 1 for v in p.image])


def first_discrepancy(pat_a: PatternLike, pat_b: PatternLike, max_n: int, cls: str = "involutions") -> int | None:
    """Smallest n <= max_n with different avoider counts, or None."""
    for n in range(1, max_n + 1):
        if count_avoiders(n, pat_a, cls) != count_avoiders(n, pat_b, cls):
            return n
    return None


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class GrowthRow:
    n: int
    s_count: int | None
    i_count: int
    s_root: float | None
    i_root: float
    ratio: float | None


@dataclass(frozen=True)
class GrowthReport:
    pattern: str
    rows: tuple[GrowthRow, ...]
    note: str = field(default="roots at small n carry polynomial corrections; no limit is asserted")

    @property
    def root_ratio(self) -> list[float | None]:
        """i_root^2 / s_root per row."""
        return [None if r.s_root is None else r.i_root**2 / r.s_root for r in self.rows]

    @property
    def trends_toward_one(self) -> bool:
        vals = [abs(v - 1) for v in self.root_ratio[-4:] if v is not None]
        return len(vals) >= 2 and all(b <= a for a, b in zip(vals, vals[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pattern", "n", "s_count", "i_count", "s_root", "i_root", "ratio", "root_ratio"])
        for r, rr in zip(self.rows, self.root_ratio):
            w.writerow([
                self.pattern, r.n,
                "" if r.s_count is None else r.s_count, r.i_count,
                "" if r.s_root is None else f"{r.s_root:.6f}", f"{r.i_root:.6f}",
                "" if r.ratio is None else f"{r.ratio:.6f}",
                "" if rr is None else f"{rr:.6f}",
            ])
        return buf.getvalue()


def growth_report(pat: PatternLike, N: int, s_max: int | None = None) -> GrowthReport:
    """Counts and n-th roots for n = 1..N. Ordinary counts stop at ``s_max``
    (default: the enumeration bound for all permutations)."""
    p = as_pattern(pat)
    s_max = DEFAULT_BOUND["all"] if s_max is None else s_max
    rows = []
    for n in range(1, N + 1):
        i = count_avoiders(n, p, "involutions")
        s = count_avoiders(n, p, "all") if n <= s_max else None
        rows.append(
            GrowthRow(
                n=n,
                s_count=s,
                i_count=i,
                s_root=None if s is None else s ** (1 / n),
                i_root=i ** (1 / n),
                ratio=None if s is None else i * i / s,
            )
        )
    return GrowthReport(pattern_label(p), tuple(rows))


@dataclass(frozen=True)
class ShiftRow:
    n: int
    i_count: int
    shifted_count: int
    i_root: float
    shifted_root: float


def shift_ratio_report(pat: PatternLike, N: int) -> list[ShiftRow]:
    """Involution counts of pat against 1 (+) pat; evidence only."""
    p = as_pattern(pat)
    q = direct_sum_one(p)
    rows = []
    for n in range(1, N + 1):
        a, b = count_avoiders(n, p, "involutions"), count_avoiders(n, q, "involutions")
        rows.append(ShiftRow(n, a, b, a ** (1 / n), b ** (1 / n)))
    return rows
