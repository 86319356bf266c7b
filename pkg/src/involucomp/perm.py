"""Permutations, partial matchings and superpositions of two matchings.

Every public signature uses 1-based labels. Internally each object holds a
read-only 0-based ``numpy`` array; partial matchings use ``-1`` for "no
partner". Objects are immutable once built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from numba import njit

SOLID = "solid"
DOTTED = "dotted"
PATH = "path"
CYCLE = "cycle"


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64, copy=True)
    a.setflags(write=False)
    return a


def _to_zero_based(values: Sequence[int] | np.ndarray) -> np.ndarray:
    if isinstance(values, np.ndarray):
        return values.astype(np.int64) - 1
    return np.fromiter((int(v) - 1 for v in values), dtype=np.int64, count=len(values))


# ---------------------------------------------------------------- kernels


@njit(cache=True)
def _cycle_counts(a):
    """counts[k] = number of k-cycles of the 0-based image array ``a``."""
    n = a.shape[0]
    counts = np.zeros(n + 1, np.int64)
    seen = np.zeros(n, np.bool_)
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            length += 1
        counts[length] += 1
    return counts


@njit(cache=True)
def _cycle_length_of(a, start):
    length = 1
    j = a[start]
    while j != start:
        j = a[j]
        length += 1
    return length


@njit(cache=True)
def _matching_image(p):
    n = p.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        out[i] = p[i] if p[i] >= 0 else i
    return out


@njit(cache=True)
def _compose_matchings(tp, sp):
    """0-based image of tau o sigma for two partner arrays."""
    n = sp.shape[0]
    out = np.empty(n, np.int64)
    for i in range(n):
        j = sp[i] if sp[i] >= 0 else i
        out[i] = tp[j] if tp[j] >= 0 else j
    return out


@njit(cache=True)
def _superpose_kernel(sp, tp):
    """Decompose sigma u tau into colored components.

    Returns (order, starts, kinds, first) where component c occupies
    order[starts[c]:starts[c+1]], kinds[c] is 0 for a path and 1 for a cycle,
    and first[c] is the color of the first edge (0 solid, 1 dotted, -1 none).
    Paths start at their smaller endpoint and are found before cycles; cycles
    start at their smallest vertex and leave along the solid edge.
    """
    n = sp.shape[0]
    order = np.empty(n, np.int64)
    starts = np.empty(n + 1, np.int64)
    kinds = np.empty(n, np.int8)
    first = np.empty(n, np.int8)
    seen = np.zeros(n, np.bool_)
    pos = 0
    nc = 0
    for i in range(n):
        if seen[i]:
            continue
        deg = 0
        if sp[i] >= 0:
            deg += 1
        if tp[i] >= 0:
            deg += 1
        if deg == 2:
            continue
        starts[nc] = pos
        kinds[nc] = 0
        col = -1
        if sp[i] >= 0:
            col = 0
        elif tp[i] >= 0:
            col = 1
        first[nc] = col
        cur = i
        while True:
            seen[cur] = True
            order[pos] = cur
            pos += 1
            if col == 0:
                nxt = sp[cur]
            elif col == 1:
                nxt = tp[cur]
            else:
                nxt = -1
            if nxt < 0:
                break
            cur = nxt
            col = 1 - col
        nc += 1
    for i in range(n):
        if seen[i]:
            continue
        starts[nc] = pos
        kinds[nc] = 1
        first[nc] = 0
        cur = i
        col = 0
        while True:
            seen[cur] = True
            order[pos] = cur
            pos += 1
            nxt = sp[cur] if col == 0 else tp[cur]
            col = 1 - col
            if nxt == i:
                break
            cur = nxt
        nc += 1
    starts[nc] = pos
    return order, starts[: nc + 1].copy(), kinds[:nc].copy(), first[:nc].copy()


@njit(cache=True)
def _induced_counts(n, starts, kinds):
    counts = np.zeros(n + 1, np.int64)
    for c in range(kinds.shape[0]):
        length = starts[c + 1] - starts[c]
        if kinds[c] == 0:
            counts[length] += 1
        else:
            counts[length // 2] += 2
    return counts


# ---------------------------------------------------------------- types


class Permutation:
    """A bijection of {1..n}; ``image[i-1]`` is the image of ``i``."""

    __slots__ = ("_a",)

    def __init__(self, image: Sequence[int] | np.ndarray):
        a = _to_zero_based(image)
        n = a.shape[0]
        if n and (a.min() < 0 or a.max() >= n or np.unique(a).shape[0] != n):
            raise ValueError(f"not a permutation of 1..{n}: {list(image)!r}")
        self._a = _frozen(a)

    @classmethod
    def _wrap(cls, a0: np.ndarray) -> "Permutation":
        obj = object.__new__(cls)
        obj._a = _frozen(a0)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._wrap(np.arange(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        a = np.arange(n, dtype=np.int64)
        touched: set[int] = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if not 1 <= x <= n:
                    raise ValueError(f"label {x} outside 1..{n}")
                if x in touched:
                    raise ValueError(f"label {x} appears twice")
                touched.add(x)
            for x, y in zip(cyc, cyc[1:] + cyc[:1]):
                a[x - 1] = y - 1
        return cls._wrap(a)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse cycle notation ``"(1 2 3 4)(5)"`` or one-line ``"2 3 4 1"``.

        Labels are split on whitespace or commas. When the whole string has
        no separators and ``n`` is not known to be 10 or more, a token like
        ``1234`` is read digit by digit if its digits are distinct and
        nonzero, so ``(10)`` and ``(11)`` stay single labels.
        Labels never mentioned in cycle notation are fixed points.
        """
        text = text.strip()
        compact = not re.search(r"[\s,]", text) and (n is None or n < 10)

        def split(tokens):
            t = tokens[0] if len(tokens) == 1 else ""
            if compact and len(t) > 1 and "0" not in t and len(set(t)) == len(t):
                return list(t)
            return tokens

        if "(" not in text:
            if not text:
                return cls.identity(n or 0)
            perm = cls([int(t) for t in split(re.split(r"[\s,]+", text))])
            if n is not None and perm.n != n:
                raise ValueError(f"expected {n} entries, got {perm.n}")
            return perm
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for group in re.findall(r"\(([^()]*)\)", text):
            tokens = [t for t in re.split(r"[\s,]+", group.strip()) if t]
            cycles.append([int(t) for t in split(tokens)])
        largest = max((max(c) for c in cycles if c), default=0)
        if n is None:
            n = largest
        elif largest > n:
            raise ValueError(f"label {largest} exceeds n={n}")
        return cls.from_cycles(n, [c for c in cycles if c])

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(int(x) + 1 for x in self._a)

    def __len__(self) -> int:
        return self.n

    def __call__(self, i: int) -> int:
        return int(self._a[i - 1]) + 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self._a, other._a)

    def __hash__(self) -> int:
        return hash(self._a.tobytes())

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles in standard form: each starts at its minimum, sorted by it."""
        seen = np.zeros(self.n, bool)
        out = []
        for i in range(self.n):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j + 1)
                j = int(self._a[j])
            out.append(tuple(cyc))
        return out

    def one_line(self) -> str:
        return " ".join(str(x) for x in self.image)

    def is_involution(self) -> bool:
        return bool(np.array_equal(self._a[self._a], np.arange(self.n)))

    def __str__(self) -> str:
        if self.n == 0:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())

    def __repr__(self) -> str:
        return f"Permutation.parse({str(self)!r}, n={self.n})"


class PartialMatching:
    """An involution stored as a symmetric partner table.

    ``partner[i-1]`` is the label matched with ``i``, or ``None`` for a
    fixed point.
    """

    __slots__ = ("_p",)

    def __init__(self, partner: Sequence[int | None]):
        p = np.array([-1 if j is None else int(j) - 1 for j in partner], dtype=np.int64)
        n = p.shape[0]
        for i, j in enumerate(p):
            if j < 0:
                continue
            if j >= n or j == i or p[j] != i:
                raise ValueError(f"partner table is not a matching: {list(partner)!r}")
        self._p = _frozen(p)

    @classmethod
    def _wrap(cls, p0: np.ndarray) -> "PartialMatching":
        obj = object.__new__(cls)
        obj._p = _frozen(p0)
        return obj

    @classmethod
    def identity(cls, n: int) -> "PartialMatching":
        return cls._wrap(np.full(n, -1))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "PartialMatching":
        partner: list[int | None] = [None] * n
        for i, j in pairs:
            if partner[i - 1] is not None or partner[j - 1] is not None:
                raise ValueError(f"label reused in pair ({i}, {j})")
            partner[i - 1], partner[j - 1] = j, i
        return cls(partner)

    @classmethod
    def from_permutation(cls, pi: Permutation) -> "PartialMatching":
        if not pi.is_involution():
            raise ValueError(f"{pi} is not an involution")
        a = pi._a
        return cls._wrap(np.where(a == np.arange(pi.n), -1, a))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "PartialMatching":
        return cls.from_permutation(Permutation.parse(text, n))

    @property
    def n(self) -> int:
        return self._p.shape[0]

    @property
    def partner(self) -> tuple[int | None, ...]:
        return tuple(None if j < 0 else int(j) + 1 for j in self._p)

    def __len__(self) -> int:
        return self.n

    def __call__(self, i: int) -> int:
        j = self._p[i - 1]
        return i if j < 0 else int(j) + 1

    def pairs(self) -> list[tuple[int, int]]:
        return [(i + 1, int(j) + 1) for i, j in enumerate(self._p) if j > i]

    def fixed_points(self) -> list[int]:
        return [i + 1 for i, j in enumerate(self._p) if j < 0]

    def is_fixed_point_free(self) -> bool:
        return bool((self._p >= 0).all())

    def as_permutation(self) -> Permutation:
        return Permutation._wrap(_matching_image(self._p))

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialMatching) and np.array_equal(self._p, other._p)

    def __hash__(self) -> int:
        return hash(self._p.tobytes())

    def __str__(self) -> str:
        return str(self.as_permutation())

    def __repr__(self) -> str:
        return f"PartialMatching.parse({str(self)!r}, n={self.n})"


class CycleType(Mapping[int, int]):
    """Multiplicities ``k -> c_k`` of the cycle lengths of a permutation.

    Only lengths that occur are stored; ``multiplicity(k)`` returns 0 for the
    rest.
    """

    __slots__ = ("_items",)

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = dict(counts)
        for k, c in items.items():
            if int(k) < 1 or int(c) < 0:
                raise ValueError(f"invalid cycle-type entry {k}: {c}")
        self._items = tuple(sorted((int(k), int(c)) for k, c in items.items() if c > 0))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "CycleType":
        counts: dict[int, int] = {}
        for k in lengths:
            counts[int(k)] = counts.get(int(k), 0) + 1
        return cls(counts)

    @classmethod
    def _from_array(cls, counts: np.ndarray) -> "CycleType":
        obj = object.__new__(cls)
        nz = np.flatnonzero(counts)
        obj._items = tuple((int(k), int(counts[k])) for k in nz)
        return obj

    def __getitem__(self, k: int) -> int:
        for key, c in self._items:
            if key == k:
                return c
        raise KeyError(k)

    def __iter__(self) -> Iterator[int]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def multiplicity(self, k: int) -> int:
        return dict(self._items).get(k, 0)

    @property
    def size(self) -> int:
        return sum(k * c for k, c in self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, CycleType):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self == CycleType(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        return f"CycleType({dict(self._items)})"

    def representative(self) -> Permutation:
        """The permutation with consecutive cycles (1..k1)(k1+1..) of this type."""
        cycles = []
        start = 1
        for k, c in self._items:
            for _ in range(c):
                cycles.append(range(start, start + k))
                start += k
        return Permutation.from_cycles(self.size, cycles)


@dataclass(frozen=True)
class Component:
    """One connected component of a superposition.

    ``colors[i]`` is the color of the edge from ``vertices[i]`` to the next
    vertex (wrapping around for a cycle).
    """

    kind: str
    vertices: tuple[int, ...]
    colors: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.vertices)


class Superposition:
    """The 2-edge-colored graph sigma u tau split into paths and cycles."""

    __slots__ = ("n", "_order", "_starts", "_kinds", "_first", "_components")

    def __init__(self, n, order, starts, kinds, first):
        self.n = n
        self._order = order
        self._starts = starts
        self._kinds = kinds
        self._first = first
        self._components = None

    @property
    def components(self) -> tuple[Component, ...]:
        if self._components is None:
            comps = []
            for c in range(self._kinds.shape[0]):
                verts = tuple(int(v) + 1 for v in self._order[self._starts[c] : self._starts[c + 1]])
                kind = PATH if self._kinds[c] == 0 else CYCLE
                n_edges = len(verts) - 1 if kind == PATH else len(verts)
                col = int(self._first[c])
                colors = tuple(SOLID if (col + e) % 2 == 0 else DOTTED for e in range(n_edges))
                comps.append(Component(kind, verts, colors))
            comps.sort(key=lambda comp: comp.vertices[0])
            self._components = tuple(comps)
        return self._components

    def lengths(self, kind: str) -> np.ndarray:
        want = 0 if kind == PATH else 1
        sizes = np.diff(self._starts)
        return sizes[self._kinds == want]

    @property
    def num_paths(self) -> int:
        return int((self._kinds == 0).sum())

    @property
    def num_cycles(self) -> int:
        return int((self._kinds == 1).sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, Superposition) and self.n == other.n and self.components == other.components

    def __repr__(self) -> str:
        return f"Superposition(n={self.n}, paths={self.num_paths}, cycles={self.num_cycles})"


# ---------------------------------------------------------------- operations


def _image_array(x: Permutation | PartialMatching) -> np.ndarray:
    if isinstance(x, PartialMatching):
        return _matching_image(x._p)
    return x._a


def compose(tau: Permutation | PartialMatching, sigma: Permutation | PartialMatching) -> Permutation:
    """``tau o sigma``: sigma is applied first."""
    if tau.n != sigma.n:
        raise ValueError(f"size mismatch: {tau.n} vs {sigma.n}")
    if isinstance(tau, PartialMatching) and isinstance(sigma, PartialMatching):
        return Permutation._wrap(_compose_matchings(tau._p, sigma._p))
    return Permutation._wrap(_image_array(tau)[_image_array(sigma)])


def invert(pi: Permutation) -> Permutation:
    inv = np.empty(pi.n, dtype=np.int64)
    inv[pi._a] = np.arange(pi.n)
    return Permutation._wrap(inv)


def cycle_type(pi: Permutation | PartialMatching) -> CycleType:
    return CycleType._from_array(_cycle_counts(_image_array(pi)))


def superpose(sigma: PartialMatching, tau: PartialMatching) -> Superposition:
    if sigma.n != tau.n:
        raise ValueError(f"size mismatch: {sigma.n} vs {tau.n}")
    return Superposition(sigma.n, *_superpose_kernel(sigma._p, tau._p))


def induced_cycle_type(sp: Superposition) -> CycleType:
    """Each k-path gives one k-cycle of tau o sigma, each 2k-cycle gives two."""
    return CycleType._from_array(_induced_counts(sp.n, sp._starts, sp._kinds))


def involution_partners(n: int, fixed_points: int | None = None) -> np.ndarray:
    """All involutions of [n] (optionally with exactly ``fixed_points`` fixed
    points) as rows of 0-based partner arrays, built by deciding the smallest
    undecided element: fixed, or matched to a larger undecided element."""
    rows: list[list[int]] = []
    p = [-1] * n

    def rec(rest: list[int], fixed_left: int | None):
        if not rest:
            if fixed_left in (None, 0):
                rows.append(list(p))
            return
        i, tail = rest[0], rest[1:]
        if fixed_left is None or fixed_left > 0:
            rec(tail, None if fixed_left is None else fixed_left - 1)
        for t, j in enumerate(tail):
            p[i], p[j] = j, i
            rec(tail[:t] + tail[t + 1 :], fixed_left)
            p[i] = p[j] = -1

    if fixed_points is None or (0 <= fixed_points <= n and (n - fixed_points) % 2 == 0):
        rec(list(range(n)), fixed_points)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def involutions(n: int, fixed_points: int | None = None) -> Iterator[PartialMatching]:
    for row in involution_partners(n, fixed_points):
        yield PartialMatching._wrap(row)
