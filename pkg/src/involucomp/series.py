"""Exact truncated power series in z with polynomial coefficients in two
marker variables u and v.

A coefficient is a dict mapping the exponent pair ``(i, j)`` of ``u**i * v**j``
to a ``Fraction``. Marker polynomials are truncated at total degree
``max_degree`` (``None`` keeps every term). Truncation only commutes with
evaluation at the point the markers are expanded around, so to read off
factorial moments at u = 1 build the series in the shifted marker w = u - 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

Mono = tuple[int, int]
Poly = dict[Mono, Fraction]
Number = Union[int, Fraction]

_MARKERS = {"u": 0, "v": 1}


class SeriesError(ValueError):
    pass


def _clean(p: Mapping[Mono, Number]) -> Poly:
    return {m: Fraction(c) for m, c in p.items() if c}


def _as_poly(c) -> Poly:
    if isinstance(c, Mapping):
        return _clean(c)
    return _clean({(0, 0): c})


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + sign * c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _pmul(a: Poly, b: Poly, max_degree: int | None) -> Poly:
    out: Poly = {}
    for (i1, j1), x in a.items():
        for (i2, j2), y in b.items():
            if max_degree is not None and i1 + i2 + j1 + j2 > max_degree:
                continue
            m = (i1 + i2, j1 + j2)
            s = out.get(m, 0) + x * y
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _pscale(a: Poly, s: Fraction) -> Poly:
    if not s:
        return {}
    return {m: c * s for m, c in a.items()}


def _min_degree(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    """Coefficients ``c_0..c_N`` of a power series in z, exact to order N."""

    __slots__ = ("order", "coeffs", "max_degree")

    def __init__(self, coeffs: Iterable, order: int | None = None, max_degree: int | None = 2):
        cs = [_as_poly(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise SeriesError("order must be nonnegative")
        cs = cs[: order + 1] + [{} for _ in range(order + 1 - len(cs))]
        if max_degree is not None:
            cs = [{m: c for m, c in p.items() if m[0] + m[1] <= max_degree} for p in cs]
        self.order = order
        self.coeffs = tuple(cs)
        self.max_degree = max_degree

    # -- constructors

    @classmethod
    def _raw(cls, coeffs: list[Poly], order: int, max_degree: int | None) -> "TruncatedSeries":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = tuple(coeffs)
        obj.max_degree = max_degree
        return obj

    @classmethod
    def zero(cls, order: int, max_degree: int | None = 2) -> "TruncatedSeries":
        return cls._raw([{} for _ in range(order + 1)], order, max_degree)

    @classmethod
    def constant(cls, c, order: int, max_degree: int | None = 2) -> "TruncatedSeries":
        return cls([c], order, max_degree)

    @classmethod
    def monomial(cls, power: int, order: int, coefficient=1, max_degree: int | None = 2) -> "TruncatedSeries":
        cs: list = [0] * (order + 1)
        if power <= order:
            cs[power] = coefficient
        return cls(cs, order, max_degree)

    @classmethod
    def from_function(cls, f: Callable[[int], Number], order: int, max_degree: int | None = 2) -> "TruncatedSeries":
        return cls([f(n) for n in range(order + 1)], order, max_degree)

    @staticmethod
    def marker(name: str, power: int = 1) -> Poly:
        """The coefficient polynomial ``u**power`` or ``v**power``."""
        idx = _MARKERS[name]
        return {(power, 0) if idx == 0 else (0, power): Fraction(1)}

    # -- inspection

    def coefficient(self, n: int) -> Poly:
        return dict(self.coeffs[n]) if n <= self.order else {}

    def coeff(self, n: int, u: int = 0, v: int = 0) -> Fraction:
        if n > self.order:
            raise SeriesError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n].get((u, v), Fraction(0))

    def __getitem__(self, n: int) -> Fraction:
        return self.coeff(n)

    def is_univariate(self) -> bool:
        return all(m == (0, 0) for p in self.coeffs for m in p)

    def univariate(self) -> list[Fraction]:
        if not self.is_univariate():
            raise SeriesError("series still depends on a marker variable")
        return [p.get((0, 0), Fraction(0)) for p in self.coeffs]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        head = ", ".join(_fmt(p) for p in self.coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"TruncatedSeries([{head}{more}], order={self.order})"

    # -- arithmetic

    def _align(self, other: "TruncatedSeries") -> tuple[int, int | None]:
        return min(self.order, other.order), _min_degree(self.max_degree, other.max_degree)

    def __add__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order, self.max_degree)
        order, deg = self._align(other)
        return TruncatedSeries([_padd(self.coeffs[n], other.coeffs[n]) for n in range(order + 1)], order, deg)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries._raw([_pscale(p, Fraction(-1)) for p in self.coeffs], self.order, self.max_degree)

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        if isinstance(other, Mapping):
            return TruncatedSeries([_pmul(p, _clean(other), self.max_degree) for p in self.coeffs], self.order, self.max_degree)
        s = Fraction(other)
        return TruncatedSeries._raw([_pscale(p, s) for p in self.coeffs], self.order, self.max_degree)

    __rmul__ = __mul__

    def shift(self, power: int) -> "TruncatedSeries":
        """Multiply by ``z**power``."""
        cs = [{} for _ in range(min(power, self.order + 1))] + list(self.coeffs[: self.order + 1 - power])
        return TruncatedSeries._raw(cs, self.order, self.max_degree)

    def truncate(self, order: int) -> "TruncatedSeries":
        order = min(order, self.order)
        return TruncatedSeries._raw(list(self.coeffs[: order + 1]), order, self.max_degree)

    def with_max_degree(self, max_degree: int | None) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, self.order, _min_degree(self.max_degree, max_degree))

    def exp(self) -> "TruncatedSeries":
        return series_exp(self)

    def log(self) -> "TruncatedSeries":
        return series_log(self)

    # -- marker operations

    def marker_coefficient(self, name: str, power: int) -> "TruncatedSeries":
        """``[name**power]`` of every coefficient, as a series in the other marker."""
        idx = _MARKERS[name]
        cs = []
        for p in self.coeffs:
            q: Poly = {}
            for m, c in p.items():
                if m[idx] == power:
                    q[(0, m[1]) if idx == 0 else (m[0], 0)] = c
            cs.append(q)
        return TruncatedSeries._raw(cs, self.order, self.max_degree)

    def marker_derivative(self, name: str) -> "TruncatedSeries":
        idx = _MARKERS[name]
        cs = []
        for p in self.coeffs:
            q: Poly = {}
            for m, c in p.items():
                if m[idx] > 0:
                    key = (m[0] - 1, m[1]) if idx == 0 else (m[0], m[1] - 1)
                    q[key] = c * m[idx]
            cs.append(q)
        return TruncatedSeries._raw(cs, self.order, self.max_degree)

    def substitute(self, name: str, value: Number) -> "TruncatedSeries":
        """Evaluate one marker at an exact value."""
        idx = _MARKERS[name]
        x = Fraction(value)
        cs = []
        for p in self.coeffs:
            q: Poly = {}
            for m, c in p.items():
                key = (0, m[1]) if idx == 0 else (m[0], 0)
                s = q.get(key, 0) + c * x ** m[idx]
                if s:
                    q[key] = s
                else:
                    q.pop(key, None)
            cs.append(q)
        return TruncatedSeries._raw(cs, self.order, self.max_degree)


def _fmt(p: Poly) -> str:
    if not p:
        return "0"
    if list(p) == [(0, 0)]:
        return str(p[(0, 0)])
    terms = []
    for (i, j), c in sorted(p.items()):
        mono = "".join(s for s in (f"u^{i}" if i > 1 else "u" if i else "", f"v^{j}" if j > 1 else "v" if j else "") if s)
        terms.append(f"{c}{'*' + mono if mono else ''}")
    return " + ".join(terms)


def _nonzero(s: TruncatedSeries, start: int = 0) -> list[tuple[int, Poly]]:
    return [(k, p) for k, p in enumerate(s.coeffs) if k >= start and p]


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    order, deg = f._align(g)
    fnz = [(k, p) for k, p in _nonzero(f) if k <= order]
    gnz = [(k, p) for k, p in _nonzero(g) if k <= order]
    cs: list[Poly] = [{} for _ in range(order + 1)]
    for i, a in fnz:
        for j, b in gnz:
            if i + j > order:
                break
            cs[i + j] = _padd(cs[i + j], _pmul(a, b, deg))
    return TruncatedSeries._raw(cs, order, deg)


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    """exp(f) by n*h_n = sum_k k*f_k*h_{n-k}; f must have zero constant term.

    Cost is proportional to the number of nonzero coefficients of f, so
    sparse exponents stay cheap at large order.
    """
    if f.coeffs[0]:
        raise SeriesError("exp requires a zero constant term")
    deg = f.max_degree
    weighted = [(k, _pscale(p, Fraction(k))) for k, p in _nonzero(f, 1)]
    h: list[Poly] = [{(0, 0): Fraction(1)}]
    for n in range(1, f.order + 1):
        acc: Poly = {}
        for k, kp in weighted:
            if k > n:
                break
            if h[n - k]:
                acc = _padd(acc, _pmul(kp, h[n - k], deg))
        h.append(_pscale(acc, Fraction(1, n)))
    return TruncatedSeries._raw(h, f.order, deg)


def series_log(f: TruncatedSeries) -> TruncatedSeries:
    """log(f) by n*g_n = n*f_n - sum_{j<n} (n-j)*g_{n-j}*f_j; needs f_0 = 1."""
    if f.coeffs[0] != {(0, 0): Fraction(1)}:
        raise SeriesError("log requires constant term 1")
    deg = f.max_degree
    fnz = _nonzero(f, 1)
    g: list[Poly] = [{}]
    for n in range(1, f.order + 1):
        acc: Poly = {}
        for j, fj in fnz:
            if j >= n:
                break
            if g[n - j]:
                acc = _padd(acc, _pmul(_pscale(g[n - j], Fraction(n - j)), fj, deg))
        g.append(_padd(f.coeffs[n], _pscale(acc, Fraction(1, n)), -1))
    return TruncatedSeries._raw(g, f.order, deg)
