"""Truncated Laurent series over K with linear tail bounds.

Omitted coefficients obey ``v(a_n) >= slope * |n| + offset`` on each side,
valuations counted in powers of the uniformiser.  The list helpers at the
bottom are the fast path used by the chart expansions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import MathPreconditionError, PrecisionExhausted
from .padic import FieldDescriptor, PadicElement


class NonUnitConstantTerm(MathPreconditionError):
    pass


class DivergentInput(MathPreconditionError):
    pass


class OutOfConvergenceRegion(MathPreconditionError):
    pass


@dataclass(frozen=True)
class TailBound:
    slope: Fraction
    offset: Fraction

    def at(self, n: int) -> Fraction:
        return self.slope * abs(n) + self.offset

    @staticmethod
    def exact() -> "TailBound":
        return TailBound(Fraction(10**9), Fraction(10**9))


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_{lo <= n <= hi} coeffs[n] t**n, plus an omitted tail on each side."""

    F: FieldDescriptor
    coeffs: dict = field(default_factory=dict)
    var: str = "t"
    pos_tail: TailBound = field(default_factory=TailBound.exact)
    neg_tail: TailBound = field(default_factory=TailBound.exact)

    @property
    def lo(self) -> int:
        return min(self.coeffs, default=0)

    @property
    def hi(self) -> int:
        return max(self.coeffs, default=-1)

    def __getitem__(self, n: int) -> PadicElement:
        return self.coeffs.get(n, self.F.zero(self.F.N))

    @classmethod
    def from_list(cls, F: FieldDescriptor, coeffs: Sequence[PadicElement], start: int = 0,
                  var: str = "t", pos_tail: TailBound | None = None) -> "TruncatedSeries":
        return cls(F, {start + i: c for i, c in enumerate(coeffs)}, var,
                   pos_tail or TailBound.exact(), TailBound.exact())

    def to_list(self, start: int, stop: int) -> list[PadicElement]:
        return [self[n] for n in range(start, stop)]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        keys = set(self.coeffs) | set(other.coeffs)
        return TruncatedSeries(self.F, {n: self[n] + other[n] for n in sorted(keys)}, self.var,
                               _weaker(self.pos_tail, other.pos_tail), _weaker(self.neg_tail, other.neg_tail))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.F, {n: -c for n, c in self.coeffs.items()}, self.var, self.pos_tail, self.neg_tail)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        v = c.valuation() if isinstance(c, PadicElement) else 0
        return TruncatedSeries(self.F, {n: a * c for n, a in self.coeffs.items()}, self.var,
                               TailBound(self.pos_tail.slope, self.pos_tail.offset + v),
                               TailBound(self.neg_tail.slope, self.neg_tail.offset + v))

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t**k."""
        pt, nt = self.pos_tail, self.neg_tail
        return TruncatedSeries(self.F, {n + k: a for n, a in self.coeffs.items()}, self.var,
                               TailBound(pt.slope, pt.offset - abs(pt.slope) * abs(k)),
                               TailBound(nt.slope, nt.offset - abs(nt.slope) * abs(k)))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Product of power series (lo >= 0 on both sides), truncated to the shorter window."""
        if self.lo < 0 or other.lo < 0:
            raise DivergentInput("products are only formed for power series")
        n = min(self.hi, other.hi) + 1
        a, b = self.to_list(0, n), other.to_list(0, n)
        prod = ps_mul(a, b, n)
        tail = _weaker(self.pos_tail, other.pos_tail)
        return TruncatedSeries.from_list(self.F, prod, 0, self.var, tail)

    def derivative(self) -> "TruncatedSeries":
        return TruncatedSeries(self.F, {n - 1: a * n for n, a in self.coeffs.items() if n != 0}, self.var,
                               self.pos_tail, self.neg_tail)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """f(inner) for a power series f and inner with zero constant term."""
        if self.lo < 0:
            raise DivergentInput("composition needs a power series")
        if inner.coeffs and inner.lo < 1 and not inner[0].is_zero():
            raise DivergentInput("inner series must have zero constant term")
        n = self.hi + 1
        inner_list = inner.to_list(0, n)
        result = [self.F.zero(self.F.N) for _ in range(n)]
        power = [self.F.one(self.F.N)] + [self.F.zero(self.F.N) for _ in range(n - 1)]
        for k in range(n):
            ak = self[k]
            if not ak.is_zero():
                for i in range(n):
                    result[i] = result[i] + ak * power[i]
            power = ps_mul(power, inner_list, n)
        return TruncatedSeries.from_list(self.F, result, 0, self.var, self.pos_tail)

    def evaluate_at(self, t: PadicElement) -> PadicElement:
        """Value at t with the omitted tails folded into the returned precision."""
        tau = t.valuation()
        pt, nt = self.pos_tail, self.neg_tail
        bound = None
        if pt.offset < 10**8:
            if pt.slope + tau <= 0:
                raise OutOfConvergenceRegion("point outside the positive convergence window")
            m = max(self.hi + 1, 0)
            bound = (pt.slope + tau) * m + pt.offset
        if nt.offset < 10**8 and self.lo < 0:
            if nt.slope - tau <= 0:
                raise OutOfConvergenceRegion("point outside the negative convergence window")
            m = 1 - self.lo
            nb = (nt.slope - tau) * m + nt.offset
            bound = nb if bound is None else min(bound, nb)
        total = horner_laurent(self.coeffs, t)
        if bound is not None:
            total = total.add_bigoh(math.floor(bound))
        return total


def _weaker(a: TailBound, b: TailBound) -> TailBound:
    return TailBound(min(a.slope, b.slope), min(a.offset, b.offset))


def horner_laurent(coeffs: dict, t: PadicElement) -> PadicElement:
    F = t.F
    if not coeffs:
        return F.zero(t.prec)
    lo, hi = min(coeffs), max(coeffs)
    zero = F.zero(10**6)
    total = None
    if hi >= 0:
        total = zero
        for n in range(hi, -1, -1):
            total = total * t + coeffs.get(n, zero) if n != hi else coeffs.get(n, zero)
    if lo < 0:
        s = 1 / t
        neg = None
        for n in range(lo, 0):
            c = coeffs.get(n, zero)
            neg = c if neg is None else neg * s + c
        neg = neg * s
        total = neg if total is None else total + neg
    return total


def inv_sqrt_binomial(u: TruncatedSeries) -> TruncatedSeries:
    """s with s**2 * u = 1 and constant term 1, by s <- s*(3 - u*s**2)/2."""
    F = u.F
    if u.lo < 0:
        raise DivergentInput("power series expected")
    c0 = u[0]
    if not (c0 - 1).is_zero() and (c0 - 1).valuation() < c0.prec:
        raise NonUnitConstantTerm("constant term must be 1")
    n = u.hi + 1
    ulist = u.to_list(0, n)
    s = [F.one(c0.prec)] + [F.zero(c0.prec) for _ in range(n - 1)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        s2 = ps_mul(s, s, k)
        us2 = ps_mul(ulist, s2, k)
        corr = [(-x) for x in us2]
        corr[0] = corr[0] + 3
        s = [x * Fraction(1, 2) for x in ps_mul(s[:k], corr, k)] + s[k:]
    return TruncatedSeries.from_list(F, s[:n], 0, u.var, u.pos_tail)


def antidifferentiate_annulus(omega: TruncatedSeries) -> tuple[TruncatedSeries, PadicElement]:
    """Primitive of sum a_n t**n dt: (sum_{n != -1} a_n t**(n+1)/(n+1), a_{-1})."""
    F = omega.F
    out = {n + 1: a * Fraction(1, n + 1) for n, a in omega.coeffs.items() if n != -1}
    c_log = omega.coeffs.get(-1, F.zero(F.N))
    return TruncatedSeries(F, out, omega.var, _divided_tail(F, omega.pos_tail),
                           _divided_tail(F, omega.neg_tail)), c_log


def _divided_tail(F: FieldDescriptor, tb: TailBound) -> TailBound:
    # e*v_p(m) <= e*log_p(m) <= e*m/(p-1) + e*C with C = max_m(log_p m - m/(p-1))
    if tb.offset >= 10**8:
        return tb
    eps = Fraction(F.e, F.p - 1)
    m0 = (F.p - 1) / math.log(F.p)
    C = max(0.0, math.log(m0, F.p) - m0 / (F.p - 1))
    return TailBound(tb.slope - eps, tb.offset - eps - Fraction(math.ceil(F.e * C * 1000 + 1), 1000))


# --- list helpers -------------------------------------------------------------


def ps_mul(a: Sequence[PadicElement], b: Sequence[PadicElement], n: int) -> list[PadicElement]:
    """Truncated product of coefficient lists, keeping degrees < n."""
    out: list = [None] * n
    la, lb = len(a), len(b)
    nz_b = [(j, y) for j, y in enumerate(b[:n]) if not y.is_zero()]
    for i in range(min(la, n)):
        x = a[i]
        if x.is_zero():
            continue
        for j, y in nz_b:
            if i + j >= n:
                break
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    prec = min([c.prec for c in list(a[:n]) + list(b[:n])] or [10**6])
    zero = a[0].F.zero(prec) if la else b[0].F.zero(prec)
    for k in range(n):
        if out[k] is None:
            out[k] = zero
    return out


def binomial_coefficients(r: Fraction, n: int) -> list[Fraction]:
    """binom(r, k) for k < n."""
    out = [Fraction(1)]
    for k in range(1, n):
        out.append(out[-1] * (r - k + 1) / k)
    return out


def binomial_series(F: FieldDescriptor, r: Fraction, c: PadicElement, n: int) -> list[PadicElement]:
    """Coefficients of (1 + c z)**r up to degree n-1."""
    bins = binomial_coefficients(Fraction(r), n)
    out = []
    power = F.one(c.prec + abs(c.valuation()) * n + 1)
    for k in range(n):
        out.append(power * bins[k] if bins[k] else F.zero(power.prec))
        power = power * c
    return out


def check_precision(x: PadicElement, target: int, what: str) -> PadicElement:
    if x.prec < target:
        raise PrecisionExhausted(f"{what}: certified precision {x.prec} below target {target}")
    return x
