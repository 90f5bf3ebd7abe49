"""Dense univariate polynomials over K as little-endian lists of PadicElement."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Sequence

from .padic import FieldDescriptor, PadicElement

Poly = list  # list[PadicElement]


def trim(a: Poly) -> Poly:
    a = list(a)
    while len(a) > 1 and a[-1].is_zero():
        a.pop()
    return a


def const(F: FieldDescriptor, c, prec: int | None = None) -> Poly:
    return [F(c, prec) if not isinstance(c, PadicElement) else c]


def add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        else:
            out.append(a[i] if i < len(a) else b[i])
    return out


def neg(a: Poly) -> Poly:
    return [-x for x in a]


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, neg(b))


def scale(a: Poly, c) -> Poly:
    return [x * c for x in a]


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out: list = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return out


def from_roots(F: FieldDescriptor, roots: Sequence[PadicElement], lead: PadicElement | None = None) -> Poly:
    prec = min([r.prec for r in roots] or [F.N])
    out = [F.one(prec + 10)] if lead is None else [lead]
    for r in roots:
        out = mul(out, [-r, F.one(prec + 10)])
    return out


def evaluate(a: Poly, x: PadicElement) -> PadicElement:
    if not a:
        return x.F.zero(x.prec)
    total = a[-1]
    for c in reversed(a[:-1]):
        total = total * x + c
    return total


def derivative(a: Poly) -> Poly:
    if len(a) <= 1:
        return [a[0].F.zero(a[0].prec)] if a else []
    return [a[i] * i for i in range(1, len(a))]


def taylor_shift(a: Poly, b: PadicElement) -> Poly:
    """Coefficients of a(b + u) in u."""
    n = len(a)
    out = []
    for k in range(n):
        total = None
        bp = None
        for m in range(k, n):
            term = a[m] * comb(m, k)
            if m > k:
                bp = b if bp is None else bp * b
                term = term * bp
            total = term if total is None else total + term
        out.append(total)
    return out


def affine_compose(a: Poly, c: PadicElement, rho: PadicElement) -> Poly:
    """Coefficients of a(c + rho*u) in u."""
    shifted = taylor_shift(a, c)
    out = []
    power = None
    for k, x in enumerate(shifted):
        if k:
            power = rho if power is None else power * rho
            out.append(x * power)
        else:
            out.append(x)
    return out


def divmod_linear(a: Poly, r: PadicElement) -> tuple[Poly, PadicElement]:
    """Synthetic division by (u - r)."""
    n = len(a)
    q = [None] * (n - 1)
    acc = a[-1]
    for i in range(n - 2, -1, -1):
        q[i] = acc
        acc = a[i] + acc * r
    return q, acc


def to_rational_list(a: Poly) -> list[Fraction]:
    return [x.to_fraction() for x in a]
