"""Pole reduction on a chart curve y^2 = g(x) with good reduction.

A form is stored as a principal part at each centre b_j (coefficients of
(x - b_j)^(-m) dx/2y) plus a polynomial part (coefficients of x^n dx/2y).
Reduction subtracts exact forms d(y/(x - b)^m) and d(x^m y) until only
c_0..c_{d-2} (on x^i dx/2y) and simple poles at non-Weierstrass centres
remain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import _poly
from .errors import HypothesisViolated, MathPreconditionError
from .padic import PadicElement


class BoundViolated(MathPreconditionError):
    pass


class LocationNotRegularForReference(MathPreconditionError):
    pass


@dataclass
class Center:
    beta: PadicElement
    weierstrass: bool


@dataclass
class MeromorphicForm:
    """sum_j sum_m pp[j][m] (x - b_j)^(-m) dx/2y + sum_n poly[n] x^n dx/2y."""

    principal: list  # list of dicts m -> coefficient
    polynomial: dict  # n -> coefficient

    def copy(self) -> "MeromorphicForm":
        return MeromorphicForm([dict(d) for d in self.principal], dict(self.polynomial))


@dataclass
class PrincipalPart:
    location: int | str  # centre index or "inf"
    coeffs: dict  # order -> coefficient


@dataclass
class CohomologyDecomposition:
    """eta = dF + sum c_i x^i dx/2y + sum d_j dx/((x - b_j) 2y), with
    F = sum_j sum_m q[j][m] y/(x - b_j)^m + sum_m r[m] x^m y."""

    pole_terms: list  # per centre: dict m -> coefficient of y/(x - b_j)^m
    poly_terms: dict  # m -> coefficient of x^m y
    c: list
    d: dict  # centre index -> coefficient of nu_j
    losses: dict = field(default_factory=dict)

    def F_value(self, centers: Sequence[Center], x: PadicElement, y: PadicElement) -> PadicElement:
        total = x.F.zero(10**6)
        for j, terms in enumerate(self.pole_terms):
            if not terms:
                continue
            z = 1 / (x - centers[j].beta)
            for m, q in terms.items():
                total = total + q * z ** m
        for m, r in self.poly_terms.items():
            total = total + r * x ** m
        return total * y


def _shifted(g: list, beta: PadicElement) -> list:
    return _poly.taylor_shift(g, beta)


def principal_part(form: MeromorphicForm, location: int | str, degree: int | None = None) -> PrincipalPart:
    """Principal part at a centre, or at infinity relative to x^(d-1) dx/2y."""
    if location == "inf":
        if degree is None:
            raise LocationNotRegularForReference("the curve degree is needed at infinity")
        return PrincipalPart("inf", {n: a for n, a in form.polynomial.items() if n >= degree - 1})
    return PrincipalPart(location, dict(form.principal[location]))


def _add(d: dict, k: int, v: PadicElement) -> None:
    d[k] = v if k not in d else d[k] + v


def reduce_nonweierstrass(g: list, beta: PadicElement, pp: dict) -> tuple[dict, PadicElement | None, list]:
    """Returns (q, residue, polynomial in x) with
    pp-form = d(sum q_m y/(x-b)^m) + residue dx/((x-b)2y) + poly dx/2y."""
    gam = _shifted(g, beta)
    if gam[0].valuation() != 0:
        raise HypothesisViolated("g(beta) must be a unit at a non-Weierstrass centre")
    work = dict(pp)
    q: dict = {}
    upoly: dict = {}
    top = max(work, default=0)
    for M in range(top, 1, -1):
        a = work.pop(M, None)
        if a is None or a.is_zero():
            continue
        m = M - 1
        coef = a / (gam[0] * (-2 * m))
        q[m] = coef
        for k in range(1, len(gam)):
            e = k - m - 1
            t = coef * gam[k] * (k - 2 * m)
            if e < 0:
                _add(work, -e, -t)
            else:
                _add(upoly, e, -t)
    res = work.get(1)
    return q, res, _u_to_x(upoly, beta)


def reduce_weierstrass(g: list, beta: PadicElement, pp: dict) -> tuple[dict, list]:
    gam = _shifted(g, beta)
    if not gam[0].is_zero() and gam[0].valuation() < gam[0].prec:
        raise HypothesisViolated("beta is not a root of g")
    if gam[1].valuation() != 0:
        raise HypothesisViolated("g'(beta) must be a unit at a Weierstrass centre")
    work = dict(pp)
    q: dict = {}
    upoly: dict = {}
    top = max(work, default=0)
    for M in range(top, 0, -1):
        a = work.pop(M, None)
        if a is None or a.is_zero():
            continue
        m = M
        coef = a / (gam[1] * (1 - 2 * m))
        q[m] = coef
        for k in range(2, len(gam)):
            e = k - m - 1
            t = coef * gam[k] * (k - 2 * m)
            if e < 0:
                _add(work, -e, -t)
            else:
                _add(upoly, e, -t)
    return q, _u_to_x(upoly, beta)


def _u_to_x(upoly: dict, beta: PadicElement) -> list:
    if not upoly:
        return []
    n = max(upoly) + 1
    F = beta.F
    dense = [upoly.get(i, F.zero(10**6)) for i in range(n)]
    return _poly.taylor_shift(dense, -beta)


def reduce_infinity(g: list, poly: dict) -> tuple[dict, list]:
    """Returns (r, c) with poly dx/2y = d(sum r_m x^m y) + sum c_i x^i dx/2y, deg c <= d-2."""
    d = len(g) - 1
    lc = g[-1]
    if lc.valuation() != 0:
        raise HypothesisViolated("leading coefficient of g must be a unit")
    gp = _poly.derivative(g) if d else []
    work = dict(poly)
    r: dict = {}
    top = max(work, default=-1)
    for n in range(top, d - 2, -1):
        a = work.pop(n, None)
        if a is None or a.is_zero():
            continue
        m = n - d + 1
        coef = a / (lc * (d + 2 * m))
        r[m] = coef
        # d(x^m y) = (2m x^(m-1) g + x^m g') dx/2y
        for i, gi in enumerate(g):
            if m and i + m - 1 != n:
                _add(work, i + m - 1, -(coef * gi * (2 * m)))
        for i, gi in enumerate(gp):
            if i + m != n:
                _add(work, i + m, -(coef * gi))
    F = lc.F
    c = [work.get(i, F.zero(10**6)) for i in range(max(d - 1, 0))]
    leftover = [k for k in work if k > d - 2 and not work[k].is_zero()]
    assert not leftover
    return r, c


def _loss_bound(F, M: int, kind: str, d: int = 0) -> float:
    """Digits a reduction of order M may lose (Legendre-type bounds), in pi-digits."""
    if M <= 0:
        return 0.0
    lp = math.ceil(math.log(M, F.p)) if M > 1 else 0
    if kind == "nonweierstrass":
        return F.e * (M / (F.p - 1) + lp + 1)
    if kind == "weierstrass":
        return F.e * (1 + M / (F.p - 1) + lp + 1)
    return F.e * (2 + (M + d) / (F.p - 1) + math.log(max(d * (d + M), 1), F.p) + 1)


def cohomology_class(g: list, centers: Sequence[Center], form: MeromorphicForm,
                     check_bounds: bool = True) -> CohomologyDecomposition:
    """Residues and finite-centre reductions first, then infinity."""
    F = g[0].F
    d = len(g) - 1
    pole_terms: list = []
    dcoef: dict = {}
    poly = dict(form.polynomial)
    losses: dict = {}
    for j, ctr in enumerate(centers):
        pp = form.principal[j] if j < len(form.principal) else {}
        pp = {m: a for m, a in pp.items() if not a.is_zero() or a.prec < 10**5}
        if not pp:
            pole_terms.append({})
            continue
        vin = min(a.valuation() for a in pp.values())
        if ctr.weierstrass:
            q, extra = reduce_weierstrass(g, ctr.beta, pp)
            kind = "weierstrass"
        else:
            q, res, extra = reduce_nonweierstrass(g, ctr.beta, pp)
            if res is not None:
                dcoef[j] = res
            kind = "nonweierstrass"
        for n, a in enumerate(extra):
            _add(poly, n, a)
        pole_terms.append(q)
        M = max(pp)
        if check_bounds and q:
            vout = min(a.valuation() for a in q.values())
            allowed = vin - _loss_bound(F, M, kind)
            losses[j] = vin - vout
            if vout < allowed:
                raise BoundViolated(f"reduction at centre {j} lost {vin - vout} digits")
    vin = min((a.valuation() for a in poly.values()), default=None)
    r, c = reduce_infinity(g, poly)
    if check_bounds and r and vin is not None:
        vout = min(a.valuation() for a in r.values())
        M = max(poly) - d + 1
        losses["inf"] = vin - vout
        if vout < vin - _loss_bound(F, M, "infinity", d):
            raise BoundViolated(f"reduction at infinity lost {vin - vout} digits")
    return CohomologyDecomposition(pole_terms, r, c, dcoef, losses)


# --- exact forms, used as an independent check --------------------------------------


def exact_form(g: list, centers: Sequence[Center], decomp: CohomologyDecomposition) -> MeromorphicForm:
    """dF + sum c_i omega_i + sum d_j nu_j as a MeromorphicForm."""
    out = MeromorphicForm([{} for _ in centers], {})
    d = len(g) - 1
    gp = _poly.derivative(g) if d else []
    for j, terms in enumerate(decomp.pole_terms):
        if not terms:
            continue
        gam = _shifted(g, centers[j].beta)
        upoly: dict = {}
        for m, q in terms.items():
            # d(y u^-m) = sum_k (k - 2m) gam_k u^(k-m-1) dx/2y
            for k, gk in enumerate(gam):
                e = k - m - 1
                t = q * gk * (k - 2 * m)
                if e < 0:
                    _add(out.principal[j], -e, t)
                else:
                    _add(upoly, e, t)
        for n, a in enumerate(_u_to_x(upoly, centers[j].beta)):
            _add(out.polynomial, n, a)
    for m, r in decomp.poly_terms.items():
        for i, gi in enumerate(g):
            if m:
                _add(out.polynomial, i + m - 1, r * gi * (2 * m))
        for i, gi in enumerate(gp):
            _add(out.polynomial, i + m, r * gi)
    for i, ci in enumerate(decomp.c):
        _add(out.polynomial, i, ci)
    for j, dj in decomp.d.items():
        _add(out.principal[j], 1, dj)
    return out


def residual_valuation(a: MeromorphicForm, b: MeromorphicForm) -> int:
    """Least valuation of the coefficients of a - b (precision if they agree)."""
    best = 10**9
    for j in range(max(len(a.principal), len(b.principal))):
        da = a.principal[j] if j < len(a.principal) else {}
        db = b.principal[j] if j < len(b.principal) else {}
        for m in set(da) | set(db):
            x = da.get(m)
            y = db.get(m)
            diff = x - y if x is not None and y is not None else (x if x is not None else -y)
            best = min(best, diff.valuation())
    for n in set(a.polynomial) | set(b.polynomial):
        x = a.polynomial.get(n)
        y = b.polynomial.get(n)
        diff = x - y if x is not None and y is not None else (x if x is not None else -y)
        best = min(best, diff.valuation())
    return best
