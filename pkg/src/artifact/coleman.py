"""Coleman integration on a chart curve y^2 = g(x) with good reduction.

Each integrator exposes primitive values J_b(P) for the basis forms
omega_i = x^i dx/2y (i <= d-2) and nu_j = dx/((x - b_j) 2y), normalised
on genus-0 charts by explicit logarithms and on higher-genus charts by
J_b(W0) = 0 at a Weierstrass point.  A decomposed form is then integrated
as F(R) - F(S) + sum c_i (J_i(R) - J_i(S)) + sum d_j (J_nu_j(R) - J_nu_j(S)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from . import _poly
from ._kedlaya import KedlayaResult, kedlaya
from .errors import DivisionByZero, HypothesisViolated, MathPreconditionError, PointOutsideDomain, PrecisionExhausted
from .padic import FieldDescriptor, PadicElement, log_iwasawa, sqrt
from .reduction import Center, CohomologyDecomposition, MeromorphicForm, cohomology_class
from .series import TruncatedSeries, inv_sqrt_binomial, ps_mul


class DifferentResidueDiscs(MathPreconditionError):
    pass


class PoleInDisc(MathPreconditionError):
    pass


class EndpointAtPole(MathPreconditionError):
    pass


class SingularSystem(PrecisionExhausted):
    pass


class EvenDegreeUnhandledAfterTransform(HypothesisViolated):
    pass


@dataclass
class CurvePoint:
    x: PadicElement
    y: PadicElement


def _terms_for(F: FieldDescriptor, vt: int, target: int) -> int:
    """Number of terms n with n*vt - e*log_p(n) >= target for the tail."""
    if vt <= 0:
        raise DifferentResidueDiscs("endpoints are not in one residue disc")
    n = 1
    while n * vt - F.e * math.log(n, F.p) < target + F.e:
        n += 1
    return n + 1


def _integrate_series(coeffs: Sequence[PadicElement], a: PadicElement, b: PadicElement) -> PadicElement:
    """int_a^b sum c_n t^n dt by term-wise antiderivatives."""
    F = a.F
    total = F.zero(10**6)
    pa = a
    pb = b
    for n, c in enumerate(coeffs):
        if not c.is_zero():
            total = total + c * (pb - pa) * Fraction(1, n + 1)
        pa = pa * a
        pb = pb * b
    return total


def _solve(A: list, b: list) -> list:
    """Gaussian elimination over K with pivoting on the valuation."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = min(range(col, n), key=lambda r: M[r][col].valuation() if not M[r][col].is_zero() else 10**9)
        if M[piv][col].is_zero():
            raise SingularSystem("M - I is singular at the working precision")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col:
                f = M[r][col]
                if not f.is_zero():
                    M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


# --- genus 0 -----------------------------------------------------------------------


class Genus0Integrator:
    """Charts with deg g <= 2: explicit primitives by a rational parametrisation."""

    def __init__(self, g: list[PadicElement], centers: Sequence[Center]):
        self.g = g
        self.centers = list(centers)
        self.F = g[0].F
        self.d = len(g) - 1
        if self.d > 2:
            raise HypothesisViolated("genus-0 integrator needs deg g <= 2")
        F = self.F
        self.nonw = [j for j, c in enumerate(self.centers) if not c.weierstrass]
        if self.d == 2:
            A, B = g[2], g[1]
            self.s = sqrt(A)
            self.m0 = -B / (2 * A)
        elif self.d == 1:
            self.s = F.zero(10**6)
            self.m0 = -g[0] / g[1]
        self.w = {}
        for j in self.nonw:
            if self.d:
                self.w[j] = sqrt(_poly.evaluate(g, self.centers[j].beta))

    def labels(self) -> list:
        return ([("omega", 0)] if self.d == 2 else []) + [("nu", j) for j in self.nonw]

    def T(self, P: CurvePoint) -> PadicElement:
        return P.y + self.s * (P.x - self.m0)

    def values(self, P: CurvePoint) -> dict:
        out = {}
        if self.d == 0:
            for j in self.nonw:
                out[("nu", j)] = log_iwasawa(P.x - self.centers[j].beta) / (2 * P.y)
            return out
        T = self.T(P)
        if self.d == 2:
            out[("omega", 0)] = log_iwasawa(T) / (2 * self.s)
        for j in self.nonw:
            beta = self.centers[j].beta
            w = self.w[j]
            base = self.s * (beta - self.m0)
            num, den = T - (base + w), T - (base - w)
            if num.is_zero() or den.is_zero():
                raise EndpointAtPole("endpoint at a pole of nu")
            out[("nu", j)] = (log_iwasawa(num) - log_iwasawa(den)) / (2 * w)
        return out


# --- higher genus -------------------------------------------------------------------


@dataclass
class FrobeniusData:
    """Frobenius structure for the curve translated by shift: X = x - shift."""

    F: FieldDescriptor
    shift: PadicElement
    g_shift: list  # g(X + shift) over K
    ked: KedlayaResult
    M: list  # PadicElement matrix
    prec: int

    @property
    def p(self) -> int:
        return self.ked.p

    def frobenius_point(self, X: PadicElement, y: PadicElement) -> tuple[PadicElement, PadicElement]:
        Xp = X ** self.p
        gp = _poly.evaluate(self.g_shift, Xp)
        y2p = (y * y) ** self.p
        yp = y ** self.p * sqrt(gp / y2p, 1)
        return Xp, yp

    def _scaled_poly_value(self, poly: list, X: PadicElement) -> PadicElement:
        F, k = self.F, self.ked
        mod = k.p ** (k.W + k.S)
        coeffs = []
        for c in poly:
            c %= mod
            if c > mod // 2:
                c -= mod
            coeffs.append(F(Fraction(c, k.p ** k.S), self.prec + F.e * k.S))
        return _poly.evaluate(coeffs, X) if coeffs else F.zero(10**6)

    def f_values(self, X: PadicElement, y: PadicElement, which=None) -> list:
        parts = self.ked.f if which is None else [which]
        yinv = 1 / y
        y2inv = yinv * yinv
        out = []
        for fpoles, fpoly in parts:
            total = self._scaled_poly_value(fpoly, X) * y
            ypow = yinv
            top = max(fpoles, default=0)
            for m in range(1, top + 1):
                if m in fpoles:
                    total = total + self._scaled_poly_value(fpoles[m], X) * ypow
                ypow = ypow * y2inv
            out.append(total.add_bigoh(self.prec))
        return out


def kedlaya_matrix(g: list[PadicElement], prec: int, shift: PadicElement | None = None,
                   with_nu: bool = False) -> FrobeniusData:
    """Frobenius data on y^2 = g(X + shift); prec in uniformiser digits."""
    F = g[0].F
    shift = F.zero(10**6) if shift is None else shift
    gs = _poly.taylor_shift(g, shift) if not shift.is_zero() else list(g)
    ints = []
    for c in gs:
        if not c.in_base_field():
            raise HypothesisViolated("the chart curve must be defined over Q_p")
        fr = c.to_fraction()
        if fr.denominator % F.p == 0:
            raise HypothesisViolated("the chart curve must be integral")
        ints.append(fr)
    W = -(-prec // F.e) + 4
    mod = F.p ** (W + 20)
    gi = [x.numerator * pow(x.denominator, -1, mod) % mod for x in ints]
    gi = [x - mod if x > mod // 2 else x for x in gi]
    if gi[-1] != 1:
        raise HypothesisViolated("the chart curve must be monic")
    ked = kedlaya(gi, F.p, W, with_nu=with_nu)
    P = F.e * (W - 2)
    M = [[F(x, P) for x in row] for row in ked.M]
    return FrobeniusData(F, shift, gs, ked, M, P)


class FrobeniusIntegrator:
    """Charts with odd deg g >= 3, g monic over Z_p."""

    def __init__(self, g: list[PadicElement], centers: Sequence[Center], prec: int):
        self.g = g
        self.centers = list(centers)
        self.F = g[0].F
        self.d = len(g) - 1
        if self.d % 2 == 0:
            raise EvenDegreeUnhandledAfterTransform("even-degree charts of degree >= 4 are not supported")
        self.prec = prec
        self.nonw = [j for j, c in enumerate(self.centers) if not c.weierstrass]
        self.data: dict = {}
        if self.nonw:
            for j in self.nonw:
                self.data[j] = kedlaya_matrix(g, prec, self.centers[j].beta, with_nu=True)
            self.base = self.data[self.nonw[0]]
        else:
            self.base = kedlaya_matrix(g, prec)
        self.roots = self._roots()

    def labels(self) -> list:
        return [("omega", i) for i in range(self.d - 1)] + [("nu", j) for j in self.nonw]

    def _roots(self) -> list:
        out = [c.beta for c in self.centers if c.weierstrass]
        return out

    # -- disc classification ----------------------------------------------------------
    def _weierstrass_root(self, P: CurvePoint) -> PadicElement | None:
        if P.y.is_zero() or P.y.valuation() > 0:
            cands = self.roots + _extra_roots(self)
            for r in cands:
                if (P.x - r).valuation() > 0:
                    return r
            raise PointOutsideDomain("point near a Weierstrass point that is not a supplied root")
        return None

    # -- tiny integrals -----------------------------------------------------------------
    def _inv_y_series(self, gs: list, X0: PadicElement, y0: PadicElement, n: int) -> list:
        """1/y as a power series in t = X - X0 on the disc of (X0, y0)."""
        sh = _poly.taylor_shift(gs, X0)
        g0 = sh[0]
        u = [c / g0 for c in sh] + [self.F.zero(10**6)] * max(0, n - len(sh))
        ser = inv_sqrt_binomial(TruncatedSeries.from_list(self.F, u[:n]))
        inv = 1 / y0
        return [c * inv for c in ser.to_list(0, n)]

    def tiny(self, gs: list, k: int, X0: PadicElement, y0: PadicElement, X1: PadicElement) -> PadicElement:
        """int X^k dX/2y from (X0, y0) to the point over X1 in the same disc."""
        t1 = X1 - X0
        n = _terms_for(self.F, t1.valuation(), self.prec)
        iy = self._inv_y_series(gs, X0, y0, n)
        xk = _poly.taylor_shift([self.F.zero(self.prec + 40)] * k + [self.F.one(self.prec + 40)], X0) if k else [self.F.one(self.prec + 40)]
        integrand = ps_mul(xk + [self.F.zero(10**6)] * n, iy, n)
        zero = self.F.zero(10**6)
        return _integrate_series([c * Fraction(1, 2) for c in integrand], zero, t1)

    def tiny_nu(self, gs: list, X0: PadicElement, y0: PadicElement, X1: PadicElement) -> PadicElement:
        """int dX/(X 2y) on a disc; a log term appears if the disc holds X = 0."""
        F = self.F
        if X0.valuation() > 0 or X1.valuation() > 0:
            if X0.is_zero() or X1.is_zero():
                raise EndpointAtPole("endpoint at a pole of nu")
            yq = sqrt(gs[0], list(y0.residue()))
            n = _terms_for(F, min(X0.valuation(), X1.valuation()), self.prec)
            iy = self._inv_y_series(gs, F.zero(10**6), yq, n + 1)
            # (1/y - 1/yq)/X
            series = [c * Fraction(1, 2) for c in iy[1:]]
            return (log_iwasawa(X1) - log_iwasawa(X0)) / (2 * yq) + _integrate_series(series, X0, X1)
        t1 = X1 - X0
        n = _terms_for(F, t1.valuation(), self.prec)
        iy = self._inv_y_series(gs, X0, y0, n)
        geo = []
        r = -1 / X0
        term = 1 / X0
        for _ in range(n):
            geo.append(term)
            term = term * r
        integrand = ps_mul(geo, iy, n)
        return _integrate_series([c * Fraction(1, 2) for c in integrand], F.zero(10**6), t1)

    # -- primitives ----------------------------------------------------------------------
    def _J_frobenius(self, fd: FrobeniusData, X: PadicElement, y: PadicElement, nu: bool) -> tuple[list, PadicElement | None]:
        Xp, yp = fd.frobenius_point(X, y)
        gs = fd.g_shift
        n = self.d - 1
        rhs = []
        fv = fd.f_values(X, y)
        for i in range(n):
            rhs.append(self.tiny(gs, i, X, y, Xp) - fv[i])
        A = [[fd.M[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        J = _solve(A, rhs)
        Jnu = None
        if nu:
            data = fd.ked.nu
            lam = data["lam"]
            h = fd.f_values(X, y, which=data["h"])[0]
            tot = h - self.tiny_nu(gs, X, y, Xp)
            for i, a in enumerate(data["A"]):
                tot = tot + J[i] * self.F(a, fd.prec)
            Jnu = tot / (1 - lam)
        return J, Jnu

    def _J_weierstrass_disc(self, r: PadicElement, P: CurvePoint) -> dict:
        """Integrals from (r, 0) to P in the parameter y."""
        F = self.F
        sh = _poly.taylor_shift(self.g, r)
        g1 = sh[1]
        if g1.valuation() != 0:
            raise HypothesisViolated("g'(r) must be a unit")
        vy = P.y.valuation() if not P.y.is_zero() else self.prec
        n = _terms_for(F, max(vy, 1), self.prec) + 2
        # x - r = s(Y), Y = y^2, with g(r + s) = Y
        s = [F.zero(10**6), 1 / g1]
        for _ in range(n):
            comp = _compose_poly(sh, s, n)  # g(r + s(Y)) as series in Y
            err = [(-comp[i] if i != 1 else 1 - comp[1]) for i in range(n)]
            err[0] = F.zero(10**6)
            s = [(s[i] if i < len(s) else F.zero(10**6)) + err[i] / g1 for i in range(n)]
        # dx = s'(Y) 2y dy, so x^i dx/2y = (r + s)^i s'(Y) dy  (series in y via Y = y^2)
        ds = [s[i] * i for i in range(1, n)] + [F.zero(10**6)]
        xs = [r + s[0]] + s[1:]
        out = {}
        yv = P.y
        for lab in self.labels():
            if lab[0] == "omega":
                num = [F.one(self.prec + 40)] + [F.zero(10**6)] * (n - 1)
                for _ in range(lab[1]):
                    num = ps_mul(num, xs, n)
            else:
                beta = self.centers[lab[1]].beta
                base = [xs[0] - beta] + xs[1:]
                num = _series_inverse(base, n)
            integrand_Y = ps_mul(num, ds, n)
            # int_0^yv sum a_k y^(2k) dy
            total = F.zero(10**6)
            ypow = yv
            y2 = yv * yv
            for k, a in enumerate(integrand_Y):
                if not a.is_zero():
                    total = total + a * ypow * Fraction(1, 2 * k + 1)
                ypow = ypow * y2
            out[lab] = total
        return out

    def _J_infinity_disc(self, P: CurvePoint) -> dict:
        """Half the integral from wP to P in the parameter t = x^((d-1)/2) sqrt(g/x^d) / y,
        with x = t^-2; every form here is even in t, so this is the odd primitive at t_P."""
        F, d = self.F, self.d
        if not (self.g[-1] - 1).is_zero():
            raise HypothesisViolated("the chart curve must be monic")
        xinv = 1 / P.x
        unit = _poly.evaluate(list(reversed(self.g)), xinv)  # g(x)/x^d
        t = P.x ** ((d - 1) // 2) * sqrt(unit, 1) / P.y
        n = _terms_for(F, t.valuation(), self.prec) + d
        out = {}
        for lab in self.labels():
            if lab[0] == "omega":
                ser, lo = _infinity_expansion(self.g, lab[1], n)
            else:
                ser, lo = _infinity_expansion(self.g, -1, n)
                beta = self.centers[lab[1]].beta
                geo = [F.one(self.prec + 40)]
                for _ in range(2 * n - 1):
                    geo.append(F.zero(self.prec + 40))
                b = F.one(self.prec + 40)
                for k in range(1, n):
                    b = b * beta
                    geo[2 * k] = b
                ser = ps_mul(ser, geo, 2 * n)
            total = F.zero(10**6)
            for k, c in enumerate(ser):
                e = lo + k + 1
                if c.is_zero():
                    continue
                if e == 0:
                    raise MathPreconditionError("form has a residue at infinity")
                total = total + c * t ** e * Fraction(1, e)
            out[lab] = total
        return out

    def values(self, P: CurvePoint) -> dict:
        if not P.x.is_zero() and P.x.valuation() < 0:
            return {k: v.add_bigoh(self.prec) for k, v in self._J_infinity_disc(P).items()}
        r = self._weierstrass_root(P)
        if r is not None:
            return {k: v.add_bigoh(self.prec) for k, v in self._J_weierstrass_disc(r, P).items()}
        out = {}
        fd = self.base
        X = P.x - fd.shift
        J, _ = self._J_frobenius(fd, X, P.y, False)
        beta = fd.shift
        for i in range(self.d - 1):
            tot = self.F.zero(10**6)
            for k in range(i + 1):
                c = comb(i, k)
                tot = tot + J[k] * (c * beta ** (i - k) if i - k else c)
            out[("omega", i)] = tot
        for j in self.nonw:
            fdj = self.data[j]
            _, Jnu = self._J_frobenius(fdj, P.x - fdj.shift, P.y, True)
            out[("nu", j)] = Jnu
        return {k: v.add_bigoh(self.prec) for k, v in out.items()}


def _extra_roots(integ: "FrobeniusIntegrator") -> list:
    return getattr(integ, "direct_roots", [])


def _compose_poly(poly: list, s: list, n: int) -> list:
    """poly(s(Y)) truncated to n terms, s(0) = 0."""
    F = poly[0].F
    out = [F.zero(10**6)] * n
    power = [F.one(max(c.prec for c in poly) + 40)] + [F.zero(10**6)] * (n - 1)
    sl = list(s) + [F.zero(10**6)] * max(0, n - len(s))
    for c in poly:
        out = [a + c * b for a, b in zip(out, power)]
        power = ps_mul(power, sl[:n], n)
    return out


def _series_inverse(a: list, n: int) -> list:
    F = a[0].F
    inv0 = a[0].inverse()
    out = [inv0]
    for k in range(1, n):
        tot = F.zero(10**6)
        for i in range(1, min(k, len(a) - 1) + 1):
            tot = tot + a[i] * out[k - i]
        out.append(-tot * inv0)
    return out


def make_integrator(g: list[PadicElement], centers: Sequence[Center], prec: int, direct_roots: Sequence = ()):
    if len(g) - 1 <= 2:
        return Genus0Integrator(g, centers)
    integ = FrobeniusIntegrator(g, centers, prec)
    integ.direct_roots = list(direct_roots)
    return integ


def integrate_decomposition(integ, decomp: CohomologyDecomposition, S: CurvePoint, R: CurvePoint,
                            JS: dict | None = None, JR: dict | None = None) -> PadicElement:
    centers = integ.centers
    total = decomp.F_value(centers, R.x, R.y) - decomp.F_value(centers, S.x, S.y)
    JS = integ.values(S) if JS is None else JS
    JR = integ.values(R) if JR is None else JR
    for i, c in enumerate(decomp.c):
        if c.is_zero() and c.prec > 10**5:
            continue
        total = total + c * (JR[("omega", i)] - JS[("omega", i)])
    for j, dj in decomp.d.items():
        total = total + dj * (JR[("nu", j)] - JS[("nu", j)])
    return total


# --- single-form entry points ---------------------------------------------------------


def tiny_integral(g: list[PadicElement], i: int, S: CurvePoint, R: CurvePoint, prec: int) -> PadicElement:
    """int_S^R x^i dx/2y for S, R in one residue disc away from Weierstrass points."""
    if (R.x - S.x).valuation() <= 0 or (R.y - S.y).valuation() <= 0:
        raise DifferentResidueDiscs("tiny integrals need a common residue disc")
    if S.y.valuation() > 0:
        raise PoleInDisc("use the Weierstrass disc parameter")
    integ = FrobeniusIntegrator.__new__(FrobeniusIntegrator)
    integ.F, integ.prec, integ.g = S.x.F, prec, g
    return integ.tiny(g, i, S.x, S.y, R.x)


def integrate_second_kind(integ: FrobeniusIntegrator, coeffs: Sequence, S: CurvePoint, R: CurvePoint) -> PadicElement:
    JS, JR = integ.values(S), integ.values(R)
    total = S.x.F.zero(10**6)
    for i, c in enumerate(coeffs):
        if c:
            total = total + (JR[("omega", i)] - JS[("omega", i)]) * c
    return total


def integrate_third_kind(integ, j: int, S: CurvePoint, R: CurvePoint) -> PadicElement:
    return integ.values(R)[("nu", j)] - integ.values(S)[("nu", j)]


def weierstrass_endpoint(integ, label, Wpt: CurvePoint, R: CurvePoint) -> PadicElement:
    """int_{W}^{R} of an odd form = (1/2) int_{w(R)}^{R}."""
    wR = CurvePoint(R.x, -R.y)
    return (integ.values(R)[label] - integ.values(wR)[label]) * Fraction(1, 2)


# --- cup product and Psi ---------------------------------------------------------------


def _infinity_expansion(g: list[PadicElement], i: int, n: int) -> list:
    """x^i dx/2y = sum a_k t^k dt with x = t^-2, y = t^-d * sqrt(g x^-d); returns (lo, coeffs)."""
    F = g[0].F
    d = len(g) - 1
    # g(x)/x^d = sum g_{d-k} t^(2k)
    u = [F.zero(10**6)] * (2 * n)
    for k in range(d + 1):
        if 2 * k < 2 * n:
            u[2 * k] = g[d - k] / g[d]
    inv = inv_sqrt_binomial(TruncatedSeries.from_list(F, u)).to_list(0, 2 * n)
    # x^i dx/2y = t^(-2i) (-2 t^-3) t^d / (2 sqrt(lc)) * inv dt
    return [-c for c in inv], d - 3 - 2 * i


def cup_product(g: list[PadicElement], a: Sequence, b: Sequence, n: int = 30) -> PadicElement:
    """Serre pairing [mu_a] cup [mu_b] = Res_inf(mu_b * int mu_a) for classes in the omega basis
    of an odd-degree monic chart curve."""
    F = g[0].F

    def laurent(coeffs):
        out: dict = {}
        for i, c in enumerate(coeffs):
            if not c:
                continue
            ser, lo = _infinity_expansion(g, i, n)
            for k, x in enumerate(ser):
                out[lo + k] = out.get(lo + k, F.zero(10**6)) + x * c
        return out

    la, lb = laurent(a), laurent(b)
    prim = {}
    for k, x in la.items():
        if k == -1:
            if not x.is_zero():
                raise MathPreconditionError("first class has a residue at infinity")
            continue
        prim[k + 1] = x * Fraction(1, k + 1)
    total = F.zero(10**6)
    for k, x in lb.items():
        for m, y in prim.items():
            if k + m == -1:
                total = total + x * y
    return total


def psi_map(fd: FrobeniusData) -> list:
    """Class Psi(nu) with (phi^* - lam) Psi(nu) = [phi^* nu - lam nu] in the omega basis."""
    data = fd.ked.nu
    if data is None:
        raise HypothesisViolated("Frobenius data has no third-kind part")
    lam = data["lam"]
    F = fd.F
    n = len(fd.M)
    # row vector convention: phi^* acts on coefficient rows by M
    A = [[fd.M[j][i] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return _solve(A, [F(a, fd.prec) for a in data["A"]])
