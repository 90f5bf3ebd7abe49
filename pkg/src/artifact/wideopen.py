"""Charts on the preimages of covering nodes.

For a node U with anchor c and scale rho put x~ = (x - c)/rho.  Then

    f = s^2 * g(x~) * h(x~)^2 * k(x~)

with g the good-reduction part (direct roots of U and one root per odd
cluster), h = prod (x~ - b_j)^{L_j} over the holes, and k a product of
1-units on U.  On the chart y~ = y/(s*ell) with ell = h*sqrt(k) (principal
branch of each 1-unit factor), so y~^2 = g.

A holomorphic form P(x) dx/2y becomes G(x~) dx~/2y~ with
G = rho*P(c + rho*x~)/(s*ell), and ``expand_form`` splits G into principal
parts at the hole centres plus a part regular away from infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _poly
from .errors import HypothesisViolated, MathPreconditionError, NonSquareResidue, PointOutsideDomain, PrecisionExhausted
from .newton_cover import CoverNode, CoveringTree
from .padic import FieldDescriptor, PadicElement, is_square, sqrt
from .series import binomial_series, ps_mul


class RamificationTooLarge(HypothesisViolated):
    pass


class TargetPrecisionUnreachable(PrecisionExhausted):
    pass


class SquareRootBranchUndetermined(MathPreconditionError):
    pass


@dataclass
class ChartHole:
    beta: PadicElement  # centre in chart coordinates
    deltas: list  # cluster roots minus the centre, chart coordinates
    L: int
    weierstrass: bool
    lam: int  # the hole is v(x~ - beta) >= lam
    child: str
    center_root: int


@dataclass
class ChartPoint:
    x: PadicElement  # chart coordinate
    y: PadicElement  # y~
    X: PadicElement | None = None  # original coordinates
    Y: PadicElement | None = None


@dataclass
class WideOpenChart:
    tree: CoveringTree
    node: CoverNode
    c: PadicElement
    rho: PadicElement
    direct: list
    holes: list
    outer: list
    Lam: int | None  # region is v(x~) > -Lam; None when infinity is inside
    s: PadicElement
    g: list  # coefficients of g in x~
    lead: PadicElement  # leading coefficient of f

    @property
    def F(self) -> FieldDescriptor:
        return self.c.F

    @property
    def name(self) -> str:
        return self.node.name

    @property
    def degree(self) -> int:
        return len(self.g) - 1

    @property
    def genus(self) -> int:
        return max((self.degree - 1) // 2, 0)

    @property
    def components(self) -> int:
        return 2 if self.degree == 0 else 1

    @property
    def g_roots(self) -> list:
        return list(self.direct) + [h.beta for h in self.holes if h.weierstrass]

    @property
    def nonweierstrass(self) -> list[int]:
        return [j for j, h in enumerate(self.holes) if not h.weierstrass]

    # -- coordinates -------------------------------------------------------------
    def x_to_chart(self, x: PadicElement) -> PadicElement:
        return (x - self.c) / self.rho

    def chart_to_x(self, xt: PadicElement) -> PadicElement:
        return self.c + self.rho * xt

    def contains(self, xt: PadicElement) -> bool:
        if self.Lam is not None and not xt.is_zero() and xt.valuation() <= -self.Lam:
            return False
        for h in self.holes:
            d = xt - h.beta
            if d.is_zero() or d.valuation() >= h.lam:
                return False
        return True

    def ell(self, xt: PadicElement) -> PadicElement:
        """h(x~) times the principal square root of k(x~)."""
        if not self.contains(xt):
            raise PointOutsideDomain(f"x~ = {xt} is outside the chart of {self.name}")
        val = None
        unit = None
        for h in self.holes:
            d = xt - h.beta
            if h.L:
                val = d ** h.L if val is None else val * d ** h.L
            for delta in h.deltas:
                t = 1 - delta / d
                unit = t if unit is None else unit * t
        for a in self.outer:
            t = 1 - xt / a
            unit = t if unit is None else unit * t
        out = self.F.one(xt.prec + 10) if val is None else val
        if unit is not None:
            out = out * sqrt(unit, 1)
        return out

    def y_to_chart(self, xt: PadicElement, y: PadicElement) -> PadicElement:
        return y / (self.s * self.ell(xt))

    def point(self, X: PadicElement, Y: PadicElement) -> ChartPoint:
        xt = self.x_to_chart(X)
        return ChartPoint(xt, self.y_to_chart(xt, Y), X, Y)

    def g_at(self, xt: PadicElement) -> PadicElement:
        return _poly.evaluate(self.g, xt)

    def component_sign(self, pt: ChartPoint) -> int:
        """+1/-1 for the two sheets over the outer annulus (and over an even node),
        read off from y~ / (x~^{d/2} * sqrt(g/x~^d)); d must be even."""
        d = self.degree
        if d % 2:
            raise MathPreconditionError("odd charts have a single component")
        t = pt.y
        if d:
            unit = None
            for r in self.g_roots:
                u = 1 - r / pt.x
                unit = u if unit is None else unit * u
            t = t / (pt.x ** (d // 2) * sqrt(unit, 1))
        res = t.residue()
        if res[0] == 1 and not any(res[1:]):
            return 1
        if res[0] == self.F.p - 1 and not any(res[1:]):
            return -1
        raise SquareRootBranchUndetermined("point does not sit on a +-1 sheet")

    def outer_region_contains(self, xt: PadicElement) -> bool:
        """Whether x~ lies in the annulus shared with the parent node."""
        return self.Lam is not None and self.contains(xt) and (xt.is_zero() is False and xt.valuation() < 0)

    def to_json(self) -> dict:
        return {
            "node": self.name,
            "center": self.c.to_json(),
            "scale_valuation": self.rho.valuation(),
            "g": [a.to_json() for a in self.g],
            "s": self.s.to_json(),
            "holes": [
                {"center": h.beta.to_json(), "L": h.L, "weierstrass": h.weierstrass,
                 "radius_valuation": h.lam, "child": h.child}
                for h in self.holes
            ],
            "outer_radius_valuation": None if self.Lam is None else -self.Lam,
            "components": self.components,
        }


def build_chart(tree: CoveringTree, name: str, lead=1) -> WideOpenChart:
    F = tree.F
    node = tree.node(name)
    roots = tree.roots
    c = roots[node.anchor_root]
    rho = F.pi_power(node.scale_val, F.N + node.scale_val + 5)
    prec = max(r.prec for r in roots)

    def chart(x):
        return (x - c) / rho

    direct = [chart(roots[i]) for i in node.roots]
    holes = []
    for h in node.holes:
        beta = chart(roots[h.center_root])
        deltas = [chart(roots[i]) - beta for i in h.roots if i != h.center_root]
        n = len(h.roots)
        holes.append(ChartHole(beta, deltas, n // 2, n % 2 == 1, h.radius_val - node.scale_val, h.child,
                               h.center_root))
    outer = [chart(roots[i]) for i in node.outer_roots]
    Lam = None if node.outer_val is None else node.scale_val - node.outer_val

    lead_el = F(lead, prec) if not isinstance(lead, PadicElement) else lead
    C = lead_el * rho ** len(roots)
    for a in outer:
        C = C * (-a)
    vC = C.valuation()
    if vC % 2:
        raise HypothesisViolated(f"the chart constant of {name} has odd valuation; a ramified extension is needed")
    s = F.pi_power(vC // 2, C.prec)
    u = C / (s * s)
    gl = u
    if is_square(u):
        s = s * sqrt(u)
        gl = F.one(u.prec)
    g_roots = direct + [h.beta for h in holes if h.weierstrass]
    g = _poly.from_roots(F, g_roots, gl) if g_roots else [gl]
    ch = WideOpenChart(tree, node, c, rho, direct, holes, outer, Lam, s, g, lead_el)
    _check_good(ch)
    return ch


def _check_good(ch: WideOpenChart) -> None:
    pts = ch.g_roots + [h.beta for h in ch.holes if not h.weierstrass]
    for i, a in enumerate(pts):
        if a.valuation() < 0:
            raise HypothesisViolated("chart centre outside the closed unit disc")
        for b in pts[:i]:
            if (a - b).valuation() > 0:
                raise HypothesisViolated("two chart centres share a residue disc")


# --- expansions -------------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryTerm:
    """coeff * (x~ - beta_center)^(-n) dx~/2y~, or coeff * x~^n dx~/2y~ at infinity."""

    center: int | str  # hole index or "inf"
    n: int
    coeff: PadicElement


@dataclass
class FormExpansion:
    chart: WideOpenChart
    principal: list  # per hole: dict m -> coefficient of (x~ - beta)^(-m)
    polynomial: dict  # n -> coefficient of x~^n
    tail_val: int  # certified valuation of the omitted part on the evaluation points

    def terms(self) -> list[ElementaryTerm]:
        out = []
        for j, pp in enumerate(self.principal):
            out.extend(ElementaryTerm(j, m, a) for m, a in sorted(pp.items()))
        out.extend(ElementaryTerm("inf", n, a) for n, a in sorted(self.polynomial.items()))
        return out

    def evaluate(self, xt: PadicElement) -> PadicElement:
        """Sum of the kept terms at x~ (the coefficient of dx~/2y~)."""
        F = self.chart.F
        total = F.zero(10**6)
        for j, pp in enumerate(self.chart.holes):
            z = 1 / (xt - pp.beta)
            for m, a in self.principal[j].items():
                total = total + a * z ** m
        for n, a in self.polynomial.items():
            total = total + a * xt ** n
        return total


def form_numerator(ch: WideOpenChart, P: Sequence) -> list:
    """Q(x~) = rho * P(c + rho x~) / s for P given by coefficients in x."""
    F = ch.F
    Pp = [a if isinstance(a, PadicElement) else F(a, F.N + 10) for a in P]
    Q = _poly.affine_compose(Pp, ch.c, ch.rho)
    return _poly.scale(Q, ch.rho / ch.s)


def direct_value(ch: WideOpenChart, P: Sequence, xt: PadicElement) -> PadicElement:
    """G(x~) evaluated without any expansion."""
    Q = form_numerator(ch, P)
    return _poly.evaluate(Q, xt) / ch.ell(xt)


def _loss(F: FieldDescriptor, m: int) -> float:
    # digits lost by reducing a pole (or degree) of order m, see reduction
    return F.e * (m / (F.p - 1) + math.log(max(m, 1), F.p) + 3)


def _order_needed(F: FieldDescriptor, slope: float, offset: float, target: int, cap: int = 4000) -> int:
    """Least M with slope*m + offset - loss(m) >= target for every m > M."""
    if slope - F.e / (F.p - 1) <= 0:
        raise RamificationTooLarge("series terms do not decay fast enough")
    m = 1
    while m < cap:
        if all(slope * k + offset - _loss(F, k) >= target for k in range(m + 1, m + 6)):
            return m
        m += 1
    raise TargetPrecisionUnreachable("too many series terms required")


def expand_form(ch: WideOpenChart, P: Sequence, points: Sequence[PadicElement], target: int) -> FormExpansion:
    """Principal parts and polynomial part of P(x) dx/2y on the chart, kept to
    the order that certifies ``target`` digits at the given chart points."""
    F = ch.F
    if F.e >= F.p - 1:
        raise RamificationTooLarge("e < p - 1 is required")
    Q = _poly.trim(form_numerator(ch, P))
    for pt in points:
        if not ch.contains(pt):
            raise PointOutsideDomain(f"evaluation point {pt} is outside {ch.name}")
    holes = ch.holes
    principal = []
    tails = []
    for j, h in enumerate(holes):
        mu = max([0] + [(pt - h.beta).valuation() for pt in points])
        if mu >= h.lam:
            raise PointOutsideDomain("evaluation point inside a deleted disc")
        Qs = _poly.taylor_shift(Q, h.beta)
        cQ = min(a.valuation() for a in Qs)
        offset = -h.lam * h.L + cQ
        M = max(_order_needed(F, h.lam - mu, offset, target), h.L + 1)
        n = M + 1
        A = _A_hole(F, h, n)
        B = _B_hole(ch, j, Qs, n)
        pp = {}
        for m in range(1, M + 1):
            tot = None
            for k in range(0, M + 1 - m):
                t = A[m + k] * B[k]
                tot = t if tot is None else tot + t
            pp[m] = tot
        principal.append(pp)
        tails.append((h.lam - mu) * (M + 1) + offset - _loss(F, M + 1))
    if ch.Lam is None:
        poly = _polynomial_part_top(ch, Q)
    else:
        nu = max([0] + [-pt.valuation() for pt in points if not pt.is_zero()])
        if nu >= ch.Lam:
            raise PointOutsideDomain("evaluation point outside the outer radius")
        poly, tail = _polynomial_part_inner(ch, Q, nu, target)
        tails.append(tail)
    tail_val = math.floor(min(tails)) if tails else 10**6
    return FormExpansion(ch, principal, poly, tail_val)


def _A_hole(F: FieldDescriptor, h: ChartHole, n: int) -> list:
    """z^L * prod (1 - delta z)^(-1/2) as a list of n coefficients."""
    prec = F.N + 10
    acc = [F.one(prec)] + [F.zero(prec) for _ in range(n - 1)]
    for d in h.deltas:
        acc = ps_mul(acc, binomial_series(F, Fraction(-1, 2), -d, n), n)
    return [F.zero(prec) for _ in range(h.L)] + acc[: max(n - h.L, 0)]


def _B_hole(ch: WideOpenChart, j: int, Qs: list, n: int) -> list:
    """Everything in G except the factor attached to hole j, expanded in u = x~ - beta_j."""
    F = ch.F
    prec = F.N + 10
    hj = ch.holes[j]
    acc = list(Qs[:n]) + [F.zero(prec) for _ in range(n - len(Qs))]
    const = F.one(prec)
    for a in ch.outer:
        D = a - hj.beta
        const = const * sqrt(1 - hj.beta / a, 1).inverse()
        acc = ps_mul(acc, binomial_series(F, Fraction(-1, 2), -1 / D, n), n)
    for l, hl in enumerate(ch.holes):
        if l == j:
            continue
        djl = hj.beta - hl.beta
        r = Fraction(len(hl.deltas), 2) - hl.L
        const = const * djl ** (-hl.L)
        acc = ps_mul(acc, binomial_series(F, r, 1 / djl, n), n)
        for d in hl.deltas:
            kappa = 1 - d / djl
            const = const * sqrt(kappa, 1).inverse()
            acc = ps_mul(acc, binomial_series(F, Fraction(-1, 2), 1 / (djl - d), n), n)
    return [a * const for a in acc]


def _S_infinity(ch: WideOpenChart, n: int) -> list:
    """prod over holes of (1 - b w)^(|I|/2 - L) * prod (1 - (b + delta) w)^(-1/2), w = 1/x~."""
    F = ch.F
    prec = F.N + 10
    acc = [F.one(prec)] + [F.zero(prec) for _ in range(n - 1)]
    for h in ch.holes:
        r = Fraction(len(h.deltas), 2) - h.L
        acc = ps_mul(acc, binomial_series(F, r, -h.beta, n), n)
        for d in h.deltas:
            acc = ps_mul(acc, binomial_series(F, Fraction(-1, 2), -(h.beta + d), n), n)
    return acc


def _polynomial_part_top(ch: WideOpenChart, Q: list) -> dict:
    sumL = sum(h.L for h in ch.holes)
    top = len(Q) - 1 - sumL
    if top < 0:
        return {}
    S = _S_infinity(ch, top + 1)
    out = {}
    for n in range(top + 1):
        tot = None
        for t in range(len(Q)):
            k = t - sumL - n
            if 0 <= k <= top:
                term = Q[t] * S[k]
                tot = term if tot is None else tot + term
        if tot is not None:
            out[n] = tot
    return out


def _polynomial_part_inner(ch: WideOpenChart, Q: list, nu: int, target: int) -> tuple[dict, float]:
    F = ch.F
    prec = F.N + 10
    Lam = ch.Lam
    sumL = sum(h.L for h in ch.holes)
    cQ = min(a.valuation() for a in Q)
    dQ = len(Q) - 1
    # v(H_n) >= Lam*(n - dQ) + cQ
    offset = cQ - Lam * dQ
    Ninf = _order_needed(F, Lam - nu, offset + Lam * sumL, target)
    K = max(0, _order_needed(F, Lam, offset + Lam * sumL, target) - sumL)
    total = Ninf + sumL + K + 2
    H = list(Q) + [F.zero(prec) for _ in range(total - len(Q))]
    for a in ch.outer:
        H = ps_mul(H, binomial_series(F, Fraction(-1, 2), -1 / a, total), total)
    S = _S_infinity(ch, K + 1)
    out = {}
    for n in range(Ninf + 1):
        tot = None
        for k in range(K + 1):
            idx = n + sumL + k
            if idx < total:
                t = H[idx] * S[k]
                tot = t if tot is None else tot + t
        out[n] = tot
    tail = min((Lam - nu) * (Ninf + 1) + offset + Lam * sumL - _loss(F, Ninf + 1),
               Lam * (K + 1 + sumL) + offset)
    return out, tail
