"""Berkovich-Coleman integrals along edge words, periods and abelian integrals.

A curve y^2 = lead * prod (x - r) is covered by the charts of its covering
tree.  A path is a word in the dual graph; integration along it is the sum
of chart integrals between reference points, and the abelian integral
subtracts the periods weighted by the tropical integrals of the dual forms.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import networkx as nx

from . import _poly
from .coleman import CurvePoint, Genus0Integrator, integrate_decomposition, make_integrator
from .errors import (InvalidPath, MathPreconditionError, MissingReferencePoint, PointNotOnCurve,
                     PointOutsideDomain, PrecisionExhausted)
from .newton_cover import CoveringTree, DualGraph, build_covering, build_dual_graph
from .padic import FieldDescriptor, PadicElement, sqrt
from .reduction import Center, MeromorphicForm, cohomology_class
from .tropgraph import CycleBasis, homology_basis, tropical_integral, validate_walk, walk_to_chain
from .wideopen import WideOpenChart, build_chart, expand_form


class ComponentAmbiguity(MathPreconditionError):
    pass


class PointNotInRegion(PointOutsideDomain):
    pass


class NotClosed(InvalidPath):
    pass


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ARTIFACT_WORKERS", "1")))
    except ValueError:
        return 1


# --- curve and charts -----------------------------------------------------------------


class ChartContext:
    """One chart with its integrator and a cache of primitive values."""

    def __init__(self, chart: WideOpenChart, prec: int):
        self.chart = chart
        self.prec = prec
        self.centers = [Center(h.beta, h.weierstrass) for h in chart.holes]
        self._integ = None
        self._values: dict = {}

    @property
    def integrator(self):
        if self._integ is None:
            self._integ = make_integrator(self.chart.g, self.centers, self.prec, self.chart.direct)
        return self._integ

    def to_chart(self, P: CurvePoint) -> CurvePoint:
        ch = self.chart
        xt = ch.x_to_chart(P.x)
        if not ch.contains(xt):
            raise PointNotInRegion(f"point is outside the chart of {ch.name}")
        return CurvePoint(xt, ch.y_to_chart(xt, P.y))

    def values(self, Q: CurvePoint) -> dict:
        key = (repr(Q.x), repr(Q.y))
        if key not in self._values:
            self._values[key] = self.integrator.values(Q)
        return self._values[key]

    def integrate(self, P: Sequence, S: CurvePoint, R: CurvePoint) -> PadicElement:
        """int_S^R P(x) dx/2y on this chart (original coordinates)."""
        Sc, Rc = self.to_chart(S), self.to_chart(R)
        ex = expand_form(self.chart, P, [Sc.x, Rc.x], self.prec)
        form = MeromorphicForm(ex.principal, ex.polynomial)
        dec = cohomology_class(self.chart.g, self.centers, form)
        return integrate_decomposition(self.integrator, dec, Sc, Rc, self.values(Sc), self.values(Rc))


@dataclass
class Curve:
    F: FieldDescriptor
    roots: list
    lead: PadicElement
    tree: CoveringTree
    graph: DualGraph
    basis: CycleBasis
    prec: int
    contexts: dict = field(default_factory=dict)

    @property
    def genus(self) -> int:
        return (len(self.roots) - 1) // 2

    def f_at(self, x: PadicElement) -> PadicElement:
        out = self.lead
        for r in self.roots:
            out = out * (x - r)
        return out

    def context(self, node: str) -> ChartContext:
        if node not in self.contexts:
            self.contexts[node] = ChartContext(build_chart(self.tree, node, self.lead), self.prec)
        return self.contexts[node]

    def check_point(self, P: CurvePoint) -> None:
        d = P.y * P.y - self.f_at(P.x)
        if not d.is_zero() and d.valuation() < min(P.x.prec, P.y.prec) - 2 * self.F.e:
            raise PointNotOnCurve("y^2 differs from f(x)")

    def node_of(self, name: str) -> str:
        return self.graph.vertex_proj[name]

    def vertex_of(self, P: CurvePoint, node: str | None = None) -> str:
        """Gamma vertex holding P; the first covering node is used when P sits in an annulus."""
        nodes = self.tree.locate(P.x) if node is None else [node]
        if not nodes:
            raise PointNotInRegion("point lies in no covering node")
        n = nodes[0]
        if self.tree.nodes[n].odd:
            return n
        sign = self.context(n).chart.component_sign(self.context(n).chart.point(P.x, P.y))
        return n + ("+" if sign > 0 else "-")


def setup_curve(F: FieldDescriptor, roots: Sequence, lead=1, prec: int | None = None,
                odd_degree: bool | None = None) -> Curve:
    prec = F.N if prec is None else prec
    R = [r if isinstance(r, PadicElement) else F(r, F.N) for r in roots]
    lead_el = lead if isinstance(lead, PadicElement) else F(lead, F.N)
    tree = build_covering(F, R, odd_degree=odd_degree)
    graph = build_dual_graph(tree)
    return Curve(F, R, lead_el, tree, graph, homology_basis(graph), prec)


# --- reference points ---------------------------------------------------------------


@dataclass
class ReferencePoints:
    vertices: dict  # Gamma vertex -> CurvePoint
    edges: dict  # Gamma edge -> CurvePoint


def lift_point(curve: Curve, x: PadicElement, sign_hint=None) -> CurvePoint:
    fx = curve.f_at(x)
    return CurvePoint(x, sqrt(fx, sign_hint))


def _edge_sign(curve: Curve, tree_edge: str, P: CurvePoint) -> int:
    child = curve.tree.edge(tree_edge).child
    ch = curve.context(child).chart
    return ch.component_sign(ch.point(P.x, P.y))


def place_on_edge(curve: Curve, edge: str, x: PadicElement, y: PadicElement | None = None) -> CurvePoint:
    """Point over x on the annulus component of the Gamma edge (y chosen if missing)."""
    te = curve.graph.edge_proj[edge]
    P = lift_point(curve, x) if y is None else CurvePoint(x, y)
    tree_edge = curve.tree.edge(te)
    for node in (tree_edge.parent, tree_edge.child):
        if not curve.context(node).chart.contains(curve.context(node).chart.x_to_chart(x)):
            raise PointNotInRegion(f"x is not in the annulus of {te}")
    if tree_edge.even:
        want = 1 if edge.endswith("+") else -1
        if _edge_sign(curve, te, P) != want:
            if y is not None:
                raise ComponentAmbiguity(f"the given point is not on {edge}")
            P = CurvePoint(P.x, -P.y)
    return P


def place_on_vertex(curve: Curve, vertex: str, x: PadicElement, y: PadicElement | None = None) -> CurvePoint:
    node = curve.node_of(vertex)
    ctx = curve.context(node)
    if not ctx.chart.contains(ctx.chart.x_to_chart(x)):
        raise PointNotInRegion(f"x is not in {node}")
    P = lift_point(curve, x) if y is None else CurvePoint(x, y)
    if not curve.tree.nodes[node].odd:
        want = 1 if vertex.endswith("+") else -1
        if ctx.chart.component_sign(ctx.chart.point(P.x, P.y)) != want:
            if y is not None:
                raise ComponentAmbiguity(f"the given point is not on {vertex}")
            P = CurvePoint(P.x, -P.y)
    return P


def set_reference_points(curve: Curve, vertices: dict | None = None, edges: dict | None = None) -> ReferencePoints:
    """x-coordinates (or (x, y) pairs) per Gamma vertex and edge; missing ones are chosen."""
    vertices = dict(vertices or {})
    edges = dict(edges or {})
    out_v, out_e = {}, {}
    for v in curve.graph.vertices:
        spec = vertices.get(v)
        if spec is None:
            out_v[v] = default_vertex_point(curve, v)
        else:
            x, y = spec if isinstance(spec, tuple) else (spec, None)
            out_v[v] = place_on_vertex(curve, v, x, y)
    for e in curve.graph.edges:
        spec = edges.get(e)
        if spec is None:
            out_e[e] = default_edge_point(curve, e)
        else:
            x, y = spec if isinstance(spec, tuple) else (spec, None)
            out_e[e] = place_on_edge(curve, e, x, y)
    return ReferencePoints(out_v, out_e)


def _candidates(F: FieldDescriptor, shift: int = 0):
    for k in range(1, 3 * F.p):
        n = (k + shift) % (3 * F.p)
        yield F(n - (3 * F.p) // 2, F.N)


def default_vertex_point(curve: Curve, vertex: str, shift: int = 0) -> CurvePoint:
    node = curve.node_of(vertex)
    ch = curve.context(node).chart
    for xt in _candidates(curve.F, shift):
        if not ch.contains(xt) or xt.valuation() < 0:
            continue
        if any((xt - r).valuation() > 0 for r in ch.g_roots):
            continue
        x = ch.chart_to_x(xt)
        try:
            return place_on_vertex(curve, vertex, x)
        except MathPreconditionError:
            continue
    raise MissingReferencePoint(f"no reference point found for {vertex}")


def default_edge_point(curve: Curve, edge: str, shift: int = 0) -> CurvePoint:
    te = curve.tree.edge(curve.graph.edge_proj[edge])
    parent = curve.tree.nodes[te.parent]
    hole = next(h for h in parent.holes if h.child == te.child)
    child = curve.tree.nodes[te.child]
    F = curve.F
    beta = curve.roots[hole.center_root]
    for v in range(child.outer_val + 1, hole.radius_val):
        for u in _candidates(F, shift):
            if u.is_zero() or u.valuation() != 0:
                continue
            x = beta + F.pi_power(v, F.N + v) * u
            try:
                return place_on_edge(curve, edge, x)
            except MathPreconditionError:
                continue
    raise MissingReferencePoint(f"no reference point found for {edge}")


# --- integrals ------------------------------------------------------------------------


@dataclass
class IntegralValue:
    value: PadicElement
    kind: str  # "BC", "abelian" or "period"
    form: list
    path: list
    parts: list = field(default_factory=list)

    @property
    def precision(self) -> int:
        return self.value.prec

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value.to_json(),
            "precision": self.precision,
            "form": [str(c) for c in self.form],
            "path": [[e, d] for e, d in self.path],
            "parts": [{"chart": n, "value": v.to_json()} for n, v in self.parts],
        }


def _form_coeffs(curve: Curve, form) -> list:
    if isinstance(form, int):
        return [0] * form + [1]
    return list(form)


def chart_integral(curve: Curve, node: str, form, S: CurvePoint, R: CurvePoint) -> PadicElement:
    return curve.context(node).integrate(_form_coeffs(curve, form), S, R)


def _legs(curve: Curve, refs: ReferencePoints, walk: Sequence[tuple[str, int]], start_vertex: str):
    """Chart legs (node, from, to) for the reference path along the walk."""
    legs = []
    cur = start_vertex
    for e, d in walk:
        a, b = curve.graph.edges[e]
        src, dst = (a, b) if d > 0 else (b, a)
        if src != cur:
            raise InvalidPath(f"edge {e} does not start at {cur}")
        Pe = refs.edges[e]
        legs.append((curve.node_of(src), refs.vertices[src], Pe))
        legs.append((curve.node_of(dst), Pe, refs.vertices[dst]))
        cur = dst
    return legs, cur


def bc_integral(curve: Curve, refs: ReferencePoints, form, start: CurvePoint, end: CurvePoint,
                walk: Sequence[tuple[str, int]], start_vertex: str | None = None,
                end_vertex: str | None = None) -> IntegralValue:
    walk = [(e, int(d)) for e, d in walk]
    v = start_vertex or (_walk_start(curve, walk) if walk else curve.vertex_of(start))
    legs, w = _legs(curve, refs, walk, v)
    if end_vertex is not None and end_vertex != w:
        raise InvalidPath(f"walk ends at {w}, expected {end_vertex}")
    legs = [(curve.node_of(v), start, refs.vertices[v])] + legs + [(curve.node_of(w), refs.vertices[w], end)]
    return _sum_legs(curve, form, legs, walk, "BC")


def _walk_start(curve: Curve, walk) -> str:
    e, d = walk[0]
    a, b = curve.graph.edges[e]
    return a if d > 0 else b


def _sum_legs(curve: Curve, form, legs, walk, kind) -> IntegralValue:
    P = _form_coeffs(curve, form)
    parts = []
    total = None
    for node, S, R in legs:
        if S is R:
            continue
        val = chart_integral(curve, node, P, S, R)
        parts.append((node, val))
        total = val if total is None else total + val
    if total is None:
        total = curve.F.zero(curve.prec)
    return IntegralValue(total, kind, P, list(walk), parts)


def period(curve: Curve, refs: ReferencePoints, form, walk: Sequence[tuple[str, int]]) -> IntegralValue:
    walk = [(e, int(d)) for e, d in walk]
    if not walk:
        return IntegralValue(curve.F.zero(curve.prec), "period", _form_coeffs(curve, form), [])
    v = _walk_start(curve, walk)
    legs, w = _legs(curve, refs, walk, v)
    if w != v:
        raise NotClosed("the walk is not closed")
    return _sum_legs(curve, form, legs, walk, "period")


def periods(curve: Curve, refs: ReferencePoints, form) -> list[IntegralValue]:
    walks = curve.basis.walks
    n = worker_count()
    if n > 1 and len(walks) > 1:
        for w in walks:  # warm chart caches before threads share them
            for e, _ in w:
                for node in curve.graph.edges[e]:
                    curve.context(curve.node_of(node)).integrator
        with ThreadPoolExecutor(n) as ex:
            return list(ex.map(lambda w: period(curve, refs, form, w), walks))
    return [period(curve, refs, form, w) for w in walks]


def shortest_walk(curve: Curve, v: str, w: str) -> list[tuple[str, int]]:
    G = nx.MultiGraph()
    G.add_nodes_from(curve.graph.vertices)
    for name, (a, b) in curve.graph.edges.items():
        G.add_edge(a, b, key=name)
    nodes = nx.shortest_path(G, v, w)
    walk = []
    for a, b in zip(nodes, nodes[1:]):
        name = sorted(G[a][b])[0]
        walk.append((name, 1 if curve.graph.edges[name][0] == a else -1))
    return walk


def abelian_integral(curve: Curve, refs: ReferencePoints, form, start: CurvePoint, end: CurvePoint,
                     walk: Sequence[tuple[str, int]] | None = None, pers: list | None = None) -> tuple:
    """Returns (abelian value, BC value, periods, tropical integrals)."""
    if walk is None:
        walk = shortest_walk(curve, curve.vertex_of(start), curve.vertex_of(end))
    v = _walk_start(curve, walk) if walk else curve.vertex_of(start)
    bc = bc_integral(curve, refs, form, start, end, walk, start_vertex=v)
    pers = periods(curve, refs, form) if pers is None else pers
    trop = [tropical_integral(eta, walk) for eta in curve.basis.dual_forms]
    val = bc.value
    for per, t in zip(pers, trop):
        if t:
            val = val - per.value * t
    return IntegralValue(val, "abelian", bc.form, list(walk), bc.parts), bc, pers, trop


def homology_difference(curve: Curve, walk1, walk2) -> list[Fraction]:
    """Coefficients n_i with walk1 - walk2 = sum n_i C_i in homology."""
    c = walk_to_chain(walk1)
    for e, d in walk_to_chain(walk2).items():
        c[e] = c.get(e, 0) - d
    return [sum((Fraction(v) * eta(e) for e, v in c.items()), Fraction(0)) for eta in curve.basis.dual_forms]


def chabauty_annihilator(curve: Curve, S: CurvePoint, R: CurvePoint, node: str | None = None) -> dict:
    """For S, R in one chart: a = int omega_0, b = int omega_1 and the form b omega_0 - a omega_1."""
    if node is None:
        common = [n for n in curve.tree.locate(S.x) if n in curve.tree.locate(R.x)]
        if not common:
            raise PointNotInRegion("the two points do not share a chart")
        node = common[0]
    a = chart_integral(curve, node, 0, S, R)
    b = chart_integral(curve, node, 1, S, R)
    return {"a": a, "b": b, "annihilator": (b, -a), "chart": node}


# --- elliptic curve helper ------------------------------------------------------------


def elliptic_add(coeffs: Sequence[Fraction], P, Q):
    """Chord-tangent addition on y^2 = x^3 + a2 x^2 + a4 x + a6 with exact rationals.
    Points are (x, y) tuples or None for the identity."""
    a6, a4, a2 = (Fraction(c) for c in coeffs[:3])
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - a2 - x1 - x2
    y3 = -(y1 + lam * (x3 - x1))
    return (x3, y3)


def elliptic_multiple(coeffs, P, n: int):
    out = None
    for _ in range(n):
        out = elliptic_add(coeffs, out, P)
    return out
