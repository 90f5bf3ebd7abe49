"""Newton polygons, the recursive good semistable covering of P^1 with respect
to the roots of f, parity labels, and the double-cover dual graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _poly
from .errors import RepeatedRoots, RootsNotInField, SchemaError
from .padic import FieldDescriptor, PadicElement


class IndeterminateCoefficient(SchemaError):
    pass


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[tuple[Fraction, int], ...]

    def root_valuations(self) -> list[Fraction]:
        out = []
        for s, mult in self.slopes:
            out.extend([-s] * mult)
        return sorted(out)


def newton_polygon(coeffs: Sequence[PadicElement]) -> NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)); valuations normalised by v_p(p) = 1."""
    pts = []
    for i, a in enumerate(coeffs):
        if a.is_zero():
            continue
        pts.append((i, Fraction(a.valuation(), a.F.e)))
    if not pts:
        raise IndeterminateCoefficient("zero polynomial")
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(hull), tuple(slopes))


@dataclass
class Hole:
    """Deleted closed disc {v(x - center) >= radius_val} holding a cluster of roots."""

    center_root: int
    radius_val: int
    roots: list[int]
    child: str


@dataclass
class CoverNode:
    """Rational basic wide open.  Valuations are in powers of the uniformiser.

    The node is {v(x - anchor) > outer_val} minus its holes, where
    ``outer_val`` is None for the node containing infinity.  ``scale_val`` is
    the valuation of the chart scaling: roots of U and hole centres become
    distinct residues after x -> (x - anchor)/rho with v(rho) = scale_val.
    """

    name: str
    parent: str | None
    anchor_root: int
    scale_val: int
    outer_val: int | None
    roots: list[int]
    holes: list[Hole] = field(default_factory=list)
    outer_roots: list[int] = field(default_factory=list)
    contains_infinity: bool = False
    genus: int = 0
    odd: bool = True
    half_edges: list[str] = field(default_factory=list)


@dataclass
class TreeEdge:
    name: str
    parent: str
    child: str
    roots_inside: list[int]
    even: bool


@dataclass
class CoveringTree:
    F: FieldDescriptor
    roots: list[PadicElement]
    odd_degree: bool
    nodes: dict[str, CoverNode]
    edges: list[TreeEdge]
    root_node: str

    def node(self, name: str) -> CoverNode:
        return self.nodes[name]

    def edge(self, name: str) -> TreeEdge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def edge_between(self, a: str, b: str) -> TreeEdge:
        for e in self.edges:
            if {e.parent, e.child} == {a, b}:
                return e
        raise KeyError((a, b))

    @property
    def curve_genus(self) -> int:
        n = len(self.roots)
        return (n - 1) // 2

    def locate(self, x: PadicElement) -> list[str]:
        """Names of the nodes whose region contains the point with x-coordinate x."""
        out = []
        for node in self.nodes.values():
            if self.contains(node, x):
                out.append(node.name)
        return out

    def contains(self, node: CoverNode, x: PadicElement | None) -> bool:
        if x is None:
            return node.contains_infinity
        anchor = self.roots[node.anchor_root]
        d = x - anchor
        if node.outer_val is not None:
            if not d.is_zero() and d.valuation() <= node.outer_val:
                return False
        for h in node.holes:
            dh = x - self.roots[h.center_root]
            if dh.is_zero() or dh.valuation() >= h.radius_val:
                return False
        return True

    def to_json(self) -> dict:
        def rad(v):
            return None if v is None else str(Fraction(-v, self.F.e))

        return {
            "root_node": self.root_node,
            "odd_degree": self.odd_degree,
            "nodes": [
                {
                    "name": n.name,
                    "parent": n.parent,
                    "anchor_root": n.anchor_root,
                    "log_p_scale": rad(n.scale_val),
                    "log_p_outer_radius": rad(n.outer_val),
                    "contains_infinity": n.contains_infinity,
                    "roots": n.roots,
                    "holes": [
                        {"center_root": h.center_root, "log_p_radius": rad(h.radius_val),
                         "roots": h.roots, "child": h.child}
                        for h in n.holes
                    ],
                    "half_edges": n.half_edges,
                    "genus": n.genus,
                    "parity": "odd" if n.odd else "even",
                }
                for n in self.nodes.values()
            ],
            "edges": [
                {"name": e.name, "parent": e.parent, "child": e.child,
                 "roots_inside": e.roots_inside, "parity": "even" if e.even else "odd"}
                for e in self.edges
            ],
        }

    def to_dot(self) -> str:
        lines = ["graph T {"]
        for n in self.nodes.values():
            label = f"{n.name}\\ng={n.genus} {'odd' if n.odd else 'even'}"
            lines.append(f'  "{n.name}" [label="{label}"];')
            for i, h in enumerate(n.half_edges):
                hid = f"{n.name}_h{i}"
                lines.append(f'  "{hid}" [shape=point];')
                lines.append(f'  "{n.name}" -- "{hid}" [label="{h}", style=dashed];')
        for e in self.edges:
            style = "bold" if e.even else "solid"
            lines.append(f'  "{e.parent}" -- "{e.child}" [label="{e.name} {"even" if e.even else "odd"}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_roots(roots: Sequence[PadicElement]) -> None:
    for i in range(len(roots)):
        for j in range(i):
            d = roots[i] - roots[j]
            if d.is_zero():
                raise RepeatedRoots(f"roots {j} and {i} coincide at the working precision")


def build_covering(F: FieldDescriptor, roots: Sequence[PadicElement], odd_degree: bool | None = None,
                   coeffs: Sequence[PadicElement] | None = None) -> CoveringTree:
    """Good semistable covering of P^1 with respect to the roots (and infinity
    when the degree is odd).  The outermost node also carries the disc around
    infinity, so it is P^1 minus the top-level holes."""
    roots = list(roots)
    if not roots:
        raise SchemaError("at least one root is required")
    _check_roots(roots)
    if coeffs is not None:
        for r in roots:
            val = _poly.evaluate(list(coeffs), r)
            if not val.is_zero() and val.valuation() < min(r.prec, val.prec) - 1:
                raise RootsNotInField("supplied root does not satisfy f = 0")
        if len(coeffs) - 1 != len(roots):
            raise RootsNotInField("all roots of f must be supplied in K")
    if odd_degree is None:
        odd_degree = len(roots) % 2 == 1
    nodes: dict[str, CoverNode] = {}
    edges: list[TreeEdge] = []
    order: list[str] = []

    def sub(indices: list[int], outer_val: int | None, parent: str | None, queue: list) -> str:
        name = f"U{len(order) + 1}"
        order.append(name)
        anchor = indices[0]
        if len(indices) == 1:
            scale = outer_val + 1 if outer_val is not None else 0
        else:
            scale = min((roots[i] - roots[anchor]).valuation() for i in indices[1:])
        node = CoverNode(name, parent, anchor, scale, outer_val, [], contains_infinity=outer_val is None)
        nodes[name] = node
        classes: list[list[int]] = []
        for i in indices:
            for cl in classes:
                if (roots[i] - roots[cl[0]]).valuation() > scale:
                    cl.append(i)
                    break
            else:
                classes.append([i])
        for cl in classes:
            if len(cl) == 1:
                node.roots.append(cl[0])
            else:
                center = cl[0]
                radius = min((roots[i] - roots[center]).valuation() for i in cl[1:])
                queue.append((cl, scale, name, center, radius))
        node.outer_roots = [i for i in range(len(roots)) if i not in indices]
        return name

    # breadth-first so that names follow depth
    queue: list = []
    top = sub(list(range(len(roots))), None, None, queue)
    while queue:
        cl, scale, parent, center, radius = queue.pop(0)
        child = sub(cl, scale, parent, queue)
        nodes[parent].holes.append(Hole(center, radius, cl, child))
        edges.append(TreeEdge(f"{parent}-{child}", parent, child, cl, len(cl) % 2 == 0))

    tree = CoveringTree(F, roots, odd_degree, nodes, edges, top)
    label_parity_and_genus(tree)
    return tree


def label_parity_and_genus(tree: CoveringTree) -> CoveringTree:
    for node in tree.nodes.values():
        node.half_edges = [f"r{i}" for i in node.roots]
        if node.contains_infinity and tree.odd_degree:
            node.half_edges.append("inf")
        n_odd = len(node.half_edges)
        for e in tree.edges:
            if node.name in (e.parent, e.child) and not e.even:
                n_odd += 1
        node.odd = n_odd > 0
        # 2g - 2 = -4 + n_o for odd vertices; even vertices get genus -1
        node.genus = (n_odd - 2) // 2 if node.odd else -1
    return tree


# --- dual graph -----------------------------------------------------------------


@dataclass
class DualGraph:
    """Double cover Gamma of the tree.  Vertex and edge names carry a +/- suffix
    for even vertices and edges."""

    tree: CoveringTree
    vertices: list[str]
    edges: dict[str, tuple[str, str]]
    vertex_proj: dict[str, str]
    edge_proj: dict[str, str]
    half_edges: dict[str, list[str]]

    @property
    def betti(self) -> int:
        comps = _components(self.vertices, self.edges)
        return len(self.edges) - len(self.vertices) + comps

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices,
            "edges": {k: list(v) for k, v in self.edges.items()},
            "vertex_projection": self.vertex_proj,
            "edge_projection": self.edge_proj,
            "half_edges": self.half_edges,
            "betti_number": self.betti,
        }

    def to_dot(self) -> str:
        lines = ["graph Gamma {"]
        for v in self.vertices:
            node = self.tree.nodes[self.vertex_proj[v]]
            lines.append(f'  "{v}" [label="{v}\\ng={max(node.genus, 0)}"];')
            for i, h in enumerate(self.half_edges.get(v, [])):
                hid = f"{v}_h{i}"
                lines.append(f'  "{hid}" [shape=point];')
                lines.append(f'  "{v}" -- "{hid}" [label="{h}", style=dashed];')
        for name, (a, b) in self.edges.items():
            lines.append(f'  "{a}" -- "{b}" [label="{name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _components(vertices: list[str], edges: dict[str, tuple[str, str]]) -> int:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges.values():
        parent[find(a)] = find(b)
    return len({find(v) for v in vertices})


def build_dual_graph(tree: CoveringTree) -> DualGraph:
    vertices: list[str] = []
    vproj: dict[str, str] = {}
    halves: dict[str, list[str]] = {}
    for node in tree.nodes.values():
        if node.odd:
            vertices.append(node.name)
            vproj[node.name] = node.name
            halves[node.name] = list(node.half_edges)
        else:
            for s in "+-":
                vertices.append(node.name + s)
                vproj[node.name + s] = node.name
    edges: dict[str, tuple[str, str]] = {}
    eproj: dict[str, str] = {}

    def end(node_name: str, sign: str) -> str:
        return node_name if tree.nodes[node_name].odd else node_name + sign

    for e in tree.edges:
        if not e.even:
            edges[e.name] = (e.parent, e.child)
            eproj[e.name] = e.name
        else:
            for s in "+-":
                edges[e.name + s] = (end(e.parent, s), end(e.child, s))
                eproj[e.name + s] = e.name
    return DualGraph(tree, vertices, edges, vproj, eproj, halves)
