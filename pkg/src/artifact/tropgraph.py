"""Tropical 1-forms, cycle pairing and homology bases of the dual graph.

Chains are dicts from Gamma edge names to integers or Fractions, oriented as
the edge tuples stored in the graph.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateGraph, InvalidPath
from .newton_cover import DualGraph

Chain = dict  # edge name -> Fraction


class PathNotInGraph(InvalidPath):
    pass


@dataclass(frozen=True)
class TropicalOneForm:
    values: dict  # edge name -> Fraction, value on the stored orientation

    def __call__(self, edge: str, direction: int = 1) -> Fraction:
        return direction * self.values.get(edge, Fraction(0))

    def is_harmonic(self, graph: DualGraph) -> bool:
        flow = {v: Fraction(0) for v in graph.vertices}
        for name, (a, b) in graph.edges.items():
            val = self.values.get(name, Fraction(0))
            flow[a] += val
            flow[b] -= val
        return all(x == 0 for x in flow.values())


@dataclass(frozen=True)
class CycleBasis:
    relative_cycles: list  # chains of tree edges
    cycles: list  # Gamma chains C_i
    walks: list  # closed walks realising C_i, as (edge, direction) lists
    dual_forms: list  # TropicalOneForm eta_i
    gram: list  # pairing matrix <C_i, C_j>

    @property
    def rank(self) -> int:
        return len(self.cycles)

    def to_json(self) -> dict:
        return {
            "cycles": [{k: str(v) for k, v in c.items()} for c in self.cycles],
            "walks": [[[e, d] for e, d in w] for w in self.walks],
            "dual_forms": [{k: str(v) for k, v in eta.values.items()} for eta in self.dual_forms],
            "gram": [[str(x) for x in row] for row in self.gram],
        }


def pairing(c: Chain, d: Chain) -> Fraction:
    """Cycle pairing with unit edge lengths."""
    return sum((Fraction(v) * Fraction(d.get(k, 0)) for k, v in c.items()), Fraction(0))


def form_of_cycle(c: Chain) -> TropicalOneForm:
    return TropicalOneForm({k: Fraction(v) for k, v in c.items() if v})


def walk_to_chain(walk: Iterable[tuple[str, int]]) -> Chain:
    out: dict = {}
    for e, d in walk:
        out[e] = out.get(e, 0) + d
    return {k: v for k, v in out.items() if v}


def validate_walk(graph: DualGraph, walk: Sequence[tuple[str, int]], start: str | None = None,
                  end: str | None = None) -> tuple[str | None, str | None]:
    """Check consecutive edges share vertices; returns (first vertex, last vertex)."""
    cur = start
    first = start
    for e, d in walk:
        if e not in graph.edges:
            raise PathNotInGraph(f"unknown edge {e}")
        a, b = graph.edges[e]
        src, dst = (a, b) if d > 0 else (b, a)
        if cur is not None and cur != src:
            raise PathNotInGraph(f"edge {e} does not start at {cur}")
        if first is None:
            first = src
        cur = dst
    if end is not None and cur is not None and cur != end:
        raise PathNotInGraph(f"walk ends at {cur}, expected {end}")
    return first, cur


def tropical_integral(eta: TropicalOneForm, walk: Sequence[tuple[str, int]],
                      start_fraction: Fraction = Fraction(0), end_fraction: Fraction = Fraction(1)) -> Fraction:
    """Sum of eta over the walk; the first and last edges may be partial."""
    total = Fraction(0)
    n = len(walk)
    for i, (e, d) in enumerate(walk):
        w = Fraction(1)
        if i == 0:
            w -= Fraction(start_fraction)
        if i == n - 1:
            w -= 1 - Fraction(end_fraction)
        total += eta(e, d) * w
    return total


def iota(graph: DualGraph, rel: dict) -> Chain:
    """Tree chain of even edges -> Gamma chain, e -> e+ - e-."""
    out: dict = {}
    for te, a in rel.items():
        if a:
            out[te + "+"] = out.get(te + "+", 0) + a
            out[te + "-"] = out.get(te + "-", 0) - a
    return out


def kappa(graph: DualGraph, c: Chain) -> dict:
    """Inverse of iota on cycles: the coefficient of e+ (cycles satisfy c(e-) = -c(e+))."""
    out: dict = {}
    for ge, val in c.items():
        te = graph.edge_proj[ge]
        if ge.endswith("+") and te + "+" == ge:
            out[te] = out.get(te, 0) + val
    return {k: v for k, v in out.items() if v}


def relative_homology_basis(graph: DualGraph) -> list[dict]:
    """Basis of H_1(T_e, V_o): in each component of the even-edge forest, paths
    from its first odd vertex to every other odd vertex."""
    tree = graph.tree
    adj: dict[str, list[tuple[str, str, int]]] = {n: [] for n in tree.nodes}
    for e in tree.edges:
        if e.even:
            adj[e.parent].append((e.child, e.name, 1))
            adj[e.child].append((e.parent, e.name, -1))
    seen: set[str] = set()
    basis: list[dict] = []
    for start in tree.nodes:
        if start in seen:
            continue
        # spanning traversal of this component, remembering the path to each vertex
        paths: dict[str, dict] = {start: {}}
        stack = [start]
        comp = []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w, ename, sgn in adj[v]:
                if w not in seen:
                    seen.add(w)
                    p = dict(paths[v])
                    p[ename] = p.get(ename, 0) + sgn
                    paths[w] = p
                    stack.append(w)
        odd = [v for v in _ordered(tree, comp) if tree.nodes[v].odd]
        if len(odd) < 2:
            continue
        v0 = odd[0]
        for w in odd[1:]:
            chain = dict(paths[w])
            for k, val in paths[v0].items():
                chain[k] = chain.get(k, 0) - val
            basis.append({k: v for k, v in chain.items() if v})
    return basis


def _ordered(tree, names):
    order = list(tree.nodes)
    return sorted(names, key=order.index)


def _walk_for_relative(graph: DualGraph, rel: dict) -> list[tuple[str, int]]:
    """Closed walk realising iota(rel) for a path rel between two odd vertices."""
    tree = graph.tree
    # orient the path: find its endpoints by vertex degree in the chain
    deg: dict[str, int] = {}
    for te in rel:
        e = tree.edge(te)
        deg[e.parent] = deg.get(e.parent, 0) + 1
        deg[e.child] = deg.get(e.child, 0) + 1
    ends = [v for v, k in deg.items() if k == 1]
    order = _ordered(tree, ends)
    cur = order[0]
    remaining = set(rel)
    forward: list[tuple[str, int]] = []
    while remaining:
        for te in sorted(remaining):
            e = tree.edge(te)
            if cur in (e.parent, e.child):
                d = 1 if e.parent == cur else -1
                forward.append((te, d))
                cur = e.child if d == 1 else e.parent
                remaining.discard(te)
                break
        else:
            raise DegenerateGraph("relative cycle is not a path")
    walk = [(te + "+", d) for te, d in forward]
    walk += [(te + "-", -d) for te, d in reversed(forward)]
    if walk_to_chain(walk) != {k: v for k, v in iota(graph, rel).items() if v}:
        walk = [(e, -d) for e, d in reversed(walk)]
    return walk


def homology_basis(graph: DualGraph) -> CycleBasis:
    rels = relative_homology_basis(graph)
    cycles = [iota(graph, r) for r in rels]
    walks = [_walk_for_relative(graph, r) for r in rels]
    h = len(cycles)
    if h != graph.betti:
        raise DegenerateGraph(f"relative basis has rank {h}, first Betti number is {graph.betti}")
    gram = [[pairing(ci, cj) for cj in cycles] for ci in cycles]
    inv = _invert(gram) if h else []
    duals = []
    for j in range(h):
        d: dict = {}
        for k in range(h):
            for e, v in cycles[k].items():
                d[e] = d.get(e, Fraction(0)) + inv[j][k] * v
        duals.append(TropicalOneForm({e: v for e, v in d.items() if v}))
    return CycleBasis(rels, cycles, walks, duals, gram)


def spanning_tree_cycles(graph: DualGraph) -> list[Chain]:
    """Fundamental cycles of a spanning forest, an independent cross-check."""
    parent: dict[str, tuple[str, str, int] | None] = {}
    adj: dict[str, list] = {v: [] for v in graph.vertices}
    for name, (a, b) in graph.edges.items():
        adj[a].append((b, name, 1))
        adj[b].append((a, name, -1))
    tree_edges: set[str] = set()
    depth: dict[str, int] = {}
    for root in graph.vertices:
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for w, name, sgn in adj[v]:
                if w not in parent:
                    parent[w] = (v, name, sgn)
                    depth[w] = depth[v] + 1
                    tree_edges.add(name)
                    stack.append(w)

    def path_to_root(v):
        out = {}
        while parent[v] is not None:
            u, name, sgn = parent[v]
            out[name] = out.get(name, 0) - sgn
            v = u
        return out

    cycles = []
    for name, (a, b) in graph.edges.items():
        if name in tree_edges:
            continue
        c = {name: 1}
        for k, v in path_to_root(b).items():
            c[k] = c.get(k, 0) + v
        for k, v in path_to_root(a).items():
            c[k] = c.get(k, 0) - v
        cycles.append({k: v for k, v in c.items() if v})
    return cycles


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise DegenerateGraph("cycle pairing is degenerate")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def is_cycle(graph: DualGraph, c: Chain) -> bool:
    flow = {v: 0 for v in graph.vertices}
    for e, val in c.items():
        a, b = graph.edges[e]
        flow[a] -= val
        flow[b] += val
    return all(x == 0 for x in flow.values())
