"""Non-nilpotent graphs of a finite semigroup and their components."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import FiniteSemigroup, bits, closure, popcount
from .nilpotency import build_pair_graph, is_acyclic_table, local_table


class GraphKind(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    NONCOMMUTING = "noncommuting"


@dataclass(frozen=True)
class NonNilpotentGraph:
    kind: GraphKind
    semigroup: FiniteSemigroup
    adjacency: tuple[int, ...]  # vertex -> neighbour mask

    @property
    def order(self) -> int:
        return len(self.adjacency)

    def has_edge(self, x: int, y: int) -> bool:
        return bool(self.adjacency[x] >> y & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.order) for y in bits(self.adjacency[x]) if x < y]

    def degree(self, x: int) -> int:
        return popcount(self.adjacency[x])

    def is_complete(self) -> bool:
        full = (1 << self.order) - 1
        return all(self.adjacency[x] == full & ~(1 << x) for x in range(self.order))

    def is_empty(self) -> bool:
        return not any(self.adjacency)

    def is_subgraph_of(self, other: "NonNilpotentGraph") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.adjacency, other.adjacency))

    def as_dict(self) -> dict:
        s = self.semigroup
        return {
            "kind": self.kind.value,
            "vertices": list(s.names),
            "edges": [[s.names[x], s.names[y]] for x, y in self.edges()],
        }


def _assemble(kind: GraphKind, s: FiniteSemigroup, test) -> NonNilpotentGraph:
    adj = [0] * s.order
    for x in range(s.order):
        for y in range(x + 1, s.order):
            if test(x, y):
                adj[x] |= 1 << y
                adj[y] |= 1 << x
    return NonNilpotentGraph(kind, s, tuple(adj))


class NilpotencyCache:
    """Memoized nilpotency of subsemigroups of one semigroup, keyed by mask."""

    def __init__(self, s: FiniteSemigroup):
        self.s = s
        self._closure: dict[int, int] = {}
        self._nil: dict[int, bool] = {}

    def closure(self, seed: int) -> int:
        r = self._closure.get(seed)
        if r is None:
            r = self._closure[seed] = closure(self.s, seed)
        return r

    def nilpotent(self, mask: int) -> bool:
        r = self._nil.get(mask)
        if r is None:
            tab, _ = local_table(self.s, mask)
            r = self._nil[mask] = is_acyclic_table(tab)
        return r

    def generated_nilpotent(self, seed: int) -> bool:
        return self.nilpotent(self.closure(seed))


def upper_graph(s: FiniteSemigroup, cache: NilpotencyCache | None = None) -> NonNilpotentGraph:
    """N_S: x -- y iff the subsemigroup generated by x and y is not nilpotent."""
    cache = cache or NilpotencyCache(s)
    return _assemble(GraphKind.UPPER, s,
                     lambda x, y: not cache.generated_nilpotent(1 << x | 1 << y))


def _returns_to(g, start: int) -> bool:
    seen = np.zeros(g.succ.shape[0], dtype=bool)
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in g.succ[v]:
            if w < 0:
                continue
            if w == start:
                return True
            if not seen[w]:
                seen[w] = True
                queue.append(int(w))
    return False


def lower_graph(s: FiniteSemigroup) -> NonNilpotentGraph:
    """L_S: x -- y iff (x, y) lies on a cycle of the pair graph of <x, y> with multipliers <x, y>^1."""

    def test(x, y):
        t = closure(s, 1 << x | 1 << y)
        tab, els = local_table(s, t)
        g = build_pair_graph(tab)
        return _returns_to(g, g.vertex(els.index(x), els.index(y)))

    return _assemble(GraphKind.LOWER, s, test)


def noncommuting_graph(s: FiniteSemigroup) -> NonNilpotentGraph:
    t = s.table
    return _assemble(GraphKind.NONCOMMUTING, s, lambda x, y: t[x][y] != t[y][x])


def build_graph(s: FiniteSemigroup, kind: GraphKind | str) -> NonNilpotentGraph:
    kind = GraphKind(kind)
    if kind is GraphKind.UPPER:
        return upper_graph(s)
    if kind is GraphKind.LOWER:
        return lower_graph(s)
    return noncommuting_graph(s)


# -- components and distances ----------------------------------------------

@dataclass(frozen=True)
class ComponentDecomposition:
    components: list[int]
    isolated: int
    distances: np.ndarray  # -1 between different components

    def component_of(self, x: int) -> int:
        return next(c for c in self.components if c >> x & 1)

    def nontrivial(self) -> list[int]:
        return [c for c in self.components if popcount(c) > 1]


def bfs_distances(adjacency, sources, allowed: int | None = None) -> np.ndarray:
    """Breadth-first distances from each source, optionally within the vertex mask ``allowed``."""
    n = len(adjacency)
    if allowed is None:
        allowed = (1 << n) - 1
    out = np.full((len(sources), n), -1, dtype=np.int64)
    for row, src in enumerate(sources):
        out[row, src] = 0
        frontier = 1 << src
        seen = frontier
        d = 0
        while frontier:
            d += 1
            nxt = 0
            for v in bits(frontier):
                nxt |= adjacency[v]
            nxt &= allowed & ~seen
            for v in bits(nxt):
                out[row, v] = d
            seen |= nxt
            frontier = nxt
    return out


def decompose(graph: NonNilpotentGraph) -> ComponentDecomposition:
    n = graph.order
    dist = bfs_distances(graph.adjacency, list(range(n)))
    comps = []
    seen = 0
    for x in range(n):
        if seen >> x & 1:
            continue
        c = sum(1 << y for y in range(n) if dist[x, y] >= 0)
        comps.append(c)
        seen |= c
    isolated = sum(1 << x for x in range(n) if graph.adjacency[x] == 0)
    return ComponentDecomposition(comps, isolated, dist)


def induced_diameter(graph: NonNilpotentGraph, mask: int) -> int | None:
    """Largest distance inside the induced subgraph on ``mask``; None if it is disconnected."""
    members = list(bits(mask))
    if not members:
        return 0
    dist = bfs_distances(graph.adjacency, members, mask)
    sub = dist[:, members]
    if (sub < 0).any():
        return None
    return int(sub.max())


def export_dot(graph: NonNilpotentGraph, decomposition: ComponentDecomposition | None = None,
               annotations: dict[str, int] | None = None) -> str:
    """Undirected DOT text with nodes and edges in sorted order.

    ``annotations`` maps a label (such as ``"root"`` or ``"K"``) to an element
    mask; each node lists the labels it carries.
    """
    s = graph.semigroup
    decomposition = decomposition or decompose(graph)
    annotations = annotations or {}
    comp_index = {}
    for k, c in enumerate(sorted(decomposition.components, key=lambda m: m & -m)):
        for x in bits(c):
            comp_index[x] = k

    def q(name):
        return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["graph {"]
    for x in sorted(range(graph.order), key=lambda v: s.names[v]):
        attrs = [f"component={comp_index[x]}"]
        tags = sorted(label for label, m in annotations.items() if m >> x & 1)
        if tags:
            attrs.append(f'label={q(s.names[x] + " [" + ",".join(tags) + "]")}')
        lines.append(f"  {q(s.names[x])} [{', '.join(attrs)}];")
    edges = sorted(tuple(sorted((s.names[x], s.names[y]))) for x, y in graph.edges())
    for u, v in edges:
        lines.append(f"  {q(u)} -- {q(v)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot_edges(text: str) -> set[frozenset[str]]:
    """Edge set of a DOT document produced by :func:`export_dot`."""
    out = set()
    for line in text.splitlines():
        line = line.strip()
        if " -- " in line:
            u, v = line.rstrip(";").split(" -- ")
            out.add(frozenset((u.strip('"'), v.strip('"'))))
    return out
