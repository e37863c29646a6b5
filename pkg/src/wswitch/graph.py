"""Labeled simple graphs with stable vertex and edge identities.

Vertices and edges are opaque string tokens.  A Whitney switch changes which
vertices an edge is attached to, never the edge ids themselves, so every
structure that talks about "the same edge" in two graphs does so by id.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from itertools import combinations
from types import MappingProxyType

from .errors import NotTwoConnected, TooLarge, WSError

VertexId = str
EdgeId = str
Pair = tuple[VertexId, VertexId]

CYCLE_ORACLE_CAP = 12


def _pair(u: VertexId, v: VertexId) -> Pair:
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """Immutable simple undirected graph keyed by edge id.

    ``edges`` maps each edge id to its two endpoints.  Loops, parallel edges
    and endpoints that are not declared vertices are rejected.
    """

    __slots__ = ("_vertices", "_inc", "_adj", "_star")

    def __init__(self, vertices: Iterable[VertexId], edges: Mapping[EdgeId, Iterable[VertexId]]):
        vs = frozenset(vertices)
        inc: dict[EdgeId, Pair] = {}
        adj: dict[VertexId, dict[VertexId, EdgeId]] = {v: {} for v in vs}
        for e in sorted(edges):
            ends = tuple(edges[e])
            if len(ends) != 2:
                raise WSError(f"edge {e!r} must have exactly two endpoints")
            u, v = _pair(*ends)
            if u == v:
                raise WSError(f"edge {e!r} is a loop at {u!r}")
            if u not in vs or v not in vs:
                raise WSError(f"edge {e!r} has an undeclared endpoint")
            if v in adj[u]:
                raise WSError(f"edges {adj[u][v]!r} and {e!r} are parallel")
            inc[e] = (u, v)
            adj[u][v] = e
            adj[v][u] = e
        self._vertices = vs
        self._inc = inc
        self._adj = adj
        self._star = {v: frozenset(nb.values()) for v, nb in adj.items()}

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> frozenset[VertexId]:
        return self._vertices

    @property
    def incidence(self) -> Mapping[EdgeId, Pair]:
        return MappingProxyType(self._inc)

    @property
    def edge_ids(self) -> frozenset[EdgeId]:
        return frozenset(self._inc)

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self._inc)

    def ends(self, e: EdgeId) -> Pair:
        return self._inc[e]

    def star(self, v: VertexId) -> frozenset[EdgeId]:
        """Edges incident to ``v``."""
        return self._star[v]

    def neighbors(self, v: VertexId) -> frozenset[VertexId]:
        return frozenset(self._adj[v])

    def degree(self, v: VertexId) -> int:
        return len(self._adj[v])

    def adjacent(self, u: VertexId, v: VertexId) -> bool:
        return v in self._adj[u]

    def edge_between(self, u: VertexId, v: VertexId) -> EdgeId | None:
        return self._adj[u].get(v)

    def sorted_vertices(self) -> list[VertexId]:
        return sorted(self._vertices)

    # -- derived graphs ----------------------------------------------------

    def induced(self, keep: Iterable[VertexId]) -> LabeledGraph:
        ks = frozenset(keep)
        return LabeledGraph(ks, {e: p for e, p in self._inc.items() if p[0] in ks and p[1] in ks})

    def induced_edges(self, keep: Iterable[VertexId]) -> frozenset[EdgeId]:
        ks = frozenset(keep)
        return frozenset(e for e, (u, v) in self._inc.items() if u in ks and v in ks)

    def without(self, removed: Iterable[VertexId]) -> LabeledGraph:
        rs = frozenset(removed)
        return self.induced(self._vertices - rs)

    def with_edges(self, added: Mapping[EdgeId, Iterable[VertexId]]) -> LabeledGraph:
        clash = set(added) & set(self._inc)
        if clash:
            raise WSError(f"edge ids already present: {sorted(clash)}")
        return LabeledGraph(self._vertices, {**self._inc, **added})

    def with_incidence(self, incidence: Mapping[EdgeId, Iterable[VertexId]]) -> LabeledGraph:
        return LabeledGraph(self._vertices, incidence)

    def relabel(self, vmap: Mapping[VertexId, VertexId]) -> LabeledGraph:
        return LabeledGraph((vmap[v] for v in self._vertices),
                            {e: (vmap[u], vmap[v]) for e, (u, v) in self._inc.items()})

    def fresh_edge_id(self, base: str, taken: Iterable[EdgeId] = ()) -> EdgeId:
        taken = set(taken)
        eid, i = base, 1
        while eid in self._inc or eid in taken:
            i += 1
            eid = f"{base}#{i}"
        return eid

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._inc == other._inc

    def __hash__(self) -> int:
        return hash((self._vertices, frozenset(self._inc.items())))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self.n}, m={self.m})"

    def to_json(self) -> dict:
        return {"vertices": self.sorted_vertices(),
                "edges": {e: list(p) for e, p in sorted(self._inc.items())}}

    @classmethod
    def from_json(cls, data: Mapping) -> LabeledGraph:
        return cls(data["vertices"], data["edges"])

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[VertexId, VertexId]], prefix: str = "e") -> LabeledGraph:
        """Build a graph whose edges are named ``prefix1, prefix2, ...`` in input order."""
        pairs = list(pairs)
        vs = {x for p in pairs for x in p}
        return cls(vs, {f"{prefix}{i}": p for i, p in enumerate(pairs, 1)})


# -- connectivity -----------------------------------------------------------

def connected_components(g: LabeledGraph, removed: Iterable[VertexId] = ()) -> list[frozenset[VertexId]]:
    """Vertex sets of the components of ``g - removed``, ordered by least member."""
    gone = set(removed)
    seen: set[VertexId] = set()
    comps = []
    for s in g.sorted_vertices():
        if s in gone or s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g._adj[x]:
                if y not in gone and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_connected(g: LabeledGraph, removed: Iterable[VertexId] = ()) -> bool:
    return len(connected_components(g, removed)) <= 1


def articulation_points(g: LabeledGraph, removed: Iterable[VertexId] = ()) -> set[VertexId]:
    """Cut vertices of ``g - removed`` (lowpoint DFS, iterative)."""
    gone = set(removed)
    disc: dict[VertexId, int] = {}
    low: dict[VertexId, int] = {}
    cuts: set[VertexId] = set()
    counter = 0
    for root in g.sorted_vertices():
        if root in gone or root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        root_children = 0
        stack = [(root, None, iter(sorted(g._adj[root])))]
        while stack:
            x, parent, it = stack[-1]
            advanced = False
            for y in it:
                if y in gone or y == parent:
                    continue
                if y in disc:
                    low[x] = min(low[x], disc[y])
                else:
                    disc[y] = low[y] = counter
                    counter += 1
                    stack.append((y, x, iter(sorted(g._adj[y]))))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[x])
                if parent == root:
                    root_children += 1
                elif low[x] >= disc[parent]:
                    cuts.add(parent)
        if root_children >= 2:
            cuts.add(root)
    return cuts


def is_two_connected(g: LabeledGraph) -> bool:
    return g.n >= 3 and is_connected(g) and not articulation_points(g)


def find_two_separators(g: LabeledGraph) -> list[Pair]:
    """All vertex pairs whose deletion disconnects the 2-connected graph ``g``.

    For each vertex ``a`` the cut vertices of ``g - a`` are exactly the partners
    ``b`` of ``a``.  Pairs come back sorted.
    """
    if not is_two_connected(g):
        raise NotTwoConnected("find_two_separators needs a 2-connected graph")
    found = set()
    for a in g.sorted_vertices():
        for b in articulation_points(g, (a,)):
            found.add(_pair(a, b))
    return sorted(found)


def all_cycles(g: LabeledGraph, cap: int = CYCLE_ORACLE_CAP) -> set[frozenset[EdgeId]]:
    """Edge sets of every simple cycle.  Exponential; a small-graph oracle only."""
    if g.n > cap:
        raise TooLarge(f"all_cycles is capped at {cap} vertices, got {g.n}")
    order = {v: i for i, v in enumerate(g.sorted_vertices())}
    cycles: set[frozenset[EdgeId]] = set()

    def extend(start, x, visited, path_edges):
        for y, e in g._adj[x].items():
            if y == start and len(path_edges) >= 2 and e not in path_edges:
                cycles.add(frozenset(path_edges + [e]))
            elif order[y] > order[start] and y not in visited:
                visited.add(y)
                extend(start, y, visited, path_edges + [e])
                visited.discard(y)

    for s in g.sorted_vertices():
        extend(s, s, {s}, [])
    return cycles


def incidence_key(g: LabeledGraph) -> bytes:
    """Canonical byte serialization of vertex set plus incidence."""
    payload = [g.sorted_vertices(), [[e, u, v] for e, (u, v) in sorted(g._inc.items())]]
    return json.dumps(payload, separators=(",", ":")).encode()


def star_key(g: LabeledGraph) -> bytes:
    """Serialization of the family of edge stars, blind to vertex names.

    Two graphs on the same edge ids share this key exactly when one is the
    other with vertices renamed.
    """
    stars = sorted(sorted(g._star[v]) for v in g._vertices)
    return json.dumps(stars, separators=(",", ":")).encode()


def is_simplicial(g: LabeledGraph, v: VertexId) -> bool:
    return all(g.adjacent(a, b) for a, b in combinations(sorted(g._adj[v]), 2))
