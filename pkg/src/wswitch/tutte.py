"""Tutte decomposition of 2-connected graphs into cycle and 3-connected bags.

The construction splits the graph into split components along separation
pairs (adding a virtual edge to both halves), merges adjacent bonds and
adjacent polygons, and then reads off the adhesion-2 tree decomposition:
each bond becomes a two-vertex separator node, every other component a bag
node, and two bag nodes that share a virtual edge get a separator node put
between them.  This is the SPQR tree in the bag language of tree
decompositions, which is unique.

Node labels are derived from bag contents, so two runs on equal graphs give
equal decompositions.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from .errors import BadNode, InternalInconsistency, NotTwoConnected
from .graph import (
    LabeledGraph,
    VertexId,
    articulation_points,
    connected_components,
    find_two_separators,
    is_connected,
    is_two_connected,
)

NodeId = str


class TorsoKind(str, Enum):
    THREE_CONNECTED = "ThreeConnected"
    CYCLE = "Cycle"


def node_label(bag: Iterable[VertexId]) -> NodeId:
    digest = hashlib.sha1("\x1f".join(sorted(bag)).encode()).hexdigest()
    return "t" + digest[:12]


@dataclass(frozen=True, eq=True)
class TutteDecomposition:
    """Tree of bags.

    ``torso_kind`` has an entry for exactly the nodes with at least three
    vertices; the remaining nodes are the two-vertex separator nodes.
    """

    bags: Mapping[NodeId, frozenset[VertexId]]
    tree_edges: frozenset[frozenset[NodeId]]
    torso_kind: Mapping[NodeId, TorsoKind]
    _nbrs: Mapping[NodeId, frozenset[NodeId]] = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        nb: dict[NodeId, set[NodeId]] = {t: set() for t in self.bags}
        for e in self.tree_edges:
            a, b = tuple(e)
            nb[a].add(b)
            nb[b].add(a)
        object.__setattr__(self, "_nbrs", {t: frozenset(s) for t, s in nb.items()})

    @classmethod
    def from_parts(cls, bags: list[frozenset[VertexId]], edges: Iterable[tuple[int, int]],
                   kinds: Mapping[int, TorsoKind]) -> TutteDecomposition:
        labels = [node_label(b) for b in bags]
        if len(set(labels)) != len(labels):
            raise InternalInconsistency("two decomposition nodes have identical bags")
        return cls(
            bags={labels[i]: frozenset(b) for i, b in enumerate(bags)},
            tree_edges=frozenset(frozenset((labels[i], labels[j])) for i, j in edges),
            torso_kind={labels[i]: TorsoKind(k) for i, k in kinds.items()},
        )

    @property
    def nodes(self) -> list[NodeId]:
        return sorted(self.bags)

    @property
    def w2(self) -> frozenset[NodeId]:
        return frozenset(t for t in self.bags if t not in self.torso_kind)

    @property
    def w3plus(self) -> frozenset[NodeId]:
        return frozenset(self.torso_kind)

    def neighbors(self, t: NodeId) -> frozenset[NodeId]:
        return self._nbrs[t]

    def degree(self, t: NodeId) -> int:
        return len(self._nbrs[t])

    def leaves(self) -> list[NodeId]:
        return sorted(t for t in self.bags if len(self._nbrs[t]) == 1)

    def at_distance_two(self, t: NodeId) -> list[NodeId]:
        near = self._nbrs[t]
        far = {y for x in near for y in self._nbrs[x]} - {t} - near
        return sorted(far)

    def component_nodes(self, start: NodeId, removed: NodeId) -> set[NodeId]:
        """Nodes of the subtree of ``T - removed`` that contains ``start``."""
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self._nbrs[x]:
                if y != removed and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def path(self, a: NodeId, b: NodeId) -> list[NodeId]:
        prev = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in self._nbrs[x]:
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def bag_of_vertex(self, v: VertexId) -> list[NodeId]:
        return sorted(t for t, bag in self.bags.items() if v in bag)

    def with_bags(self, new_bags: Mapping[NodeId, frozenset[VertexId]],
                  kinds: Mapping[NodeId, TorsoKind] | None = None) -> tuple[TutteDecomposition, dict[NodeId, NodeId]]:
        """Same tree shape with replaced bag contents; returns it and the old-to-new label map."""
        order = self.nodes
        index = {t: i for i, t in enumerate(order)}
        kinds = dict(self.torso_kind if kinds is None else kinds)
        d = TutteDecomposition.from_parts(
            [frozenset(new_bags.get(t, self.bags[t])) for t in order],
            [(index[a], index[b]) for a, b in (tuple(e) for e in self.tree_edges)],
            {index[t]: k for t, k in kinds.items()},
        )
        relabel = {t: node_label(new_bags.get(t, self.bags[t])) for t in order}
        return d, relabel

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": t, "bag": sorted(self.bags[t]),
                 "kind": self.torso_kind[t].value if t in self.torso_kind else "Separator"}
                for t in self.nodes
            ],
            "tree_edges": sorted(sorted(e) for e in self.tree_edges),
        }


# -- construction -----------------------------------------------------------

class _Splitter:
    """Split components of a multigraph given as lists of ``(id, a, b)``."""

    def __init__(self):
        self._virtual = 0

    def fresh(self) -> str:
        self._virtual += 1
        return f"~v{self._virtual}"

    def split_once(self, comp: list[tuple[str, str, str]]):
        groups = defaultdict(list)
        for item in comp:
            groups[frozenset(item[1:])].append(item)
        if len(groups) == 1:
            return None
        multi = sorted((sorted(p), items) for p, items in groups.items() if len(items) >= 2)
        if multi:
            (a, b), items = multi[0]
            v = self.fresh()
            rest = [x for x in comp if x not in items]
            return [items + [(v, a, b)], rest + [(v, a, b)]]
        simple = LabeledGraph({x for it in comp for x in it[1:]}, {i: (a, b) for i, a, b in comp})
        if simple.n <= 3:
            return None
        for a in simple.sorted_vertices():
            cuts = articulation_points(simple, (a,))
            if not cuts:
                continue
            b = min(cuts)
            side = connected_components(simple, (a, b))[0]
            e1 = [x for x in comp if x[1] in side or x[2] in side]
            e2 = [x for x in comp if x not in e1]
            v = self.fresh()
            return [e1 + [(v, a, b)], e2 + [(v, a, b)]]
        return None


def _kind_of(comp) -> str:
    verts = {x for it in comp for x in it[1:]}
    if len(verts) == 2:
        return "bond"
    if len(comp) == len(verts):
        return "polygon"
    return "rigid"


def tutte_decompose(g: LabeledGraph) -> TutteDecomposition:
    """The Tutte decomposition of a 2-connected graph."""
    if not is_two_connected(g):
        raise NotTwoConnected("Tutte decomposition needs a 2-connected graph")
    sp = _Splitter()
    work = [[(e, *g.ends(e)) for e in sorted(g.edge_ids)]]
    done = []
    while work:
        comp = work.pop()
        parts = sp.split_once(comp)
        if parts is None:
            done.append(comp)
        else:
            work.extend(parts)

    comps = {i: c for i, c in enumerate(done)}
    merged = True
    while merged:
        merged = False
        owner = defaultdict(list)
        for i, c in comps.items():
            for it in c:
                if it[0].startswith("~v"):
                    owner[it[0]].append(i)
        for vid in sorted(owner, key=lambda s: int(s[2:])):
            i, j = owner[vid]
            ki, kj = _kind_of(comps[i]), _kind_of(comps[j])
            if ki == kj and ki in ("bond", "polygon"):
                comps[i] = [x for x in comps[i] + comps[j] if x[0] != vid]
                del comps[j]
                merged = True
                break

    order = sorted(comps)
    bags: list[frozenset[VertexId]] = []
    kinds: dict[int, TorsoKind] = {}
    index: dict[int, int] = {}
    for i in order:
        c = comps[i]
        index[i] = len(bags)
        bags.append(frozenset(x for it in c for x in it[1:]))
        k = _kind_of(c)
        if k == "polygon":
            kinds[index[i]] = TorsoKind.CYCLE
        elif k == "rigid":
            kinds[index[i]] = TorsoKind.THREE_CONNECTED
    owner = defaultdict(list)
    for i in order:
        for it in comps[i]:
            if it[0].startswith("~v"):
                owner[it[0]].append(i)
    edges = []
    for vid, (i, j) in sorted(owner.items()):
        a, b = index[i], index[j]
        if a not in kinds or b not in kinds:
            edges.append((a, b))
        else:
            sep = frozenset(x for x in comps[i] if x[0] == vid)
            pair = frozenset(next(iter(sep))[1:])
            bags.append(pair)
            c = len(bags) - 1
            edges += [(a, c), (c, b)]
    return TutteDecomposition.from_parts(bags, edges, kinds)


# -- torso and validation ---------------------------------------------------

def adhesion_pairs(d: TutteDecomposition, t: NodeId) -> list[frozenset[VertexId]]:
    return [d.bags[t] & d.bags[s] for s in sorted(d.neighbors(t))]


def torso(d: TutteDecomposition, g: LabeledGraph, t: NodeId) -> LabeledGraph:
    """Induced bag graph plus a virtual ``~adh:u:v`` edge for each adhesion pair."""
    if t not in d.torso_kind:
        raise BadNode(f"{t!r} is not a bag node with at least three vertices")
    base = g.induced(d.bags[t])
    extra = {}
    for pair in adhesion_pairs(d, t):
        if len(pair) != 2:
            continue
        u, v = sorted(pair)
        if not base.adjacent(u, v):
            extra[f"~adh:{u}:{v}"] = (u, v)
    return base.with_edges(extra)


def is_cycle_graph(g: LabeledGraph) -> bool:
    return g.n >= 3 and g.m == g.n and all(g.degree(v) == 2 for v in g.vertices) and is_connected(g)


def is_three_connected(g: LabeledGraph) -> bool:
    return g.n >= 4 and is_two_connected(g) and not find_two_separators(g)


def _is_tree(d: TutteDecomposition) -> bool:
    if not d.bags:
        return False
    if len(d.tree_edges) != len(d.bags) - 1:
        return False
    start = d.nodes[0]
    return len(d.component_nodes(start, removed=None)) == len(d.bags)


def validate(d: TutteDecomposition, g: LabeledGraph) -> list[str]:
    """Violations of the tree-decomposition axioms and the Tutte conditions.

    Each message starts with the condition tag, e.g. ``"(torso) node t...: ..."``.
    """
    out: list[str] = []
    if not _is_tree(d):
        out.append("(tree) decomposition graph is not a tree")
        return out
    covered = set().union(*d.bags.values())
    if covered != set(g.vertices):
        out.append(f"(cover) bags cover {len(covered)} vertices, graph has {g.n}")
    for e in sorted(g.edge_ids):
        u, v = g.ends(e)
        if not any(u in b and v in b for b in d.bags.values()):
            out.append(f"(edges) edge {e} ({u},{v}) lies in no bag")
    for v in g.sorted_vertices():
        holders = set(d.bag_of_vertex(v))
        if not holders:
            continue
        seen = {min(holders)}
        stack = [min(holders)]
        while stack:
            x = stack.pop()
            for y in d.neighbors(x):
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holders:
            out.append(f"(subtree) nodes holding {v} are not connected")
    for e in sorted(sorted(x) for x in d.tree_edges):
        a, b = e
        size = len(d.bags[a] & d.bags[b])
        if size != 2:
            out.append(f"(adhesion) tree edge {a}-{b} has adhesion {size}")
    for t in d.nodes:
        size = len(d.bags[t])
        if t in d.torso_kind:
            if size < 3:
                out.append(f"(size) node {t} is a bag node with {size} vertices")
        elif size != 2:
            out.append(f"(size) node {t} is a separator node with {size} vertices")
    for t in sorted(d.torso_kind):
        tg = torso(d, g, t)
        cyc = is_cycle_graph(tg)
        tri = False if cyc else is_three_connected(tg)
        if not (cyc or tri):
            out.append(f"(torso) torso of {t} is neither a cycle nor 3-connected")
        elif d.torso_kind[t] is TorsoKind.CYCLE and not cyc:
            out.append(f"(torso) torso of {t} is marked Cycle but is not a cycle")
        elif d.torso_kind[t] is TorsoKind.THREE_CONNECTED and not tri:
            out.append(f"(torso) torso of {t} is marked ThreeConnected but is a cycle")
    for t in sorted(d.w2):
        if d.degree(t) < 2:
            out.append(f"(separator) separator node {t} has degree {d.degree(t)}")
        if any(s not in d.torso_kind for s in d.neighbors(t)):
            out.append(f"(separator) separator node {t} has a separator neighbor")
    for t in sorted(d.torso_kind):
        if any(s in d.torso_kind for s in d.neighbors(t)):
            out.append(f"(bipartite) bag node {t} has a bag neighbor")
    for t in sorted(d.w2):
        if d.degree(t) != 2:
            continue
        a, b = sorted(d.neighbors(t))
        u, v = sorted(d.bags[t])
        rigid = any(d.torso_kind.get(s) is TorsoKind.THREE_CONNECTED for s in (a, b))
        if not rigid and not g.adjacent(u, v):
            out.append(f"(cycle-join) separator node {t} joins two cycles over a non-edge")
    return out


# -- patches used when the graph changes in a controlled way ---------------

def kind_for_clique(size: int) -> TorsoKind:
    return TorsoKind.CYCLE if size == 3 else TorsoKind.THREE_CONNECTED


def switch_patch(d: TutteDecomposition, separator: tuple[VertexId, VertexId],
                 side_b: frozenset[VertexId]) -> tuple[TutteDecomposition, dict[NodeId, NodeId]]:
    """Decomposition of the graph after a Whitney switch.

    Bags on the flipped side holding exactly one separator vertex trade it for
    the other one; every other bag keeps its vertex set and the tree keeps its
    shape.
    """
    u, v = separator
    new_bags = {}
    for t, bag in d.bags.items():
        rest = bag - {u, v}
        if not rest:
            continue
        if rest <= side_b:
            if (u in bag) != (v in bag):
                swap = {u: v, v: u}
                new_bags[t] = frozenset(swap.get(x, x) for x in bag)
        elif rest & side_b:
            if not (u in bag and v in bag and d.torso_kind.get(t) is TorsoKind.CYCLE):
                raise InternalInconsistency(f"switch splits bag {t} that is not a cycle")
    return d.with_bags(new_bags)


def decompositions_equal(a: TutteDecomposition, b: TutteDecomposition) -> bool:
    return (dict(a.bags) == dict(b.bags) and a.tree_edges == b.tree_edges
            and dict(a.torso_kind) == dict(b.torso_kind))


def separator_pairs_in_cycle_bags(d: TutteDecomposition, g: LabeledGraph) -> set[frozenset[VertexId]]:
    """Nonadjacent vertex pairs lying together in a cycle bag's torso."""
    out = set()
    for t, k in d.torso_kind.items():
        if k is not TorsoKind.CYCLE:
            continue
        tg = torso(d, g, t)
        for a, b in combinations(sorted(d.bags[t]), 2):
            if not tg.adjacent(a, b):
                out.add(frozenset((a, b)))
    return out
