"""Edge bijections, 2-isomorphism, phi-isomorphism and bag classification."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import InternalInconsistency, NoIsomorphism, SizeMismatch, ValidationError
from .graph import EdgeId, LabeledGraph, VertexId, is_connected
from .tutte import NodeId, TorsoKind, TutteDecomposition


class EdgeBijection:
    """Bijection from the edge ids of one graph to those of another."""

    __slots__ = ("_fwd", "_inv")

    def __init__(self, forward: Mapping[EdgeId, EdgeId]):
        fwd = dict(forward)
        inv = {}
        for e, f in fwd.items():
            if f in inv:
                raise ValidationError("phi not bijective", f"{inv[f]!r} and {e!r} both map to {f!r}")
            inv[f] = e
        self._fwd = fwd
        self._inv = inv

    @classmethod
    def identity(cls, edges: Iterable[EdgeId]) -> EdgeBijection:
        return cls({e: e for e in edges})

    @property
    def forward(self) -> Mapping[EdgeId, EdgeId]:
        return dict(self._fwd)

    @property
    def domain(self) -> frozenset[EdgeId]:
        return frozenset(self._fwd)

    @property
    def codomain(self) -> frozenset[EdgeId]:
        return frozenset(self._inv)

    def __getitem__(self, e: EdgeId) -> EdgeId:
        return self._fwd[e]

    def __len__(self) -> int:
        return len(self._fwd)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeBijection) and self._fwd == other._fwd

    def __hash__(self) -> int:
        return hash(frozenset(self._fwd.items()))

    def __repr__(self) -> str:
        return f"EdgeBijection({len(self._fwd)} edges)"

    def inverse(self) -> EdgeBijection:
        return EdgeBijection(self._inv)

    def image(self, edges: Iterable[EdgeId]) -> frozenset[EdgeId]:
        return frozenset(self._fwd[e] for e in edges)

    def preimage(self, edges: Iterable[EdgeId]) -> frozenset[EdgeId]:
        return frozenset(self._inv[f] for f in edges)

    def extended(self, extra: Mapping[EdgeId, EdgeId]) -> EdgeBijection:
        clash = set(extra) & set(self._fwd)
        if clash:
            raise ValidationError("phi not bijective", f"edges already mapped: {sorted(clash)}")
        return EdgeBijection({**self._fwd, **extra})

    def restricted(self, domain: Iterable[EdgeId]) -> EdgeBijection:
        return EdgeBijection({e: self._fwd[e] for e in domain})

    def check_against(self, g: LabeledGraph, h: LabeledGraph) -> None:
        if self.domain != g.edge_ids:
            missing = sorted(g.edge_ids - self.domain)
            extra = sorted(self.domain - g.edge_ids)
            raise ValidationError("phi not bijective", f"domain differs from E(G): missing {missing}, extra {extra}")
        if self.codomain != h.edge_ids:
            missing = sorted(h.edge_ids - self.codomain)
            raise ValidationError("phi not bijective", f"image differs from E(H): missing {missing}")

    def to_json(self) -> dict:
        return dict(sorted(self._fwd.items()))


# -- cycle space --------------------------------------------------------------

def _fundamental_cycles(g: LabeledGraph) -> list[frozenset[EdgeId]]:
    root = min(g.vertices)
    parent: dict[VertexId, tuple[VertexId, EdgeId] | None] = {root: None}
    depth = {root: 0}
    queue = [root]
    tree_edges = set()
    for x in queue:
        for y in sorted(g.neighbors(x)):
            if y not in parent:
                e = g.edge_between(x, y)
                parent[y] = (x, e)
                depth[y] = depth[x] + 1
                tree_edges.add(e)
                queue.append(y)
    out = []
    for e in sorted(g.edge_ids - tree_edges):
        a, b = g.ends(e)
        cyc = {e}
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            pa, pe = parent[a]
            cyc.add(pe)
            a = pa
        out.append(frozenset(cyc))
    return out


def _is_eulerian_subset(h: LabeledGraph, edges: Iterable[EdgeId]) -> bool:
    deg: dict[VertexId, int] = defaultdict(int)
    for f in edges:
        u, v = h.ends(f)
        deg[u] ^= 1
        deg[v] ^= 1
    return not any(deg.values())


def _maps_cycle_space(g: LabeledGraph, h: LabeledGraph, fwd: Mapping[EdgeId, EdgeId]) -> bool:
    if g.n == 0 or not is_connected(g):
        return False
    return all(_is_eulerian_subset(h, (fwd[e] for e in c)) for c in _fundamental_cycles(g))


def is_two_isomorphism(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection) -> bool:
    """Whether ``phi`` and its inverse both carry cycles to cycles.

    Checked on the binary cycle space: the image of every fundamental cycle of
    ``g`` must be an even subgraph of ``h``, and symmetrically.  A bijection
    that maps one cycle space onto the other maps circuits onto circuits.
    """
    if g.m != h.m:
        raise SizeMismatch(f"G has {g.m} edges, H has {h.m}")
    if phi.domain != g.edge_ids or phi.codomain != h.edge_ids:
        return False
    return (_maps_cycle_space(g, h, phi._fwd) and
            _maps_cycle_space(h, g, phi._inv))


# -- phi-isomorphism ------------------------------------------------------------

def find_phi_isomorphism(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection | Mapping[EdgeId, EdgeId]
                         ) -> dict[VertexId, VertexId] | None:
    """Vertex bijection psi with phi(xy) = psi(x)psi(y), or None.

    Every vertex star of ``g`` must be carried by phi onto a vertex star of
    ``h``.  ``phi`` may cover more edges than ``g`` has; only E(g) is used.
    """
    fwd = phi._fwd if isinstance(phi, EdgeBijection) else phi
    if g.n != h.n or g.m != h.m:
        return None
    by_star: dict[frozenset[EdgeId], list[VertexId]] = defaultdict(list)
    for u in h.sorted_vertices():
        by_star[h.star(u)].append(u)
    psi: dict[VertexId, VertexId] = {}
    used: set[VertexId] = set()
    for v in g.sorted_vertices():
        try:
            img = frozenset(fwd[e] for e in g.star(v))
        except KeyError:
            return None
        # vertices sharing a star are interchangeable, so any free one works
        cands = [u for u in by_star.get(img, ()) if u not in used]
        if not cands:
            return None
        psi[v] = cands[0]
        used.add(cands[0])
    for e, (a, b) in g.incidence.items():
        f = fwd.get(e)
        if f is None or f not in h.incidence or set(h.ends(f)) != {psi[a], psi[b]}:
            return None
    return psi


def phi_iso_between(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection,
                    xs: Iterable[VertexId], ys: Iterable[VertexId]) -> dict[VertexId, VertexId] | None:
    """phi-isomorphism of ``g[xs]`` to ``h[ys]``, requiring phi(E(g[xs])) = E(h[ys])."""
    gx = g.induced(xs)
    hy = h.induced(ys)
    if phi.image(gx.edge_ids) != hy.edge_ids:
        return None
    return find_phi_isomorphism(gx, hy, phi)


# -- tree isomorphism ---------------------------------------------------------

@dataclass(frozen=True)
class TreeIso:
    map: Mapping[NodeId, NodeId]

    def __getitem__(self, t: NodeId) -> NodeId:
        return self.map[t]

    def inverse(self) -> dict[NodeId, NodeId]:
        return {b: a for a, b in self.map.items()}

    def to_json(self) -> dict:
        return dict(sorted(self.map.items()))


def tree_iso_violations(g, h, phi: EdgeBijection, dG: TutteDecomposition, dH: TutteDecomposition,
                        alpha: Mapping[NodeId, NodeId]) -> list[str]:
    out = []
    if set(alpha) != set(dG.bags) or set(alpha.values()) != set(dH.bags) or len(set(alpha.values())) != len(alpha):
        return ["alpha is not a bijection of tree nodes"]
    for e in dG.tree_edges:
        a, b = tuple(e)
        if frozenset((alpha[a], alpha[b])) not in dH.tree_edges:
            out.append(f"tree edge {a}-{b} is not preserved")
    for t in dG.nodes:
        s = alpha[t]
        if len(dG.bags[t]) != len(dH.bags[s]):
            out.append(f"(i) bag sizes differ at {t}")
        if dG.torso_kind.get(t) != dH.torso_kind.get(s):
            out.append(f"(ii) torso kinds differ at {t}")
        if phi.image(g.induced_edges(dG.bags[t])) != h.induced_edges(dH.bags[s]):
            out.append(f"(iii) edge sets do not correspond at {t}")
    return out


def build_tree_iso(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection,
                   dG: TutteDecomposition, dH: TutteDecomposition) -> TreeIso:
    """The isomorphism of decomposition trees induced by a 2-isomorphism.

    Leaves are matched through their private edges; every other node is
    placed by walking the image of a root-to-leaf path.
    """
    if len(dG.bags) != len(dH.bags):
        raise NoIsomorphism("decomposition trees have different sizes")
    if len(dG.bags) == 1:
        alpha = {dG.nodes[0]: dH.nodes[0]}
    else:
        h_leaves = dH.leaves()
        h_leaf_edges = {s: h.induced_edges(dH.bags[s]) for s in h_leaves}
        alpha = {}
        for t in dG.leaves():
            (nb,) = dG.neighbors(t)
            private = g.induced_edges(dG.bags[t]) - g.induced_edges(dG.bags[nb])
            if not private:
                raise NoIsomorphism(f"leaf {t} has no private edges")
            img = phi.image(private)
            hits = [s for s in h_leaves if img <= h_leaf_edges[s]]
            if len(hits) != 1:
                raise NoIsomorphism(f"leaf {t} matches {len(hits)} leaves of H")
            alpha[t] = hits[0]
        if len(set(alpha.values())) != len(alpha) or len(alpha) != len(h_leaves):
            raise NoIsomorphism("leaf matching is not a bijection")
        root = dG.leaves()[0]
        # parent pointers away from the root, then a descendant leaf per node
        order = [root]
        parent = {root: None}
        for x in order:
            for y in sorted(dG.neighbors(x)):
                if y not in parent:
                    parent[y] = x
                    order.append(y)
        below: dict[NodeId, NodeId] = {}
        for x in reversed(order):
            if x != root and dG.degree(x) == 1:
                below[x] = x
            kids = [y for y in dG.neighbors(x) if parent.get(y) == x]
            if kids and x not in below:
                below[x] = below[min(kids)]
        depth = {root: 0}
        for x in order[1:]:
            depth[x] = depth[parent[x]] + 1
        for x in order:
            if x in alpha:
                continue
            leaf = below[x]
            hp = dH.path(alpha[root], alpha[leaf])
            if len(hp) != depth[leaf] + 1:
                raise NoIsomorphism("leaf distances differ between the trees")
            alpha[x] = hp[depth[x]]
    bad = tree_iso_violations(g, h, phi, dG, dH, alpha)
    if bad:
        raise NoIsomorphism("; ".join(bad))
    return TreeIso(alpha)


# -- enhancement ----------------------------------------------------------------

def enhance(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection, dG: TutteDecomposition,
            dH: TutteDecomposition, alpha: TreeIso) -> tuple[LabeledGraph, LabeledGraph, EdgeBijection]:
    """Make every separator pair adjacent on both sides, extending phi by alpha."""
    add_g, add_h, extra = {}, {}, {}
    for t in sorted(dG.w2):
        u, v = sorted(dG.bags[t])
        a, b = sorted(dH.bags[alpha[t]])
        adj_g, adj_h = g.adjacent(u, v), h.adjacent(a, b)
        if adj_g != adj_h:
            raise InternalInconsistency(f"separator {t} is adjacent on one side only")
        if adj_g:
            continue
        eg = g.fresh_edge_id(f"~w:{u}:{v}", add_g)
        eh = h.fresh_edge_id(f"~w:{a}:{b}", add_h)
        add_g[eg] = (u, v)
        add_h[eh] = (a, b)
        extra[eg] = eh
    if not extra:
        return g, h, phi
    return g.with_edges(add_g), h.with_edges(add_h), phi.extended(extra)


# -- bag classification -------------------------------------------------------

Segment = tuple[VertexId, ...]


@dataclass
class BagRecord:
    node: NodeId
    kind: TorsoKind
    good: bool
    psi: dict[VertexId, VertexId] | None = None
    cycle: tuple[VertexId, ...] = ()
    crucial_breakpoints: frozenset[VertexId] = frozenset()
    good_segments: list[Segment] = field(default_factory=list)


@dataclass
class BagReport:
    records: dict[NodeId, BagRecord]
    mutually_good: dict[tuple[NodeId, NodeId], dict[VertexId, VertexId]]

    @property
    def mutually_good_pairs(self) -> list[tuple[NodeId, NodeId]]:
        return sorted(self.mutually_good)

    def bad_nodes(self) -> list[NodeId]:
        return sorted(t for t, r in self.records.items() if not r.good)

    def good_nodes(self) -> list[NodeId]:
        return sorted(t for t, r in self.records.items() if r.good)

    @property
    def breakpoints(self) -> int:
        return breakpoint_number(self)

    def to_json(self) -> dict:
        return {
            "bags": [
                {"node": r.node, "kind": r.kind.value, "good": r.good,
                 "crucial_breakpoints": sorted(r.crucial_breakpoints),
                 "good_segments": [list(s) for s in r.good_segments]}
                for _, r in sorted(self.records.items())
            ],
            "mutually_good_pairs": [list(p) for p in self.mutually_good_pairs],
            "breakpoint_number": breakpoint_number(self),
        }


def cycle_order(g: LabeledGraph, verts: Iterable[VertexId]) -> tuple[VertexId, ...]:
    """Vertices of the cycle ``g[verts]`` in cyclic order from the least vertex."""
    c = g.induced(verts)
    start = min(c.vertices)
    order = [start]
    prev, cur = start, min(c.neighbors(start))
    while cur != start:
        order.append(cur)
        (nxt,) = c.neighbors(cur) - {prev}
        prev, cur = cur, nxt
        if len(order) > c.n:
            raise InternalInconsistency("bag does not induce a cycle")
    return tuple(order)


def _star_index(x: LabeledGraph) -> dict[frozenset[EdgeId], VertexId]:
    return {x.star(u): u for u in x.sorted_vertices()}


def neighborhood_graphs(g, h, dG, dH, alpha, t) -> tuple[LabeledGraph, LabeledGraph]:
    """The graphs induced by a bag together with the bags at tree distance two, on both sides."""
    far = dG.at_distance_two(t)
    xs = set(dG.bags[t]).union(*(dG.bags[s] for s in far))
    ys = set(dH.bags[alpha[t]]).union(*(dH.bags[alpha[s]] for s in far))
    return g.induced(xs), h.induced(ys)


def _image_path(h_bag: LabeledGraph, phi: EdgeBijection, path: Segment, g: LabeledGraph) -> list[VertexId] | None:
    imgs = []
    for a, b in zip(path, path[1:]):
        f = phi[g.edge_between(a, b)]
        if f not in h_bag.incidence:
            return None
        imgs.append(set(h_bag.ends(f)))
    first = imgs[0] - imgs[1]
    if len(first) != 1:
        return None
    us = [next(iter(first))]
    for ends in imgs:
        if us[-1] not in ends:
            return None
        (nxt,) = ends - {us[-1]}
        us.append(nxt)
    return us if len(set(us)) == len(us) else None


def _good_segments(g, h, phi, dG, dH, alpha, t, cyc, gt, ht, good_of) -> list[Segment]:
    size = len(cyc)
    h_bag = h.induced(dH.bags[alpha[t]])
    hstar = _star_index(ht)
    # W3 nodes at distance two sharing exactly a given pair with t
    shared: dict[frozenset, list[NodeId]] = defaultdict(list)
    for s in dG.at_distance_two(t):
        if s in dG.torso_kind:
            shared[dG.bags[t] & dG.bags[s]].append(s)
    found: list[Segment] = []
    for i in range(size):
        for r in range(5, size):
            path = tuple(cyc[(i + j) % size] for j in range(r + 1))
            us = _image_path(h_bag, phi, path, g)
            if us is None:
                break
            ok = all(good_of(s) for a, b in zip(path, path[1:]) for s in shared.get(frozenset((a, b)), ()))
            if ok:
                ok = all(hstar.get(phi.image(gt.star(path[j]))) == us[j] for j in range(1, r))
            if not ok:
                break
            found.append(path)
    sets = [frozenset(p) for p in found]
    maximal = [p for p, s in zip(found, sets) if not any(s < o for o in sets)]
    return sorted(set(maximal), key=lambda p: (sorted((p[0], p[-1])), p))


def classify_bags(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection, dG: TutteDecomposition,
                  dH: TutteDecomposition, alpha: TreeIso) -> BagReport:
    """Good/bad status, crucial breakpoints, good segments and mutually good pairs.

    The graphs are expected to be enhanced.
    """
    records: dict[NodeId, BagRecord] = {}
    for t in sorted(dG.torso_kind):
        psi = phi_iso_between(g, h, phi, dG.bags[t], dH.bags[alpha[t]])
        records[t] = BagRecord(node=t, kind=dG.torso_kind[t], good=psi is not None, psi=psi)
    for t, rec in records.items():
        if rec.good:
            continue
        gt, ht = neighborhood_graphs(g, h, dG, dH, alpha, t)
        hstar = _star_index(ht)
        rec.crucial_breakpoints = frozenset(
            v for v in dG.bags[t] if phi.image(gt.star(v)) not in hstar)
        if rec.kind is TorsoKind.CYCLE:
            rec.cycle = cycle_order(g, dG.bags[t])
            rec.good_segments = _good_segments(g, h, phi, dG, dH, alpha, t, rec.cycle, gt, ht,
                                               lambda s: records[s].good)
    mutual: dict[tuple[NodeId, NodeId], dict[VertexId, VertexId]] = {}
    for s in sorted(dG.w2):
        nbrs = sorted(dG.neighbors(s))
        for i, t1 in enumerate(nbrs):
            for t2 in nbrs[i + 1:]:
                if not (records[t1].good and records[t2].good):
                    continue
                psi = phi_iso_between(g, h, phi, dG.bags[t1] | dG.bags[t2],
                                      dH.bags[alpha[t1]] | dH.bags[alpha[t2]])
                if psi is not None:
                    mutual[(t1, t2)] = psi
    return BagReport(records, mutual)


def breakpoint_number(report: BagReport) -> int:
    """Distinct crucial breakpoints over all bad bags.

    A separator vertex can be crucial in two neighbouring bags; it is counted once.
    """
    found: set[VertexId] = set()
    for r in report.records.values():
        if not r.good:
            found |= r.crucial_breakpoints
    return len(found)


def star_mismatches(g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection) -> frozenset[VertexId]:
    """Vertices of G whose mapped edge star is the star of no vertex of H.

    A switch only changes the stars of its two separator vertices, so at least
    half of this count of switches is needed.
    """
    hstar = _star_index(h)
    return frozenset(v for v in g.vertices if phi.image(g.star(v)) not in hstar)
