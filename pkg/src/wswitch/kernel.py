"""Instances, the five reduction rules, kernelization and exact search.

An :class:`Instance` bundles two graphs, the edge bijection between them and
the switch budget ``k``.  Decompositions, the tree isomorphism and the bag
report are derived lazily and can be handed in when a rule has patched them.

The rules act on enhanced instances.  Each one returns the new instance and
whether it fired; :func:`kernelize` runs them to a global fixpoint and records
every edit in a :class:`KernelTrace` that can be replayed.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import InternalInconsistency, NoPartner, TooLarge, ValidationError
from .graph import LabeledGraph, VertexId, is_simplicial, is_two_connected, star_key
from .switching import SwitchMove, apply_switch, enumerate_moves
from .tutte import (NodeId, TorsoKind, TutteDecomposition, decompositions_equal, kind_for_clique,
                    node_label, switch_patch, tutte_decompose, validate)
from .twoiso import (BagReport, EdgeBijection, TreeIso, _image_path, breakpoint_number, build_tree_iso,
                     classify_bags, enhance, find_phi_isomorphism, is_two_isomorphism,
                     star_mismatches)

SEARCH_CAP = 30


class Instance:
    """``(G, H, phi, k)`` with lazily derived decompositions and bag report."""

    def __init__(self, g: LabeledGraph, h: LabeledGraph, phi: EdgeBijection, k: int,
                 meta: Mapping | None = None, *, dG: TutteDecomposition | None = None,
                 dH: TutteDecomposition | None = None):
        self.g = g
        self.h = h
        self.phi = phi
        self.k = k
        self.meta = dict(meta or {})
        if dG is not None:
            self.__dict__["dG"] = dG
        if dH is not None:
            self.__dict__["dH"] = dH

    def __repr__(self) -> str:
        return f"Instance(n={self.g.n}, m={self.g.m}, k={self.k})"

    @cached_property
    def dG(self) -> TutteDecomposition:
        return tutte_decompose(self.g)

    @cached_property
    def dH(self) -> TutteDecomposition:
        return tutte_decompose(self.h)

    @cached_property
    def alpha(self) -> TreeIso:
        return build_tree_iso(self.g, self.h, self.phi, self.dG, self.dH)

    @cached_property
    def report(self) -> BagReport:
        """Bag classification of this instance as it stands (meaningful once enhanced)."""
        return classify_bags(self.g, self.h, self.phi, self.dG, self.dH, self.alpha)

    @cached_property
    def enhanced(self) -> Instance:
        g, h, phi = enhance(self.g, self.h, self.phi, self.dG, self.dH, self.alpha)
        if g is self.g:
            return self
        return Instance(g, h, phi, self.k, self.meta, dG=self.dG, dH=self.dH)

    @cached_property
    def breakpoints(self) -> int:
        return breakpoint_number(self.enhanced.report)

    def is_phi_isomorphic(self) -> bool:
        return find_phi_isomorphism(self.g, self.h, self.phi) is not None

    def replace(self, **kw) -> Instance:
        args = dict(g=self.g, h=self.h, phi=self.phi, k=self.k, meta=self.meta)
        args.update(kw)
        return Instance(**args)

    def check(self) -> None:
        """Raise :class:`ValidationError` naming the first failed invariant."""
        for name, x in (("G", self.g), ("H", self.h)):
            if not is_two_connected(x):
                raise ValidationError("not 2-connected", name)
        if self.k < 0:
            raise ValidationError("k negative", str(self.k))
        self.phi.check_against(self.g, self.h)
        if self.g.n != self.h.n:
            raise ValidationError("not a 2-isomorphism", "vertex counts differ")
        if not is_two_isomorphism(self.g, self.h, self.phi):
            raise ValidationError("not a 2-isomorphism", "cycle spaces do not correspond")


# -- the trivial no-instance ------------------------------------------------------

def trivial_no_instance() -> Instance:
    """Two 4-cycles whose bijection swaps two consecutive edges, with ``k = 0``."""
    g = LabeledGraph(["x1", "x2", "x3", "x4"],
                     {"e1": ("x4", "x1"), "e2": ("x1", "x2"), "e3": ("x2", "x3"), "e4": ("x3", "x4")})
    h = LabeledGraph(["y1", "y2", "y3", "y4"],
                     {"f1": ("y4", "y1"), "f2": ("y1", "y2"), "f3": ("y2", "y3"), "f4": ("y3", "y4")})
    chi = EdgeBijection({"e1": "f1", "e2": "f3", "e3": "f2", "e4": "f4"})
    if find_phi_isomorphism(g, h, chi) is not None or not is_two_isomorphism(g, h, chi):
        raise InternalInconsistency("trivial no-instance is miswired")
    return Instance(g, h, chi, 0, {"generator": "trivial_no_instance", "expected": "NO"})


def is_trivial_no_instance(inst: Instance) -> bool:
    t = trivial_no_instance()
    return inst.g == t.g and inst.h == t.h and inst.phi == t.phi and inst.k == 0


# -- decomposition edits ----------------------------------------------------------

def _rebuild(d: TutteDecomposition, drop: Iterable[NodeId] = (),
             add: list[tuple[frozenset, TorsoKind | None]] = (),
             edges: Iterable[tuple] = (), bags: Mapping[NodeId, frozenset] | None = None,
             kinds: Mapping[NodeId, TorsoKind] | None = None) -> tuple[TutteDecomposition, list[NodeId]]:
    """New decomposition from ``d``; integer keys in ``edges`` refer to ``add``.

    Returns the decomposition and the labels of the added nodes.
    """
    drop = set(drop)
    bags = dict(bags or {})
    kinds = dict(kinds or {})
    keys = [t for t in d.nodes if t not in drop] + list(range(len(add)))
    index = {key: i for i, key in enumerate(keys)}
    bag_list, kind_map = [], {}
    for key in keys:
        if isinstance(key, int):
            bag, kind = add[key]
        else:
            bag, kind = bags.get(key, d.bags[key]), kinds.get(key, d.torso_kind.get(key))
        bag_list.append(frozenset(bag))
        if kind is not None:
            kind_map[index[key]] = kind
    tree = [(index[a], index[b]) for a, b in (tuple(e) for e in d.tree_edges)
            if a not in drop and b not in drop]
    tree += [(index[a], index[b]) for a, b in edges]
    nd = TutteDecomposition.from_parts(bag_list, tree, kind_map)
    return nd, [node_label(bag) for bag, _ in add]


def _fresh_pairs(x: LabeledGraph, tag: str, pairs: list[tuple[VertexId, VertexId]]) -> dict[str, tuple]:
    out: dict[str, tuple] = {}
    for u, v in pairs:
        out[x.fresh_edge_id(f"~{tag}:{u}:{v}", out)] = (u, v)
    return out


def _add_edges(inst: Instance, tag: str, g_pairs, h_pairs) -> tuple[LabeledGraph, LabeledGraph, EdgeBijection, dict]:
    ga = _fresh_pairs(inst.g, tag, g_pairs)
    ha = _fresh_pairs(inst.h, tag, h_pairs)
    phi = inst.phi.extended(dict(zip(ga, ha)))
    step = {"g_added": {e: list(p) for e, p in ga.items()},
            "h_added": {e: list(p) for e, p in ha.items()},
            "phi_added": dict(zip(ga, ha))}
    return inst.g.with_edges(ga), inst.h.with_edges(ha), phi, step


# -- rules ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stopped:
    reason: str


def _rule1(inst: Instance):
    rep, dG, dH, alpha = inst.report, inst.dG, inst.dH, inst.alpha
    for t in rep.bad_nodes():
        rec = rep.records[t]
        segs = [p for p in rec.good_segments if not inst.g.adjacent(p[0], p[-1])]
        if not segs:
            continue
        path = min(segs, key=lambda p: (sorted((p[0], p[-1])), p))
        us = _image_path(inst.h.induced(dH.bags[alpha[t]]), inst.phi, path, inst.g)
        v0, vr, u0, ur = path[0], path[-1], us[0], us[-1]
        g, h, phi, step = _add_edges(inst, "r1", [(v0, vr)], [(u0, ur)])
        new_dG = _split_cycle_bag(dG, t, path)
        new_dH = _split_cycle_bag(dH, alpha[t], tuple(us))
        step.update(rule=1, node=t, segment=list(path))
        return Instance(g, h, phi, inst.k, inst.meta, dG=new_dG, dH=new_dH), step
    return inst, None


def _split_cycle_bag(d: TutteDecomposition, t: NodeId, path: tuple) -> TutteDecomposition:
    x1 = frozenset(path)
    x2 = d.bags[t] - frozenset(path[1:-1])
    sep = frozenset((path[0], path[-1]))
    add = [(x1, TorsoKind.CYCLE), (x2, TorsoKind.CYCLE), (sep, None)]
    edges = [(0, 2), (2, 1)]
    for s in sorted(d.neighbors(t)):
        edges.append((s, 0) if d.bags[s] <= x1 else (s, 1))
    nd, _ = _rebuild(d, drop=[t], add=add, edges=edges)
    return nd


def _nonadjacent_pairs(x: LabeledGraph, verts) -> list[tuple[VertexId, VertexId]]:
    return [(a, b) for a, b in combinations(sorted(verts), 2) if not x.adjacent(a, b)]


def _rule2(inst: Instance):
    rep, dG, dH, alpha = inst.report, inst.dG, inst.dH, inst.alpha
    for t in rep.good_nodes():
        pairs = _nonadjacent_pairs(inst.g, dG.bags[t])
        if not pairs:
            continue
        psi = rep.records[t].psi
        if psi is None:
            raise InternalInconsistency(f"good bag {t} has no phi-isomorphism")
        g, h, phi, step = _add_edges(inst, "r2", pairs, [(psi[a], psi[b]) for a, b in pairs])
        kind = kind_for_clique(len(dG.bags[t]))
        new_dG, _ = _rebuild(dG, kinds={t: kind})
        new_dH, _ = _rebuild(dH, kinds={alpha[t]: kind})
        step.update(rule=2, node=t)
        return Instance(g, h, phi, inst.k, inst.meta, dG=new_dG, dH=new_dH), step
    return inst, None


def _merge_nodes(d: TutteDecomposition, t1: NodeId, t2: NodeId) -> TutteDecomposition:
    (s,) = d.neighbors(t1) & d.neighbors(t2)
    bag = d.bags[t1] | d.bags[t2]
    drop = [t1, t2] + ([s] if d.degree(s) == 2 else [])
    nbrs = (d.neighbors(t1) | d.neighbors(t2)) - set(drop)
    add = [(bag, kind_for_clique(len(bag)))]
    nd, _ = _rebuild(d, drop=drop, add=add, edges=[(x, 0) for x in sorted(nbrs)])
    return nd


def _rule3(inst: Instance):
    rep, dG, dH, alpha = inst.report, inst.dG, inst.dH, inst.alpha
    for t1, t2 in rep.mutually_good_pairs:
        psi = rep.mutually_good[(t1, t2)]
        a_side = sorted(dG.bags[t1] - dG.bags[t2])
        b_side = sorted(dG.bags[t2] - dG.bags[t1])
        pairs = [(a, b) for a in a_side for b in b_side if not inst.g.adjacent(a, b)]
        g, h, phi, step = _add_edges(inst, "r3", pairs, [(psi[a], psi[b]) for a, b in pairs])
        new_dG = _merge_nodes(dG, t1, t2)
        new_dH = _merge_nodes(dH, alpha[t1], alpha[t2])
        step.update(rule=3, nodes=[t1, t2])
        return Instance(g, h, phi, inst.k, inst.meta, dG=new_dG, dH=new_dH), step
    return inst, None


def forced_switch_move(d: TutteDecomposition, s: NodeId) -> SwitchMove:
    """The switch across separator node ``s`` (degree 2) flipping its larger-labelled side."""
    t1, t2 = sorted(d.neighbors(s))
    side = d.component_nodes(t2, removed=s)
    u, v = sorted(d.bags[s])
    side_b = frozenset().union(*(d.bags[x] for x in side)) - {u, v}
    return SwitchMove.make(u, v, side_b)


def _rule4(inst: Instance):
    rep, dG = inst.report, inst.dG
    for s in sorted(dG.w2):
        if dG.degree(s) != 2:
            continue
        t1, t2 = sorted(dG.neighbors(s))
        if not (rep.records[t1].good and rep.records[t2].good) or (t1, t2) in rep.mutually_good:
            continue
        move = forced_switch_move(dG, s)
        step = {"rule": 4, "node": s, "switch": move.to_json(), "k_before": inst.k}
        if inst.k - 1 < 0:
            step["stopped"] = True
            return trivial_no_instance(), step
        g = apply_switch(inst.g, move)
        new_dG, _ = switch_patch(dG, move.separator, move.side_b)
        return Instance(g, inst.h, inst.phi, inst.k - 1, inst.meta, dG=new_dG, dH=inst.dH), step
    return inst, None


def _rule5(inst: Instance):
    g, h, dG, dH, alpha = inst.g, inst.h, inst.dG, inst.dH, inst.alpha
    for v in g.sorted_vertices():
        if g.degree(v) < 3 or not is_simplicial(g, v):
            continue
        img = inst.phi.image(g.star(v))
        partner = [u for u in h.sorted_vertices() if h.star(u) == img]
        if not partner:
            raise NoPartner(f"no vertex of H has the star phi(E({v}))")
        u = partner[0]
        holders = dG.bag_of_vertex(v)
        if len(holders) != 1:
            raise InternalInconsistency(f"simplicial vertex {v} lies in {len(holders)} bags")
        (t,) = holders
        s = alpha[t]
        if u not in dH.bags[s]:
            raise InternalInconsistency(f"partner {u} of {v} is outside the matching bag")
        bag_g, bag_h = dG.bags[t] - {v}, dH.bags[s] - {u}
        new_dG, _ = _rebuild(dG, bags={t: bag_g}, kinds={t: kind_for_clique(len(bag_g))})
        new_dH, _ = _rebuild(dH, bags={s: bag_h}, kinds={s: kind_for_clique(len(bag_h))})
        removed = g.star(v)
        step = {"rule": 5, "node": t, "g_removed": v, "h_removed": u}
        new = Instance(g.without([v]), h.without([u]), inst.phi.restricted(g.edge_ids - removed),
                       inst.k, inst.meta, dG=new_dG, dH=new_dH)
        return new, step
    return inst, None


def rule1_segments(inst: Instance) -> tuple[Instance, bool]:
    new, step = _rule1(inst)
    return new, step is not None


def rule2_complete_good_bags(inst: Instance) -> tuple[Instance, bool]:
    new, step = _rule2(inst)
    return new, step is not None


def rule3_glue_mutually_good(inst: Instance) -> tuple[Instance, bool]:
    new, step = _rule3(inst)
    return new, step is not None


def rule4_forced_switch(inst: Instance) -> tuple[Instance, bool | Stopped]:
    new, step = _rule4(inst)
    if step is None:
        return new, False
    return new, Stopped("k below zero") if step.get("stopped") else True


def rule5_delete_simplicial(inst: Instance) -> tuple[Instance, bool]:
    new, step = _rule5(inst)
    return new, step is not None


# -- trace -----------------------------------------------------------------------------

@dataclass
class KernelTrace:
    steps: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"format": "ws/1", "steps": self.steps}

    @classmethod
    def from_json(cls, data: Mapping) -> KernelTrace:
        return cls(list(data["steps"]))

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for s in self.steps:
            out[str(s["rule"])] = out.get(str(s["rule"]), 0) + 1
        return out

    def replay(self, inst: Instance) -> Instance:
        """Re-apply the recorded edits to ``inst`` without re-deriving any of them."""
        g, h, phi, k = inst.g, inst.h, inst.phi, inst.k
        for s in self.steps:
            rule = s["rule"]
            if rule == "stop" or s.get("stopped"):
                return trivial_no_instance()
            if "g_added" in s:
                g = g.with_edges(s["g_added"])
                h = h.with_edges(s["h_added"])
                phi = phi.extended(s["phi_added"])
            elif rule == 4:
                g = apply_switch(g, SwitchMove.from_json(s["switch"]))
                k -= 1
            elif rule == 5:
                gone = g.star(s["g_removed"])
                phi = phi.restricted(g.edge_ids - gone)
                g = g.without([s["g_removed"]])
                h = h.without([s["h_removed"]])
            else:
                raise ValidationError("bad trace", f"unknown step {s!r}")
        return Instance(g, h, phi, k, inst.meta)


# -- driver -----------------------------------------------------------------------------

def _check_caches(inst: Instance, step: dict) -> None:
    for name, x, d in (("G", inst.g, inst.dG), ("H", inst.h, inst.dH)):
        fresh = tutte_decompose(x)
        if not decompositions_equal(fresh, d):
            raise InternalInconsistency(f"patched decomposition of {name} is stale after rule {step['rule']}")
        bad = validate(d, x)
        if bad:
            raise InternalInconsistency(f"decomposition of {name} invalid after rule {step['rule']}: {bad[0]}")
    if not is_two_isomorphism(inst.g, inst.h, inst.phi):
        raise InternalInconsistency(f"phi stopped being a 2-isomorphism after rule {step['rule']}")


def kernel_size_bound(b: int) -> int:
    return max(52 * b - 36, 3)


def kernelize(inst: Instance, validate: bool = False) -> tuple[Instance, KernelTrace]:
    """Equivalent instance on at most ``max(52 b - 36, 3)`` vertices per graph."""
    trace = KernelTrace()
    b = inst.breakpoints
    if b > 2 * inst.k:
        trace.steps.append({"rule": "stop", "reason": f"b={b} exceeds 2k={2 * inst.k}"})
        return trivial_no_instance(), trace
    cur = inst.enhanced
    added = sorted(cur.g.edge_ids - inst.g.edge_ids)
    if added:
        trace.steps.append({
            "rule": "enhance",
            "g_added": {e: list(cur.g.ends(e)) for e in added},
            "h_added": {cur.phi[e]: list(cur.h.ends(cur.phi[e])) for e in added},
            "phi_added": {e: cur.phi[e] for e in added},
        })

    def run(rule_fn):
        nonlocal cur
        new, step = rule_fn(cur)
        if step is None:
            return False
        trace.steps.append(step)
        if step.get("stopped"):
            cur = new
            return "stopped"
        if validate:
            _check_caches(new, step)
        cur = new
        return True

    while True:
        fired = False
        while run(_rule1):
            fired = True
        while run(_rule2):
            fired = True
        while True:
            if run(_rule3):
                fired = True
                continue
            r = run(_rule4)
            if r == "stopped":
                return cur, trace
            if r:
                fired = True
                continue
            break
        while run(_rule5):
            fired = True
        if not fired:
            break
    return cur, trace


# -- exact search ---------------------------------------------------------------------

@dataclass
class SolveResult:
    answer: bool
    switches: list[SwitchMove] | None
    explored: int = 0

    @property
    def label(self) -> str:
        return "YES" if self.answer else "NO"

    def to_json(self) -> dict:
        return {"format": "ws/1", "answer": self.label,
                "switches": None if self.switches is None else [m.to_json() for m in self.switches]}


def _search(inst: Instance, limit: int | None, prune: bool) -> SolveResult:
    if inst.g.n > SEARCH_CAP:
        raise TooLarge(f"exact search is capped at {SEARCH_CAP} vertices, got {inst.g.n}")
    h, phi = inst.h, inst.phi
    start = inst.g
    key0 = star_key(start)
    parent: dict[bytes, tuple[bytes, SwitchMove] | None] = {key0: None}
    frontier = [start]
    depth = 0
    explored = 0

    def witness(key):
        seq = []
        while parent[key] is not None:
            key, mv = parent[key]
            seq.append(mv)
        return seq[::-1]

    while frontier:
        nxt = []
        for g in frontier:
            explored += 1
            if find_phi_isomorphism(g, h, phi) is not None:
                seq = witness(star_key(g))
                replay = start
                for mv in seq:
                    replay = apply_switch(replay, mv)
                if find_phi_isomorphism(replay, h, phi) is None:
                    raise InternalInconsistency("witness does not replay")
                return SolveResult(True, seq, explored)
            if limit is not None and depth >= limit:
                continue
            remaining = None if limit is None else limit - depth
            if prune and remaining is not None and len(star_mismatches(g, h, phi)) > 2 * remaining:
                continue
            key = star_key(g)
            for mv in enumerate_moves(g):
                g2 = apply_switch(g, mv, check=False)
                k2 = star_key(g2)
                if k2 in parent:
                    continue
                parent[k2] = (key, mv)
                nxt.append(g2)
        frontier = nxt
        depth += 1
    return SolveResult(False, None, explored)


def solve(inst: Instance, prune: bool = True) -> SolveResult:
    """Exact answer: can at most ``k`` switches of G make it phi-isomorphic to H?"""
    return _search(inst, inst.k, prune)


def switch_distance(inst: Instance) -> int:
    """Minimum number of switches making G phi-isomorphic to H."""
    res = _search(inst, None, prune=False)
    if not res.answer:
        raise InternalInconsistency("no switch sequence exists; phi is not a 2-isomorphism")
    return len(res.switches)
