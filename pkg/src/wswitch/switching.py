"""Whitney switches on labeled graphs."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from itertools import combinations

from .errors import InvalidMove
from .graph import LabeledGraph, VertexId, connected_components, find_two_separators


@dataclass(frozen=True)
class SwitchMove:
    """Switch across the pair ``separator``; ``side_b`` is the flipped side without the pair."""

    separator: tuple[VertexId, VertexId]
    side_b: frozenset[VertexId]

    @classmethod
    def make(cls, u: VertexId, v: VertexId, side_b: Iterable[VertexId]) -> SwitchMove:
        return cls(tuple(sorted((u, v))), frozenset(side_b))

    def sort_key(self):
        return (self.separator, sorted(self.side_b))

    def to_json(self) -> dict:
        return {"separator": list(self.separator), "side_b": sorted(self.side_b)}

    @classmethod
    def from_json(cls, data: Mapping) -> SwitchMove:
        u, v = data["separator"]
        return cls.make(u, v, data["side_b"])


def check_move(g: LabeledGraph, m: SwitchMove) -> None:
    u, v = m.separator
    if u == v or u not in g.vertices or v not in g.vertices:
        raise InvalidMove(f"separator {m.separator} is not a pair of vertices of the graph")
    rest = g.vertices - {u, v}
    side_b = m.side_b
    if not side_b or not side_b <= rest or side_b == rest:
        raise InvalidMove("side_b must be a nonempty proper part of V minus the separator")
    for e, (a, b) in g.incidence.items():
        if (a in side_b and b in rest - side_b) or (b in side_b and a in rest - side_b):
            raise InvalidMove(f"edge {e} crosses the separation")


def apply_switch(g: LabeledGraph, m: SwitchMove, check: bool = True) -> LabeledGraph:
    """Reattach the ``side_b`` edges at u to v and vice versa; edge ids stay put."""
    if check:
        check_move(g, m)
    u, v = m.separator
    swap = {u: v, v: u}
    inc = {}
    for e, (a, b) in g.incidence.items():
        if a in swap and b in m.side_b:
            a = swap[a]
        elif b in swap and a in m.side_b:
            b = swap[b]
        inc[e] = (a, b)
    return g.with_incidence(inc)


def apply_sequence(g: LabeledGraph, moves: Iterable[SwitchMove]) -> LabeledGraph:
    for m in moves:
        g = apply_switch(g, m)
    return g


def moves_for_separator(g: LabeledGraph, u: VertexId, v: VertexId) -> list[SwitchMove]:
    comps = connected_components(g, (u, v))
    out = []
    # comps[0] stays on one side, so each bipartition is generated once
    for size in range(1, len(comps)):
        for pick in combinations(range(1, len(comps)), size):
            y = frozenset().union(*(comps[i] for i in pick))
            x = frozenset().union(*(c for i, c in enumerate(comps) if i not in pick))
            side = x if sorted(x) < sorted(y) else y
            out.append(SwitchMove.make(u, v, side))
    return out


def enumerate_moves(g: LabeledGraph) -> list[SwitchMove]:
    """Every switch of ``g``, one per bipartition of the components at each 2-separator."""
    out = []
    for u, v in find_two_separators(g):
        out.extend(moves_for_separator(g, u, v))
    return sorted(out, key=SwitchMove.sort_key)
