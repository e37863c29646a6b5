"""Shared strategies and independent oracles for the test suite."""

from __future__ import annotations

import random
from itertools import combinations, permutations

import networkx as nx
from hypothesis import strategies as st

from wswitch.graph import LabeledGraph, find_two_separators
from wswitch.instances import random_two_connected
from wswitch.switching import apply_switch, enumerate_moves


def to_nx(g: LabeledGraph) -> nx.Graph:
    x = nx.Graph()
    x.add_nodes_from(g.vertices)
    for e, (u, v) in g.incidence.items():
        x.add_edge(u, v, id=e)
    return x


def nx_two_separators(g: LabeledGraph) -> list[tuple[str, str]]:
    x = to_nx(g)
    out = []
    for a, b in combinations(sorted(g.vertices), 2):
        y = x.copy()
        y.remove_nodes_from([a, b])
        if y.number_of_nodes() and not nx.is_connected(y):
            out.append((a, b))
    return out


def nx_cycles(g: LabeledGraph) -> set[frozenset[str]]:
    x = to_nx(g)
    out = set()
    for cyc in nx.simple_cycles(x):
        ids = frozenset(x.edges[cyc[i], cyc[(i + 1) % len(cyc)]]["id"] for i in range(len(cyc)))
        out.add(ids)
    return out


def brute_phi_iso(g: LabeledGraph, h: LabeledGraph, phi) -> dict | None:
    """Try every vertex bijection."""
    gv, hv = g.sorted_vertices(), h.sorted_vertices()
    if len(gv) != len(hv):
        return None
    for perm in permutations(hv):
        psi = dict(zip(gv, perm))
        if all(set(h.ends(phi[e])) == {psi[u], psi[v]} for e, (u, v) in g.incidence.items()):
            return psi
    return None


def nx_phi_iso(g: LabeledGraph, h: LabeledGraph, phi) -> bool:
    """VF2 on incidence graphs whose edge nodes carry their (mapped) ids."""
    def incidence(x, name):
        y = nx.Graph()
        for e, (u, v) in x.incidence.items():
            y.add_node(("e", e), label=name(e))
            y.add_node(("v", u), label=None)
            y.add_node(("v", v), label=None)
            y.add_edge(("e", e), ("v", u))
            y.add_edge(("e", e), ("v", v))
        return y
    a = incidence(g, lambda e: phi[e])
    b = incidence(h, lambda f: f)
    return nx.is_isomorphic(a, b, node_match=lambda p, q: p["label"] == q["label"])


@st.composite
def two_connected_graphs(draw, min_n: int = 3, max_n: int = 10):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    chords = draw(st.sampled_from((0.0, 0.2, 0.5, 1.0)))
    return random_two_connected(n, random.Random(seed), chords)


@st.composite
def separable_graphs(draw, min_n: int = 4, max_n: int = 8):
    """2-connected graphs with at least one 2-separator."""
    g = draw(two_connected_graphs(min_n, max_n).filter(lambda g: bool(find_two_separators(g))))
    return g


@st.composite
def switched_pairs(draw, min_n: int = 4, max_n: int = 8, max_switches: int = 3):
    """``(g, h, moves)`` with ``h`` obtained from ``g`` by random switches."""
    g = draw(separable_graphs(min_n, max_n))
    h = g
    moves = []
    for _ in range(draw(st.integers(0, max_switches))):
        mv = draw(st.sampled_from(enumerate_moves(h)))
        h = apply_switch(h, mv)
        moves.append(mv)
    return g, h, moves
