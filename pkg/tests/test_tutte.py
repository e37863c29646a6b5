
import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import separable_graphs, to_nx, two_connected_graphs
from wswitch.errors import BadNode, NotTwoConnected
from wswitch.graph import LabeledGraph, find_two_separators
from wswitch.switching import apply_switch, enumerate_moves
from wswitch.tutte import (TorsoKind, TutteDecomposition, decompositions_equal, node_label,
                           separator_pairs_in_cycle_bags, switch_patch, torso, tutte_decompose, validate)


def graph(pairs):
    return LabeledGraph.from_pairs(pairs)


K4 = graph([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")])
K4_MINUS = graph([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
C6_CHORD = graph([("1", "2"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "6"), ("6", "1"), ("1", "4")])
THETA = graph([("u", "a"), ("a", "v"), ("u", "b"), ("b", "v"), ("u", "c"), ("c", "v"), ("u", "v")])


def shape(d: TutteDecomposition):
    """Bags with their kinds, blind to node labels."""
    return sorted((sorted(d.bags[t]), d.torso_kind.get(t, "Separator")) for t in d.nodes)


def test_k4_is_one_rigid_bag():
    d = tutte_decompose(K4)
    assert shape(d) == [(["a", "b", "c", "d"], TorsoKind.THREE_CONNECTED)]
    assert validate(d, K4) == []


def test_k4_minus_edge_is_two_triangles():
    d = tutte_decompose(K4_MINUS)
    assert shape(d) == [(["a", "b"], "Separator"), (["a", "b", "c"], TorsoKind.CYCLE),
                        (["a", "b", "d"], TorsoKind.CYCLE)]
    assert len(d.tree_edges) == 2


def test_chorded_hexagon_is_two_squares():
    d = tutte_decompose(C6_CHORD)
    assert shape(d) == [(["1", "2", "3", "4"], TorsoKind.CYCLE), (["1", "4"], "Separator"),
                        (["1", "4", "5", "6"], TorsoKind.CYCLE)]


def test_theta_has_three_triangles_around_one_separator():
    d = tutte_decompose(THETA)
    (sep,) = d.w2
    assert d.bags[sep] == {"u", "v"}
    assert d.degree(sep) == 3
    assert all(d.torso_kind[t] is TorsoKind.CYCLE for t in d.neighbors(sep))


def test_cycle_is_single_cycle_bag():
    c7 = graph([(str(i), str(i % 7 + 1)) for i in range(1, 8)])
    d = tutte_decompose(c7)
    assert len(d.nodes) == 1 and d.torso_kind[d.nodes[0]] is TorsoKind.CYCLE


def test_non_edge_between_two_cycles_is_merged():
    # two 4-cycles glued on a non-adjacent pair form a single 6-cycle
    g = graph([("a", "x"), ("x", "b"), ("b", "y"), ("y", "a")])
    d = tutte_decompose(g)
    assert len(d.nodes) == 1


def test_labels_hash_the_bag():
    d = tutte_decompose(K4_MINUS)
    for t, bag in d.bags.items():
        assert t == node_label(bag)
        assert t.startswith("t") and len(t) == 13


def test_json_shape():
    data = tutte_decompose(K4_MINUS).to_json()
    kinds = sorted(n["kind"] for n in data["nodes"])
    assert kinds == ["Cycle", "Cycle", "Separator"]
    assert len(data["tree_edges"]) == 2


def test_torso_of_separator_node_is_rejected():
    d = tutte_decompose(K4_MINUS)
    (sep,) = d.w2
    with pytest.raises(BadNode):
        torso(d, K4_MINUS, sep)


def test_torso_of_square_bag_keeps_the_real_chord():
    d = tutte_decompose(C6_CHORD)
    bag = next(t for t in d.torso_kind if "2" in d.bags[t])
    t = torso(d, C6_CHORD, bag)
    assert t.m == 4 and not any(e.startswith("~") for e in t.edge_ids)


def test_torso_adds_virtual_edge_across_missing_pair():
    k23 = graph([("u", "a"), ("a", "v"), ("u", "b"), ("b", "v"), ("u", "c"), ("c", "v")])
    d = tutte_decompose(k23)
    (sep,) = d.w2
    for t in d.neighbors(sep):
        tg = torso(d, k23, t)
        assert tg.m == 3 and "~adh:u:v" in tg.edge_ids


def test_rejects_graphs_with_a_cut_vertex():
    bowtie = graph([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "e"), ("e", "c")])
    with pytest.raises(NotTwoConnected):
        tutte_decompose(bowtie)


def test_validator_catches_a_corrupted_tree():
    d = tutte_decompose(K4_MINUS)
    bad = TutteDecomposition(d.bags, frozenset(), d.torso_kind)
    assert validate(bad, K4_MINUS)[0].startswith("(tree)")
    wrong_kind = TutteDecomposition(d.bags, d.tree_edges,
                                    {t: TorsoKind.THREE_CONNECTED for t in d.torso_kind})
    assert any(m.startswith("(torso)") for m in validate(wrong_kind, K4_MINUS))


def independent_torso_ok(d, g, t):
    x = to_nx(torso(d, g, t))
    if d.torso_kind[t] is TorsoKind.CYCLE:
        return nx.is_connected(x) and all(deg == 2 for _, deg in x.degree())
    return x.number_of_nodes() >= 4 and nx.node_connectivity(x) >= 3


@settings(max_examples=120, deadline=None)
@given(two_connected_graphs(3, 10))
def test_random_graphs_validate(g):
    d = tutte_decompose(g)
    assert validate(d, g) == []
    assert all(independent_torso_ok(d, g, t) for t in d.torso_kind)


@settings(max_examples=80, deadline=None)
@given(two_connected_graphs(3, 10))
def test_separators_are_separator_bags_and_cycle_chords(g):
    d = tutte_decompose(g)
    from_tree = {d.bags[t] for t in d.w2} | separator_pairs_in_cycle_bags(d, g)
    assert from_tree == {frozenset(p) for p in find_two_separators(g)}


@settings(max_examples=60, deadline=None)
@given(two_connected_graphs(3, 10), st.randoms(use_true_random=False))
def test_relabeling_gives_the_relabeled_decomposition(g, rnd):
    verts = g.sorted_vertices()
    names = [f"r{i}" for i in range(len(verts))]
    rnd.shuffle(names)
    sigma = dict(zip(verts, names))
    eids = sorted(g.edge_ids)
    rnd.shuffle(eids)
    g2 = LabeledGraph(names, {f"q{i}": tuple(sigma[x] for x in g.ends(e)) for i, e in enumerate(eids)})
    d = tutte_decompose(g)
    mapped = d.with_bags({t: frozenset(sigma[v] for v in b) for t, b in d.bags.items()})[0]
    assert decompositions_equal(tutte_decompose(g2), mapped)


@settings(max_examples=80, deadline=None)
@given(separable_graphs(4, 9), st.data())
def test_switch_patch_matches_fresh_decomposition(g, data):
    mv = data.draw(st.sampled_from(enumerate_moves(g)))
    patched, _ = switch_patch(tutte_decompose(g), mv.separator, mv.side_b)
    assert decompositions_equal(patched, tutte_decompose(apply_switch(g, mv)))
