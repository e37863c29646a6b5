import json
import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import nx_cycles
from wswitch.errors import ParseError, TooSmall, ValidationError
from wswitch.graph import is_two_connected
from wswitch.instances import (dumps, emit, from_json, gen_cycle_instance, gen_random_yes, gen_subdivided_instance,
                               parse, random_two_connected, to_json)
from wswitch.kernel import solve, switch_distance
from wswitch.reversals import PSCirc, PSLin, distance
from wswitch.tutte import TorsoKind, validate


def test_identity_cycle_instance_is_yes_at_zero():
    inst = gen_cycle_instance((1, 2, 3, 4, 5), 0)
    assert inst.is_phi_isomorphic()
    assert solve(inst).answer


def test_cycle_instance_layout():
    inst = gen_cycle_instance((3, 1, 2, 4), 0)
    assert inst.g.ends("e1") == ("u1", "u4")
    assert inst.phi["e3"] == "e1'" and inst.phi["e1"] == "e2'"
    inst.check()


def test_worked_cycle_instance():
    inst = gen_cycle_instance((3, 4, 1, 2, 5, 6), 2)
    assert solve(inst).answer
    assert not solve(inst.replace(k=1)).answer


@pytest.mark.parametrize("n", [4, 5, 6])
def test_cycle_distance_equals_circular_reversal_distance(n):
    rng = random.Random(n)
    perms = list(permutations(range(1, n + 1)))
    for pi in rng.sample(perms, min(len(perms), 30)):
        assert switch_distance(gen_cycle_instance(pi, 0)) == distance(PSCirc.of(pi))


def test_too_small():
    with pytest.raises(TooSmall):
        gen_cycle_instance((1, 2, 3), 0)
    with pytest.raises(TooSmall):
        gen_subdivided_instance((2, 1, 3), 0)
    with pytest.raises(TooSmall):
        gen_random_yes(3, 1, 0)


def test_not_a_permutation():
    with pytest.raises(ValidationError):
        gen_cycle_instance((1, 2, 2, 4), 0)


def test_identity_subdivided_instance_is_yes_at_zero():
    inst = gen_subdivided_instance((1, 2, 3, 4), 0)
    inst.check()
    assert inst.is_phi_isomorphic() and solve(inst).answer


def test_subdivided_2134_distance():
    inst = gen_subdivided_instance((2, 1, 3, 4), 0)
    all_plus = PSCirc.of(PSLin.of((2, 1, 3, 4), [1] * 4))
    assert switch_distance(inst) == distance(all_plus) == 3
    # the unsigned circular distance is smaller
    assert distance(PSCirc.of((2, 1, 3, 4))) == 1


@pytest.mark.parametrize("pi", [(2, 1, 3, 4), (3, 1, 4, 2), (1, 2, 3, 4, 5)])
def test_subdivided_graphs_are_series_parallel(pi):
    inst = gen_subdivided_instance(pi, 0)
    for g, d in ((inst.g, inst.dG), (inst.h, inst.dH)):
        assert is_two_connected(g)
        assert validate(d, g) == []
        assert set(d.torso_kind.values()) == {TorsoKind.CYCLE}
    n = len(pi)
    assert inst.g.n == n + sum(pi) and inst.g.m == n + sum(p + 1 for p in pi)


def test_random_yes_at_zero_is_phi_isomorphic():
    assert gen_random_yes(7, 0, 5).is_phi_isomorphic()


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 9), st.integers(0, 3), st.integers(0, 10**6))
def test_random_yes_instances_are_yes(n, k, seed):
    inst = gen_random_yes(n, k, seed)
    inst.check()
    res = solve(inst)
    assert res.answer


def test_fixed_seed_is_byte_identical():
    assert emit(gen_random_yes(8, 2, 11)) == emit(gen_random_yes(8, 2, 11))
    assert emit(gen_random_yes(8, 2, 11)) != emit(gen_random_yes(8, 2, 12))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(0, 10**6))
def test_ear_graphs_are_two_connected(n, seed):
    g = random_two_connected(n, random.Random(seed))
    assert g.n == n and is_two_connected(g)


# -- file format -----------------------------------------------------------------------

GENERATED = [gen_cycle_instance((3, 4, 1, 2, 5, 6), 2), gen_subdivided_instance((2, 1, 3, 4), 3),
             gen_random_yes(8, 2, 4), gen_random_yes(5, 0, 1)]


@pytest.mark.parametrize("idx", range(len(GENERATED)))
def test_round_trip(idx):
    raw = emit(GENERATED[idx])
    back = parse(raw)
    assert emit(back) == raw
    assert back.g == GENERATED[idx].g and back.phi == GENERATED[idx].phi
    assert json.loads(raw)["format"] == "ws/1"


def test_keys_are_sorted():
    text = emit(GENERATED[0]).decode()
    data = json.loads(text)
    assert text == json.dumps(data, sort_keys=True, indent=2) + "\n"


def _data():
    return to_json(gen_cycle_instance((3, 4, 1, 2, 5, 6), 2))


def test_missing_phi_edge():
    data = _data()
    data["phi"].pop("e1")
    with pytest.raises(ValidationError) as exc:
        from_json(data)
    assert exc.value.invariant == "phi not bijective"


def test_phi_breaking_cycles_is_rejected():
    data = to_json(gen_subdivided_instance((2, 1, 3, 4), 0))
    data["phi"]["e1"], data["phi"]["e2.1"] = data["phi"]["e2.1"], data["phi"]["e1"]
    inst = from_json(data, check=False)
    images = {frozenset(inst.phi[e] for e in c) for c in nx_cycles(inst.g)}
    assert images != nx_cycles(inst.h)
    with pytest.raises(ValidationError) as exc:
        from_json(data)
    assert exc.value.invariant == "not a 2-isomorphism"


def test_any_bijection_between_cycles_is_accepted():
    data = _data()
    images = sorted(data["phi"].values())
    random.Random(3).shuffle(images)
    data["phi"] = dict(zip(sorted(data["phi"]), images))
    from_json(data)


def test_parallel_edge_is_not_a_simple_graph():
    data = _data()
    data["h"]["edges"]["e1'"] = data["h"]["edges"]["e2'"][::-1]
    with pytest.raises(ValidationError, match="not a simple graph"):
        from_json(data)


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d.pop("k"), "top level"),
    (lambda d: d.update(k="2"), "k"),
    (lambda d: d.update(k=True), "k"),
    (lambda d: d.update(format="ws/0"), "format"),
    (lambda d: d["g"].update(vertices=[1, 2]), "g.vertices"),
    (lambda d: d["g"]["edges"].update(e1=["u1"]), "g.edges.e1"),
    (lambda d: d.update(meta=[]), "meta"),
])
def test_parse_error_locations(mutate, where):
    data = _data()
    mutate(data)
    with pytest.raises(ParseError) as exc:
        from_json(data)
    assert exc.value.where == where


def test_json_syntax_error_has_a_line():
    with pytest.raises(ParseError) as exc:
        parse(b'{"format": "ws/1",\n "g": }')
    assert exc.value.where.startswith("line 2")


def test_loop_is_not_a_simple_graph():
    data = _data()
    data["g"]["edges"]["e1"] = ["u1", "u1"]
    with pytest.raises(ValidationError, match="not a simple graph"):
        from_json(data)


def test_dumps_trailing_newline():
    assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
