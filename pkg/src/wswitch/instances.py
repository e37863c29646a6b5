"""Instance generators and the ``ws/1`` JSON file format."""

from __future__ import annotations

import json
import random
from collections.abc import Mapping, Sequence

from .errors import GenerationFailed, ParseError, TooSmall, ValidationError, WSError
from .graph import LabeledGraph, find_two_separators
from .kernel import Instance
from .switching import apply_switch, enumerate_moves
from .twoiso import EdgeBijection

FORMAT = "ws/1"
MAX_TRIES = 200


def _check_perm(pi: Sequence[int]) -> tuple[int, ...]:
    pi = tuple(int(x) for x in pi)
    if len(pi) < 4:
        raise TooSmall(f"need at least 4 elements, got {len(pi)}")
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ValidationError("not a permutation", f"{pi} is not a permutation of 1..{len(pi)}")
    return pi


def _cycle_edges(names: Sequence[str], prefix: str, suffix: str = "") -> dict[str, tuple[str, str]]:
    n = len(names)
    return {f"{prefix}{i}{suffix}": (names[i - 2], names[i - 1]) for i in range(1, n + 1)}


def gen_cycle_instance(pi_c: Sequence[int], k: int) -> Instance:
    """Two n-cycles whose bijection reads ``pi_c`` off H's edge order.

    G has edges ``e1..en`` and H has ``e1'..en'`` in cycle order; ``e_{pi_j}``
    is sent to ``e_j'``.
    """
    pi = _check_perm(pi_c)
    n = len(pi)
    us = [f"u{i}" for i in range(1, n + 1)]
    vs = [f"v{i}" for i in range(1, n + 1)]
    g = LabeledGraph(us, _cycle_edges(us, "e"))
    h = LabeledGraph(vs, _cycle_edges(vs, "e", "'"))
    phi = EdgeBijection({f"e{p}": f"e{j}'" for j, p in enumerate(pi, 1)})
    return Instance(g, h, phi, k, {"generator": "cycle", "pi": list(pi)})


def _subdivided_graph(order: Sequence[int], cyc: str, pth: str, vert: str) -> tuple[LabeledGraph, dict]:
    """Cycle plus, for position i, a parallel path of length ``order[i]+1``."""
    n = len(order)
    cv = [f"{vert}{i}" for i in range(1, n + 1)]
    verts = list(cv)
    edges = _cycle_edges(cv, cyc)
    tracks = {}
    for i, length in enumerate(order, 1):
        inner = [f"{pth}{i}.{j}" for j in range(1, length + 1)]
        verts += inner
        walk = [cv[i - 2], *inner, cv[i - 1]]
        ids = [f"{cyc}{i}.{j}" for j in range(1, len(walk))]
        for e, a, b in zip(ids, walk, walk[1:]):
            edges[e] = (a, b)
        tracks[i] = ids
    return LabeledGraph(verts, edges), tracks


def gen_subdivided_instance(pi_c: Sequence[int], k: int) -> Instance:
    """Series-parallel pair: a cycle with one parallel path per cycle edge.

    Each path is an oriented block, so the labeled switch distance equals the
    signed circular reversal distance of ``pi_c`` with every sign positive.
    """
    pi = _check_perm(pi_c)
    n = len(pi)
    g, g_tracks = _subdivided_graph(pi, "e", "p", "u")
    h, h_tracks = _subdivided_graph(range(1, n + 1), "f", "q", "v")
    fwd = {}
    for i, p in enumerate(pi, 1):
        fwd[f"e{i}"] = f"f{p}"
        fwd.update(zip(g_tracks[i], h_tracks[p]))
    return Instance(g, h, EdgeBijection(fwd), k, {"generator": "subdivided", "pi": list(pi)})


def _random_graph(n: int, rng: random.Random) -> LabeledGraph | None:
    order = [f"v{i}" for i in range(1, n + 1)]
    rng.shuffle(order)
    pairs = [(order[i], order[(i + 1) % n]) for i in range(n)]
    have = {frozenset(p) for p in pairs}
    for _ in range(rng.randint(0, max(1, n // 2))):
        a, b = rng.sample(order, 2)
        if frozenset((a, b)) not in have:
            have.add(frozenset((a, b)))
            pairs.append((a, b))
    g = LabeledGraph.from_pairs(pairs)
    return g if find_two_separators(g) else None


def gen_random_yes(n: int, k: int, seed: int) -> Instance:
    """Hamiltonian cycle plus chords; H is ``k`` random switches away from G."""
    if n < 4:
        raise TooSmall(f"need at least 4 vertices, got {n}")
    rng = random.Random(seed)
    for _ in range(MAX_TRIES):
        g = _random_graph(n, rng)
        if g is None:
            continue
        h = g
        for _ in range(k):
            h = apply_switch(h, rng.choice(enumerate_moves(h)))
        meta = {"generator": "random", "seed": seed, "expected": "YES"}
        return Instance(g, h, EdgeBijection.identity(g.edge_ids), k, meta)
    raise GenerationFailed(f"no graph with a 2-separator after {MAX_TRIES} tries (n={n}, seed={seed})")


def random_two_connected(n: int, rng: random.Random, chords: float = 0.3) -> LabeledGraph:
    """Random 2-connected simple graph on ``n`` vertices grown by open ears."""
    if n < 3:
        raise TooSmall(f"need at least 3 vertices, got {n}")
    start = rng.randint(3, min(n, 6))
    names = [f"x{i}" for i in range(1, n + 1)]
    rng.shuffle(names)
    placed = names[:start]
    pairs = [(placed[i], placed[(i + 1) % start]) for i in range(start)]
    have = {frozenset(p) for p in pairs}
    rest = names[start:]
    while rest:
        inner = [rest.pop() for _ in range(min(len(rest), rng.randint(1, 3)))]
        a, b = rng.sample(placed, 2)
        walk = [a, *inner, b]
        for p in zip(walk, walk[1:]):
            pairs.append(p)
            have.add(frozenset(p))
        placed += inner
    for _ in range(int(chords * n)):
        a, b = rng.sample(placed, 2)
        if frozenset((a, b)) not in have:
            have.add(frozenset((a, b)))
            pairs.append((a, b))
    return LabeledGraph.from_pairs(pairs)


# -- file format ------------------------------------------------------------

def to_json(inst: Instance) -> dict:
    return {"format": FORMAT, "g": inst.g.to_json(), "h": inst.h.to_json(),
            "phi": inst.phi.to_json(), "k": inst.k, "meta": dict(inst.meta)}


def dumps(data: Mapping) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def emit(inst: Instance) -> bytes:
    return dumps(to_json(inst)).encode()


def _field(data: Mapping, key: str, kind: type, where: str):
    if not isinstance(data, Mapping) or key not in data:
        raise ParseError(f"missing field {key!r}", where or "top level")
    val = data[key]
    if not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
        raise ParseError(f"field {key!r} must be {kind.__name__}", f"{where}.{key}".lstrip("."))
    return val


def _parse_graph(data: Mapping, where: str) -> LabeledGraph:
    verts = _field(data, "vertices", list, where)
    edges = _field(data, "edges", dict, where)
    if not all(isinstance(v, str) for v in verts):
        raise ParseError("vertex ids must be strings", f"{where}.vertices")
    if len(set(verts)) != len(verts):
        raise ParseError("duplicate vertex id", f"{where}.vertices")
    for e, ends in edges.items():
        if not (isinstance(ends, list) and len(ends) == 2 and all(isinstance(x, str) for x in ends)):
            raise ParseError("edge must list two vertex ids", f"{where}.edges.{e}")
    try:
        return LabeledGraph(verts, edges)
    except WSError as exc:
        raise ValidationError("not a simple graph", f"{where}: {exc}") from exc


def from_json(data: Mapping, check: bool = True) -> Instance:
    fmt = _field(data, "format", str, "")
    if fmt != FORMAT:
        raise ParseError(f"unsupported format {fmt!r}", "format")
    g = _parse_graph(_field(data, "g", dict, ""), "g")
    h = _parse_graph(_field(data, "h", dict, ""), "h")
    phi_raw = _field(data, "phi", dict, "")
    if not all(isinstance(f, str) for f in phi_raw.values()):
        raise ParseError("phi values must be edge ids", "phi")
    k = _field(data, "k", int, "")
    meta = data.get("meta", {})
    if not isinstance(meta, Mapping):
        raise ParseError("meta must be an object", "meta")
    inst = Instance(g, h, EdgeBijection(phi_raw), k, meta)
    if check:
        inst.check()
    return inst


def parse(raw: bytes | str, check: bool = True) -> Instance:
    text = raw.decode() if isinstance(raw, bytes) else raw
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(data, Mapping):
        raise ParseError("instance must be a JSON object", "line 1")
    return from_json(data, check)
