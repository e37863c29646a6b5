"""The ten acceptance checks, shared by the test suite and ``ws selftest``.

Each check returns a :class:`Outcome`; a check passes only when every case
agrees exactly and the run stays inside its time budget.
"""

from __future__ import annotations

import math
import os
import random
import time
from collections.abc import Callable
from dataclasses import dataclass
from itertools import permutations

from .graph import LabeledGraph, all_cycles, find_two_separators, is_two_connected
from .instances import gen_cycle_instance, gen_random_yes, gen_subdivided_instance, random_two_connected
from .kernel import Instance, is_trivial_no_instance, kernel_size_bound, kernelize, solve, switch_distance, trivial_no_instance
from .reversals import (PSCirc, PSLin, bfs_distance, distance, representatives,
                        restricted_bfs_distance)
from .switching import apply_switch, enumerate_moves
from .tutte import TutteDecomposition, decompositions_equal, tutte_decompose, validate
from .twoiso import EdgeBijection, is_two_isomorphism


def base_seed() -> int:
    return int(os.environ.get("WS_SEED", "0"))


def _rng(tag: str) -> random.Random:
    return random.Random(f"{base_seed()}:{tag}")


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} :: {self.detail} ({self.seconds:.1f}s / {self.budget:g}s)"


def _timed(number: int, title: str, budget: float, body: Callable[[], tuple[bool, str]]) -> Outcome:
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    if dt >= budget:
        ok, detail = False, detail + "; over budget"
    return Outcome(number, title, ok, detail, dt, budget)


# -- 1 ---------------------------------------------------------------------------

def criterion_1() -> Outcome:
    def body():
        lin = bfs_distance(PSLin.of((3, 4, 1, 2)))[0]
        circ = bfs_distance(PSCirc.of((3, 4, 1, 2, 5, 6)))[0]
        return lin == 2 and circ == 2, f"d(3,4,1,2)={lin}, dc(3,4,1,2,5,6)={circ}"
    return _timed(1, "reversal worked values", 1, body)


# -- 2 ---------------------------------------------------------------------------

def ordered_signed_sample(count: int, rng: random.Random) -> list[PSCirc]:
    out = []
    for _ in range(count):
        n = rng.randint(3, 7)
        signs = [rng.choice((-1, 1)) for _ in range(n)]
        shift = rng.randrange(n)
        elems = list(zip(range(1, n + 1), signs))
        elems = elems[shift:] + elems[:shift]
        p = PSCirc.of(PSLin(tuple(elems)))
        if rng.random() < 0.5:
            p = PSCirc.of(PSLin(tuple((v, -s) for v, s in reversed(elems))))
        out.append(p)
    return out


def _negatives_in_order(p: PSCirc) -> int:
    for r in representatives(p):
        if r.values == tuple(range(1, p.n + 1)):
            return sum(1 for s in r.signs if s < 0)
    raise AssertionError("not ordered")


def criterion_2() -> Outcome:
    def body():
        cases = ordered_signed_sample(200, _rng("signs"))
        wrong = {}
        for p in cases:
            d, neg = distance(p), _negatives_in_order(p)
            if d != neg:
                wrong[str(p)] = (d, neg)
        detail = f"{len(cases) - sum(1 for p in cases if str(p) in wrong)}/{len(cases)} ordered signed permutations match"
        if wrong:
            detail += "; differ: " + ", ".join(f"{k} d={d} negatives={neg}" for k, (d, neg) in sorted(wrong.items()))
        return not wrong, detail
    return _timed(2, "ordered signed distance equals negative count", 60, body)


# -- 3 ---------------------------------------------------------------------------

def random_partially_signed(n: int, rng: random.Random, signs=(-1, 0, 1)) -> PSLin:
    values = list(range(1, n + 1))
    rng.shuffle(values)
    return PSLin.of(values, [rng.choice(signs) for _ in values])


def criterion_3() -> Outcome:
    def body():
        rng = _rng("linearize")
        bad = 0
        for _ in range(100):
            p = PSCirc.of(random_partially_signed(rng.randint(3, 6), rng))
            circ = distance(p)
            lin = min(distance(r) for r in representatives(p))
            bad += circ != lin
        return bad == 0, f"{100 - bad}/100 circular distances equal the best linear representative"
    return _timed(3, "circular distance via linear representatives", 120, body)


# -- 4 ---------------------------------------------------------------------------

def planted_strip(n: int, length: int, circular: bool, rng: random.Random) -> PSLin:
    """Permutation whose first ``length`` positions form a canonically signed strip."""
    while True:
        if circular:
            first = rng.randint(1, n)
            run = [(first - 1 + i) % n + 1 for i in range(length)]
        else:
            first = rng.randint(1, n - length + 1)
            run = [first + i for i in range(length)]
        rest = [v for v in range(1, n + 1) if v not in run]
        rng.shuffle(rest)
        down = rng.random() < 0.5
        head = [(v, -1 if down else 1) for v in (reversed(run) if down else run)]
        tail = [(v, rng.choice((-1, 0, 1))) for v in rest]
        p = PSLin(tuple(head + tail))
        strips = [iv for iv in _strips(p, circular) if _len(iv, n) >= length]
        if strips:
            return p


def _strips(p: PSLin, circular: bool):
    from .reversals import find_strips
    return find_strips(PSCirc.of(p) if circular else p)


def _len(iv, n):
    from .reversals import strip_length
    return strip_length(iv, n)


def criterion_4() -> Outcome:
    def body():
        rng = _rng("strips")
        bad_c = bad_l = 0
        for _ in range(50):
            p = PSCirc.of(planted_strip(7, rng.choice((5, 6)), True, rng))
            bad_c += restricted_bfs_distance(p)[0] != distance(p)
        for _ in range(50):
            p = planted_strip(rng.randint(4, 6), 3, False, rng)
            bad_l += restricted_bfs_distance(p)[0] != distance(p)
        ok = bad_c == 0 and bad_l == 0
        return ok, f"circular {50 - bad_c}/50, linear {50 - bad_l}/50 strip-preserving optima"
    return _timed(4, "strip-preserving search keeps the optimum", 180, body)


# -- 5 ---------------------------------------------------------------------------

def criterion_5() -> Outcome:
    def body():
        rng = _rng("cycles")
        cases = [p for p in permutations(range(1, 6))]
        seen = set()
        for _ in range(50):
            while True:
                p = list(range(1, 8))
                rng.shuffle(p)
                key = PSCirc.of(p).canonical
                if key not in seen:
                    seen.add(key)
                    break
            cases.append(tuple(p))
        classes5 = len({PSCirc.of(p).canonical for p in cases if len(p) == 5})
        bad = 0
        for p in cases:
            bad += switch_distance(gen_cycle_instance(p, 0)) != distance(PSCirc.of(p))
        return bad == 0, (f"{len(cases) - bad}/{len(cases)} cycle instances "
                          f"({classes5} classes at n=5, 50 at n=7) match")
    return _timed(5, "switch distance on cycles equals circular reversal distance", 300, body)


# -- 6, 7, 8 ---------------------------------------------------------------------

def kernel_corpus() -> list[Instance]:
    rng = _rng("kernel")
    out: list[Instance] = []
    for i in range(70):
        n, k = rng.randint(4, 8), rng.randint(0, 3)
        inst = gen_random_yes(n, k, base_seed() * 1000 + i)
        out.append(inst.replace(k=k if i % 2 == 0 else max(k - 1, 0)))
    for _ in range(20):
        p = list(range(1, rng.randint(5, 7) + 1))
        rng.shuffle(p)
        out.append(gen_cycle_instance(p, rng.randint(0, 3)))
    for _ in range(10):
        p = list(range(1, rng.choice((4, 5)) + 1))
        rng.shuffle(p)
        out.append(gen_subdivided_instance(p, rng.randint(1, 3)))
    t = trivial_no_instance()
    out += [t, t.replace(k=1)]
    return out


@dataclass
class KernelRun:
    inst: Instance
    b: int
    answer: bool
    opt: int | None
    kernel: Instance
    kernel_answer: bool


def kernel_runs() -> list[KernelRun]:
    runs = []
    for inst in kernel_corpus():
        res = solve(inst)
        kern, _ = kernelize(inst)
        runs.append(KernelRun(inst, inst.breakpoints, res.answer,
                              len(res.switches) if res.answer else None, kern, solve(kern).answer))
    return runs


_RUNS: list[KernelRun] | None = None


def _cached_runs() -> list[KernelRun]:
    global _RUNS
    if _RUNS is None:
        _RUNS = kernel_runs()
    return _RUNS


def criterion_6() -> Outcome:
    def body():
        runs = _cached_runs()
        wrong = [r for r in runs if r.answer != r.kernel_answer]
        yes = sum(r.answer for r in runs)
        detail = f"{len(runs) - len(wrong)}/{len(runs)} kernels agree ({yes} YES, {len(runs) - yes} NO)"
        if wrong:
            names = sorted({f"{r.inst.meta.get('generator')} {r.inst.meta.get('pi', r.inst.meta.get('seed'))} k={r.inst.k}"
                            for r in wrong})
            detail += "; disagree: " + ", ".join(names)
        return not wrong, detail
    return _timed(6, "kernel safeness", 600, body)


def criterion_7() -> Outcome:
    def body():
        runs = _cached_runs()
        reduced = [r for r in runs if not is_trivial_no_instance(r.kernel)]
        stopped = [r for r in runs if is_trivial_no_instance(r.kernel)]
        over = [r for r in reduced if r.kernel.g.n > kernel_size_bound(r.b)]
        zero = [r for r in reduced if r.b == 0]
        not3 = [r for r in zero if r.kernel.g.n != 3]
        zero_stopped = sum(r.b == 0 for r in stopped)
        ok = not over and not not3
        return ok, (f"{len(reduced) - len(over)}/{len(reduced)} reduced kernels within bound, "
                    f"{len(zero) - len(not3)}/{len(zero)} with b=0 have 3 vertices; "
                    f"{len(stopped)} stopped as the trivial no-instance ({zero_stopped} with b=0)")
    return _timed(7, "kernel size bound", 600, body)


def criterion_8() -> Outcome:
    def body():
        runs = [r for r in _cached_runs() if r.answer]
        bad = [r for r in runs if not (math.ceil(r.b / 2) <= r.opt <= r.inst.g.n - 2)]
        return not bad, f"{len(runs) - len(bad)}/{len(runs)} optimal YES solutions inside the bounds"
    return _timed(8, "lower and upper bounds on the optimum", 600, body)


# -- 9 ---------------------------------------------------------------------------

def relabel_decomposition(d: TutteDecomposition, sigma: dict) -> TutteDecomposition:
    return d.with_bags({t: frozenset(sigma[v] for v in bag) for t, bag in d.bags.items()})[0]


def shuffled_copy(g: LabeledGraph, rng: random.Random) -> tuple[LabeledGraph, dict]:
    verts = g.sorted_vertices()
    names = [f"y{i}" for i in range(len(verts))]
    rng.shuffle(names)
    sigma = dict(zip(verts, names))
    eids = sorted(g.edge_ids)
    new_ids = [f"z{i}" for i in range(len(eids))]
    rng.shuffle(new_ids)
    edges = {ne: tuple(sigma[x] for x in g.ends(e)) for e, ne in zip(eids, new_ids)}
    return LabeledGraph(names, edges), sigma


def criterion_9() -> Outcome:
    def body():
        rng = _rng("tutte")
        violations = mismatches = 0
        for _ in range(200):
            g = random_two_connected(rng.randint(3, 10), rng, chords=rng.choice((0.0, 0.2, 0.5)))
            d = tutte_decompose(g)
            violations += len(validate(d, g))
            g2, sigma = shuffled_copy(g, rng)
            mismatches += not decompositions_equal(tutte_decompose(g2), relabel_decomposition(d, sigma))
        ok = violations == 0 and mismatches == 0
        return ok, f"{violations} violations, {mismatches} relabeling mismatches over 200 graphs"
    return _timed(9, "decomposition validator", 120, body)


# -- 10 --------------------------------------------------------------------------

def criterion_10() -> Outcome:
    def body():
        rng = _rng("switch")
        bad = done = 0
        while done < 500:
            g = random_two_connected(rng.randint(4, 8), rng, chords=rng.choice((0.0, 0.2, 0.4)))
            if not find_two_separators(g):
                continue
            mv = rng.choice(enumerate_moves(g))
            g2 = apply_switch(g, mv)
            ok = (apply_switch(g2, mv) == g and all_cycles(g2) == all_cycles(g) and is_two_connected(g2)
                  and is_two_isomorphism(g, g2, EdgeBijection.identity(g.edge_ids)))
            bad += not ok
            done += 1
        return bad == 0, f"{500 - bad}/500 switches are involutions preserving every cycle"
    return _timed(10, "switch algebra", 60, body)


ALL = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
       criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(echo: Callable[[str], None] | None = print) -> list[Outcome]:
    out = []
    for fn in ALL:
        res = fn()
        if echo:
            echo(res.line())
        out.append(res)
    return out
