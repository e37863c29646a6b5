"""Partially signed permutations, reversals and exact reversal distances.

Signs are -1, 0 or +1, where 0 means "no sign".  Reversing an interval
reverses its order and negates its signs (zero stays zero).  Circular
permutations are classes under rotation and under reflection, a reflection
also negating every sign.

Distances are exact breadth-first searches.  Zero signs travel with their
values, so for the identity target the goal state is unique once the set of
unsigned values is fixed; a single backward search from it then answers
every query with that zero set (see :func:`distance_table`).
"""

from __future__ import annotations

import re
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .errors import IndexOutOfRange, NotOrdered, TooLarge, WSError

BFS_CAP = 8

Elem = tuple[int, int]


def _check_perm(elems: Sequence[Elem]) -> None:
    values = sorted(v for v, _ in elems)
    if values != list(range(1, len(elems) + 1)):
        raise WSError(f"values {values} are not a permutation of 1..{len(elems)}")
    if any(s not in (-1, 0, 1) for _, s in elems):
        raise WSError("signs must be -1, 0 or +1")


@dataclass(frozen=True, order=True)
class PSLin:
    """Partially signed linear permutation."""

    elems: tuple[Elem, ...]

    def __post_init__(self):
        _check_perm(self.elems)

    @classmethod
    def of(cls, values: Iterable[int], signs: Iterable[int] | None = None) -> PSLin:
        values = list(values)
        signs = [0] * len(values) if signs is None else list(signs)
        return cls(tuple(zip(values, signs)))

    @classmethod
    def identity(cls, n: int, sign: int = 1) -> PSLin:
        return cls(tuple((i, sign) for i in range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> PSLin:
        """Parse ``"-3,+4,1,2"``; an unprefixed value has sign 0."""
        elems = []
        for tok in text.replace(" ", "").split(","):
            m = re.fullmatch(r"([+-]?)(\d+)", tok)
            if not m:
                raise WSError(f"bad permutation element {tok!r}")
            elems.append((int(m.group(2)), {"+": 1, "-": -1, "": 0}[m.group(1)]))
        return cls(tuple(elems))

    @property
    def n(self) -> int:
        return len(self.elems)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.elems)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, s in self.elems)

    def zero_values(self) -> frozenset[int]:
        return frozenset(v for v, s in self.elems if s == 0)

    def negation(self) -> PSLin:
        return PSLin(tuple((v, -s) for v, s in reversed(self.elems)))

    def rotate(self, h: int) -> PSLin:
        h %= self.n
        return PSLin(self.elems[h:] + self.elems[:h])

    def agrees_with(self, target: PSLin) -> bool:
        return (self.values == target.values and
                all(s == 0 or s == t for s, t in zip(self.signs, target.signs)))

    def __str__(self) -> str:
        return ",".join({1: "+", -1: "-", 0: ""}[s] + str(v) for v, s in self.elems)


def _canonical(elems: tuple[Elem, ...]) -> tuple[Elem, ...]:
    # the least member starts with value 1, so only two candidates matter
    n = len(elems)
    p = next(i for i, (v, _) in enumerate(elems) if v == 1)
    fwd = elems[p:] + elems[:p]
    refl = tuple((v, -s) for v, s in reversed(elems))
    q = n - 1 - p
    back = refl[q:] + refl[:q]
    return min(fwd, back)


def _representatives(elems: tuple[Elem, ...]) -> list[tuple[Elem, ...]]:
    n = len(elems)
    refl = tuple((v, -s) for v, s in reversed(elems))
    return [elems[h:] + elems[:h] for h in range(n)] + [refl[h:] + refl[:h] for h in range(n)]


@dataclass(frozen=True, order=True)
class PSCirc:
    """Partially signed circular permutation, stored by its least representative."""

    canonical: PSLin

    @classmethod
    def of(cls, p: PSLin | Iterable[int], signs: Iterable[int] | None = None) -> PSCirc:
        if not isinstance(p, PSLin):
            p = PSLin.of(p, signs)
        return cls(PSLin(_canonical(p.elems)))

    @classmethod
    def parse(cls, text: str) -> PSCirc:
        return cls.of(PSLin.parse(text))

    @property
    def n(self) -> int:
        return self.canonical.n

    def contains(self, p: PSLin) -> bool:
        return _canonical(p.elems) == self.canonical.elems

    def __str__(self) -> str:
        return "(" + str(self.canonical) + ")c"


def representatives(p: PSCirc) -> list[PSLin]:
    """All rotations and sign-negating reflections of the class (2n of them)."""
    return [PSLin(r) for r in _representatives(p.canonical.elems)]


# -- reversals ---------------------------------------------------------------

def _rev(elems: tuple[Elem, ...], i: int, j: int) -> tuple[Elem, ...]:
    mid = tuple((v, -s) for v, s in reversed(elems[i - 1:j]))
    return elems[:i - 1] + mid + elems[j:]


def _rev_circ(elems: tuple[Elem, ...], i: int, j: int) -> tuple[Elem, ...]:
    if i <= j:
        return _rev(elems, i, j)
    neg = lambda seg: tuple((v, -s) for v, s in reversed(seg))  # noqa: E731
    return neg(elems[i - 1:]) + elems[j:i - 1] + neg(elems[:j])


def reverse_linear(p: PSLin, i: int, j: int) -> PSLin:
    if not 1 <= i <= j <= p.n:
        raise IndexOutOfRange(f"reversal ({i},{j}) outside 1..{p.n}")
    return PSLin(_rev(p.elems, i, j))


def reverse_circular(p: PSCirc, i: int, j: int) -> PSCirc:
    """Circular reversal at positions of the canonical representative.

    For ``i > j`` the reversed arc wraps around through position ``n``.
    """
    n = p.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"reversal ({i},{j}) outside 1..{n}")
    return PSCirc(PSLin(_canonical(_rev_circ(p.canonical.elems, i, j))))


def _linear_moves(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def _circular_moves(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def _step_linear(elems, move):
    return _rev(elems, *move)


def _step_circular(elems, move):
    return _canonical(_rev_circ(elems, *move))


# -- strips -------------------------------------------------------------------

def _link(a: Elem, b: Elem, n: int, circular: bool) -> bool:
    (x, s), (y, t) = a, b
    up = y == x + 1 or (circular and x == n and y == 1)
    down = y == x - 1 or (circular and x == 1 and y == n)
    return (up and s >= 0 and t >= 0) or (down and s <= 0 and t <= 0)


def find_strips(p: PSLin | PSCirc) -> list[tuple[int, int]]:
    """Signed strips as 1-based position intervals ``(start, end)``.

    For a circular permutation positions refer to the canonical representative
    and an interval with ``start > end`` wraps around.
    """
    if isinstance(p, PSCirc):
        elems, circular = p.canonical.elems, True
    else:
        elems, circular = p.elems, False
    n = len(elems)
    links = [_link(elems[h], elems[h + 1], n, circular) for h in range(n - 1)]
    if circular:
        links.append(_link(elems[-1], elems[0], n, True))
        if all(links):
            return [(1, n)]
        # start scanning right after a break so no strip straddles the scan start
        first = next(h for h in range(n) if not links[h])
        out = []
        start = (first + 1) % n
        pos = start
        for _ in range(n):
            nxt = (pos + 1) % n
            if not links[pos]:
                out.append((start + 1, pos + 1))
                start = nxt
            pos = nxt
        return sorted(out)
    out = []
    start = 0
    for h in range(n):
        if h == n - 1 or not links[h]:
            out.append((start + 1, h + 1))
            start = h + 1
    return out


def strip_values(p: PSLin | PSCirc, interval: tuple[int, int]) -> frozenset[int]:
    elems = p.canonical.elems if isinstance(p, PSCirc) else p.elems
    n = len(elems)
    i, j = interval
    idx = range(i - 1, j) if i <= j else list(range(i - 1, n)) + list(range(j))
    return frozenset(elems[h][0] for h in idx)


def strip_length(interval: tuple[int, int], n: int) -> int:
    i, j = interval
    return j - i + 1 if i <= j else n - i + 1 + j


# -- breadth-first search -------------------------------------------------------

def _is_sorted(elems, circular: bool) -> bool:
    cands = [elems]
    if circular:
        # the ordered representative starts at 1 in one of the two orientations
        refl = tuple((v, -s) for v, s in reversed(elems))
        p = next(i for i, (v, _) in enumerate(refl) if v == 1)
        cands.append(refl[p:] + refl[:p])
    return any(all(v == i + 1 and s >= 0 for i, (v, s) in enumerate(c)) for c in cands)


def _goal_test(circular: bool, target: PSLin | PSCirc | None):
    if target is None:
        return lambda elems: _is_sorted(elems, circular)
    if circular:
        tc = target if isinstance(target, PSCirc) else PSCirc.of(target)
        reps = [PSLin(r) for r in _representatives(tc.canonical.elems)]
        if any(0 in r.signs for r in reps):
            raise WSError("target must be fully signed")

        def goal(elems):
            mine = [PSLin(r) for r in _representatives(elems)]
            return any(m.agrees_with(r) for m in mine for r in reps)
        return goal
    tl = target
    if 0 in tl.signs:
        raise WSError("target must be fully signed")
    return lambda elems: PSLin(elems).agrees_with(tl)


def bfs_distance(p: PSLin | PSCirc, target: PSLin | PSCirc | None = None,
                 forbid: Iterable[frozenset[int]] = ()) -> tuple[int, list[tuple[int, int]]]:
    """Exact reversal distance and one optimal sequence of reversals.

    ``target`` defaults to the signed identity.  Each move in the returned
    sequence is relative to the state it is applied to (for circular inputs,
    to that state's canonical representative).  ``forbid`` lists value sets
    that no reversal may cut.
    """
    circular = isinstance(p, PSCirc)
    n = p.n
    if n > BFS_CAP:
        raise TooLarge(f"reversal BFS is capped at n={BFS_CAP}, got {n}")
    start = p.canonical.elems if circular else p.elems
    goal = _goal_test(circular, target)
    moves = _circular_moves(n) if circular else _linear_moves(n)
    step = _step_circular if circular else _step_linear
    forbid = [frozenset(s) for s in forbid]
    prev: dict[tuple, tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if goal(cur):
            path = []
            while prev[cur] is not None:
                cur, mv = prev[cur]
                path.append(mv)
            path.reverse()
            return len(path), path
        for mv in moves:
            if forbid and _cuts(cur, mv, forbid, circular):
                continue
            nxt = step(cur, mv)
            if nxt not in prev:
                prev[nxt] = (cur, mv)
                queue.append(nxt)
    raise WSError("target unreachable")


def _cuts(elems, move, forbid, circular) -> bool:
    i, j = move
    n = len(elems)
    idx = range(i - 1, j) if i <= j else list(range(i - 1, n)) + list(range(j))
    moved = {elems[h][0] for h in idx}
    return any(s & moved and not s <= moved for s in forbid)


def protected_strips(p: PSLin | PSCirc, min_len: int) -> list[frozenset[int]]:
    n = p.n
    return [strip_values(p, iv) for iv in find_strips(p) if strip_length(iv, n) >= min_len]


def restricted_bfs_distance(p: PSLin | PSCirc, min_len: int | None = None) -> tuple[int, list[tuple[int, int]]]:
    """Distance when no reversal may cut a long signed strip of ``p`` itself.

    The threshold defaults to 5 elements for circular and 3 for linear inputs.
    """
    if min_len is None:
        min_len = 5 if isinstance(p, PSCirc) else 3
    return bfs_distance(p, forbid=protected_strips(p, min_len))


@lru_cache(maxsize=None)
def distance_table(circular: bool, n: int, zero_values: frozenset[int]) -> dict[tuple, int]:
    """Distances to the signed identity for every state with the given unsigned values.

    Reversals are involutions and zero signs never change, so a backward
    search from the single goal state reaches all of these states.
    """
    if n > BFS_CAP:
        raise TooLarge(f"reversal BFS is capped at n={BFS_CAP}, got {n}")
    goal = tuple((v, 0 if v in zero_values else 1) for v in range(1, n + 1))
    if circular:
        goal = _canonical(goal)
    moves = _circular_moves(n) if circular else _linear_moves(n)
    step = _step_circular if circular else _step_linear
    dist = {goal: 0}
    queue = deque([goal])
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        for mv in moves:
            nxt = step(cur, mv)
            if nxt not in dist:
                dist[nxt] = d
                queue.append(nxt)
    return dist


def distance(p: PSLin | PSCirc) -> int:
    """Distance to the signed identity, answered from :func:`distance_table`."""
    circular = isinstance(p, PSCirc)
    elems = p.canonical.elems if circular else p.elems
    return distance_table(circular, p.n, frozenset(v for v, s in elems if s == 0))[elems]


# -- ordered signed circular permutations ----------------------------------------

def ordered_representative(p: PSCirc) -> PSLin:
    for r in representatives(p):
        if r.values == tuple(range(1, p.n + 1)):
            return r
    raise NotOrdered("values are not in circular identity order")


def sort_ordered_signed(p: PSCirc) -> list[tuple[int, int]]:
    """Trivial reversals at the negative positions of the ordered representative.

    Positions refer to :func:`ordered_representative`; trivial reversals do not
    move elements, so applying them there in any order works.
    """
    rep = ordered_representative(p)
    if 0 in rep.signs:
        raise NotOrdered("every element must carry a sign")
    return [(i, i) for i, s in enumerate(rep.signs, 1) if s == -1]


def apply_linear_sequence(p: PSLin, seq: Iterable[tuple[int, int]]) -> PSLin:
    for i, j in seq:
        p = reverse_linear(p, i, j)
    return p


def apply_circular_sequence(p: PSCirc, seq: Iterable[tuple[int, int]]) -> PSCirc:
    for i, j in seq:
        p = reverse_circular(p, i, j)
    return p


def is_sorted(p: PSLin | PSCirc) -> bool:
    if isinstance(p, PSCirc):
        return _is_sorted(p.canonical.elems, True)
    return _is_sorted(p.elems, False)
