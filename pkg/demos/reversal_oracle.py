"""Reversal oracles and the cycle correspondence.

Sorts a few permutations by breadth-first search, then builds the matching
pair of cycles and checks that the switch distance between them is the
circular reversal distance.

    python demos/reversal_oracle.py
"""

from wswitch.instances import gen_cycle_instance
from wswitch.kernel import solve, switch_distance
from wswitch.reversals import PSCirc, PSLin, apply_circular_sequence, bfs_distance, distance


def show_linear(values):
    p = PSLin.of(values)
    d, seq = bfs_distance(p)
    print(f"linear {p}: distance {d}, reversals {seq}")


def show_circular(values):
    p = PSCirc.of(values)
    d, seq = bfs_distance(p)
    print(f"circular {p}: distance {d}, reversals {seq}")
    print(f"  after sorting: {apply_circular_sequence(p, seq)}")
    return d


show_linear((3, 4, 1, 2))
show_linear((2, 4, 1, 3))
d = show_circular((3, 4, 1, 2, 5, 6))

inst = gen_cycle_instance((3, 4, 1, 2, 5, 6), d)
res = solve(inst)
print(f"\ncycle instance with k={d}: {res.label}, {len(res.switches)} switches")
for move in res.switches:
    print(f"  switch at {move.separator}, flipping {sorted(move.side_b)}")
print(f"with k={d - 1}: {solve(inst.replace(k=d - 1)).label}")

print("\nswitch distance against circular reversal distance on n=5:")
for pi in [(2, 1, 3, 4, 5), (3, 5, 2, 4, 1), (5, 4, 3, 2, 1), (2, 4, 1, 5, 3)]:
    print(f"  {pi}: switches {switch_distance(gen_cycle_instance(pi, 0))}, reversals {distance(PSCirc.of(pi))}")
