"""Small instances where the expected identities break.

1. All-negative ordered circular permutations of even length sort in n-1
   reversals, one fewer than their number of negative elements.
2. The linear distance from a rotation of one permutation to the same
   rotation of another, or of its negation, depends on the rotation.
3. On the subdivided instance of (1,4,3,2) the kernel answers NO at k=3
   although three switches suffice.

    python demos/counterexamples.py
"""

from wswitch.instances import gen_subdivided_instance
from wswitch.kernel import kernelize, solve
from wswitch.reversals import PSCirc, PSLin, bfs_distance, distance

print("1. all-negative ordered permutations")
for n in range(3, 8):
    p = PSCirc.of(PSLin.of(tuple(range(1, n + 1)), [-1] * n))
    d, seq = bfs_distance(p)
    print(f"  n={n}: {n} negatives, distance {d}, {seq}")

print("\n2. paired rotations")
pi, sigma = PSLin(((1, -1), (2, -1), (3, -1))), PSLin(((1, 1), (3, -1), (2, 1)))
for h in range(3):
    a, b = pi.rotate(h), sigma.rotate(h)
    d = min(bfs_distance(a, target=b)[0], bfs_distance(a, target=b.negation())[0])
    print(f"  h={h}: {a} to {b} or its negation in {d}")

print("\n3. subdivided (1,4,3,2)")
inst = gen_subdivided_instance((1, 4, 3, 2), 3)
res = solve(inst)
print(f"  solve at k=3: {res.label} with {len(res.switches)} switches, breakpoints {inst.breakpoints}")
print(f"  signed all-plus circular distance {distance(PSCirc.of(PSLin.of((1, 4, 3, 2), [1] * 4)))}")
kern, trace = kernelize(inst)
print(f"  kernel: {trace.counts()}, n={kern.g.n} k={kern.k}, solve kernel: {solve(kern).label}")
for k in (4, 5):
    kk, _ = kernelize(inst.replace(k=k))
    print(f"  at k={k} the kernel answers {solve(kk).label}")
