"""Kernelization of a random YES instance, step by step.

Prints the breakpoint number, every rule application in the trace, the
size of the reduced instance and the answer of the exact solver on both.

    python demos/kernel_walkthrough.py [n] [k] [seed]
"""

import sys

from wswitch.instances import gen_random_yes
from wswitch.kernel import kernel_size_bound, kernelize, solve

n, k, seed = (list(map(int, sys.argv[1:4])) + [9, 2, 7][len(sys.argv) - 1:])[:3]
inst = gen_random_yes(n, k, seed)
print(f"instance: n={inst.g.n} m={inst.g.m} k={inst.k} breakpoints={inst.breakpoints}")

kern, trace = kernelize(inst, validate=True)
for step in trace.steps:
    parts = [f"rule {step['rule']}"]
    for key, val in step.items():
        if key == "rule" or key.startswith(("h_", "phi_")):
            continue
        parts.append(f"{key}: {len(val)} edges" if isinstance(val, dict) else f"{key}: {val}")
    print("  " + ", ".join(parts))
print(f"rule counts: {trace.counts()}")
print(f"kernel: n={kern.g.n} k={kern.k}, bound {kernel_size_bound(inst.breakpoints)}")

replayed = trace.replay(inst)
assert replayed.g == kern.g and replayed.k == kern.k
print("replayed trace reproduces the kernel")
print(f"solve original: {solve(inst).label}, solve kernel: {solve(kern).label}")
