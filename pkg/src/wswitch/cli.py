"""``ws`` command line entry point.

Exit codes: 0 for success or YES, 1 for NO or a failed selftest, 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from . import instances
from .errors import WSError
from .graph import LabeledGraph
from .instances import FORMAT, dumps
from .kernel import kernelize, solve
from .reversals import PSCirc, PSLin, bfs_distance, restricted_bfs_distance
from .tutte import tutte_decompose, validate
from .twoiso import find_phi_isomorphism, is_two_isomorphism

PERM_TOKEN = re.compile(r"-\d+(,[+-]?\d+)*")


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    return int(os.environ.get("WS_SEED", "0"))


def _perm(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def cmd_decompose(args) -> int:
    data = json.loads(_read(args.file))
    out = {"format": FORMAT}
    if "vertices" in data:
        graphs = {"graph": LabeledGraph.from_json(data)}
    else:
        inst = instances.from_json(data, check=False)
        graphs = {"g": inst.g, "h": inst.h}
    for name, g in graphs.items():
        d = tutte_decompose(g)
        out[name] = d.to_json()
        out[name]["violations"] = validate(d, g)
    _write(dumps(out), args.output)
    return 0


def cmd_check(args) -> int:
    inst = instances.parse(_read(args.file), check=False)
    two = inst.g.m == inst.h.m and inst.phi.domain == inst.g.edge_ids and is_two_isomorphism(inst.g, inst.h, inst.phi)
    out = {"format": FORMAT, "is_two_isomorphism": two}
    if two:
        psi = find_phi_isomorphism(inst.g, inst.h, inst.phi)
        out["phi_isomorphic"] = psi is not None
        out["psi"] = None if psi is None else dict(sorted(psi.items()))
        out["breakpoint_number"] = inst.breakpoints
        out["report"] = inst.enhanced.report.to_json()
    _write(dumps(out), args.output)
    return 0 if two else 1


def cmd_kernelize(args) -> int:
    inst = instances.parse(_read(args.file))
    kern, trace = kernelize(inst, validate=args.validate)
    _write(instances.emit(kern).decode(), args.output)
    if args.trace:
        _write(dumps(trace.to_json()), args.trace)
    return 0


def cmd_solve(args) -> int:
    inst = instances.parse(_read(args.file))
    res = solve(inst)
    out = res.to_json()
    if not args.witness:
        out.pop("switches")
    _write(dumps(out), args.output)
    return 0 if res.answer else 1


def cmd_gen(args) -> int:
    if args.family == "cycle":
        inst = instances.gen_cycle_instance(_perm(args.pi), args.k)
    elif args.family == "subdivided":
        inst = instances.gen_subdivided_instance(_perm(args.pi), args.k)
    else:
        inst = instances.gen_random_yes(args.n, args.k, _seed(args.seed))
    _write(instances.emit(inst).decode(), args.output)
    return 0


def cmd_oracle(args) -> int:
    p = PSCirc.parse(args.perm) if args.circular else PSLin.parse(args.perm)
    d, seq = restricted_bfs_distance(p) if args.restricted else bfs_distance(p)
    out = {"format": FORMAT, "permutation": str(p), "distance": d, "reversals": [list(m) for m in seq]}
    _write(dumps(out), None)
    return 0


def cmd_selftest(args) -> int:
    from .acceptance import run_all
    results = run_all()
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ws", description="Whitney switch instances, kernels and oracles.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="Tutte decomposition of a graph or both graphs of an instance")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", help="2-isomorphism, phi-isomorphism and bag report")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("kernelize", help="reduce an instance")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--trace")
    p.add_argument("--validate", action="store_true", help="re-derive decompositions after every rule")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("solve", help="exact decision by bounded search")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--witness", action="store_true", help="include the switch sequence")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("family", choices=["cycle", "subdivided", "random"])
    p.add_argument("--pi", help="comma separated permutation (cycle, subdivided)")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exact reversal distance by breadth-first search")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--linear", action="store_true")
    kind.add_argument("--circular", action="store_true")
    p.add_argument("--restricted", action="store_true", help="forbid cutting long signed strips")
    p.add_argument("perm", nargs="?", help="e.g. -3,+4,1,2 (unprefixed values are unsigned)")
    p.add_argument("--perm", dest="perm_opt", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # a leading minus sign would otherwise read as an option flag
    argv = [f"--perm={a}" if PERM_TOKEN.fullmatch(a) else a for a in argv]
    args = ap.parse_args(argv)
    if args.command == "gen" and args.family != "random" and not args.pi:
        ap.error("--pi is required for cycle and subdivided instances")
    if args.command == "oracle":
        args.perm = args.perm or args.perm_opt
    if args.command == "oracle" and not args.perm:
        ap.error("a permutation is required")
    try:
        return args.func(args)
    except (WSError, OSError, json.JSONDecodeError) as exc:
        print(f"ws: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
