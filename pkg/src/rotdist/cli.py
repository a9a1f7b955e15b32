"""Command-line entry point.

Exit codes: 0 success / yes, 1 no, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys

from .duality import DegenerateInput, polygon_dot, tree_to_triangulation
from .reductions import DEFAULT_CHAIN_MODE, ChainMode, kernelize, report_lines
from .search import (
    DEFAULT_ORACLE_CAP,
    KERNEL_FACTOR,
    DistanceCache,
    comb_upper_bound,
    decide_within_k,
    exact_distance,
)
from .tree import (
    CapacityError,
    InvalidRotation,
    ParseError,
    RotationStep,
    Tree,
    parse,
    random_tree,
    rotate,
    to_dot,
)

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_trees(args, want: int) -> list[Tree]:
    texts = list(args.trees)
    if getattr(args, "file", None):
        with open(args.file) as fh:
            texts += [line.strip() for line in fh if line.strip()]
    if len(texts) != want:
        raise UsageError(f"expected {want} tree encoding(s), got {len(texts)}")
    out = []
    for i, text in enumerate(texts, 1):
        try:
            out.append(parse(text))
        except ParseError as exc:
            raise UsageError(f"tree {i} ({text!r}): {exc}") from exc
    if want == 2 and out[0].n != out[1].n:
        raise UsageError(f"trees have {out[0].leaf_count} and {out[1].leaf_count} leaves")
    return out


def cmd_distance(args) -> int:
    t1, t2 = _read_trees(args, 2)
    try:
        d = exact_distance(t1, t2, cap=args.oracle_cap)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"n={t1.n} is too large for the exact oracle; run `rotdist decide --k K` instead")
        return EXIT_USAGE
    print(d)
    return EXIT_OK


def cmd_decide(args) -> int:
    t1, t2 = _read_trees(args, 2)
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    cache = DistanceCache(args.cache) if args.cache else None
    dec = decide_within_k(t1, t2, args.k, ChainMode(args.chain_mode), cache=cache,
                          gate_factor=args.gate_factor or None)
    if dec:
        print("yes")
        sys.stdout.write(dec.witness.to_text())
        if args.witness_out:
            with open(args.witness_out, "w") as fh:
                fh.write(dec.witness.to_text())
        return EXIT_OK
    print("no")
    print(f"gate: {dec.gate.value}")
    return EXIT_NO


def cmd_kernelize(args) -> int:
    t1, t2 = _read_trees(args, 2)
    kp = kernelize(t1, t2, ChainMode(args.chain_mode))
    print(f"{kp.t1p.bits} {kp.t2p.bits}")
    print(f"leaves: {t1.leaf_count} -> {kp.leaf_count}")
    print(f"events: {len(kp.events)}")
    if args.report:
        text = "".join(line + "\n" for line in report_lines(kp))
        if args.report == "-":
            sys.stdout.write(text)
        else:
            with open(args.report, "w") as fh:
                fh.write(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    rng = random.Random(args.seed)
    for _ in range(args.count):
        print(random_tree(args.n, rng=rng).bits)
    return EXIT_OK


def cmd_bound(args) -> int:
    t1, t2 = _read_trees(args, 2)
    bound, path = comb_upper_bound(t1, t2)
    print(bound)
    sys.stdout.write(path.to_text())
    return EXIT_OK


def _step(text: str) -> RotationStep:
    try:
        return RotationStep.from_text(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_rotate(args) -> int:
    t, = _read_trees(args, 1)
    for text in args.step:
        try:
            t = rotate(t, _step(text))
        except (InvalidRotation, IndexError) as exc:
            raise UsageError(f"rotation {text!r}: {exc}") from exc
    print(t.bits)
    return EXIT_OK


def cmd_export(args) -> int:
    texts = list(args.trees)
    if not 1 <= len(texts) <= 2:
        raise UsageError("export takes one or two tree encodings")
    trees = _read_trees(args, len(texts))
    if args.step:
        try:
            trees.append(rotate(trees[-1], _step(args.step)))
        except (InvalidRotation, IndexError) as exc:
            raise UsageError(f"rotation {args.step!r}: {exc}") from exc
    os.makedirs(args.dot, exist_ok=True)
    written = []
    for i, t in enumerate(trees, 1):
        path = os.path.join(args.dot, f"tree{i}.dot")
        with open(path, "w") as fh:
            fh.write(to_dot(t, name=f"tree{i}"))
        written.append(path)
        if args.polygon:
            try:
                poly = tree_to_triangulation(t)
            except DegenerateInput as exc:
                raise UsageError(str(exc)) from exc
            path = os.path.join(args.dot, f"polygon{i}.dot")
            with open(path, "w") as fh:
                fh.write(polygon_dot(poly, name=f"polygon{i}"))
            written.append(path)
    for path in written:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotdist",
        description="Rotation distance between ordered full binary trees "
                    "(trees are preorder bitstrings: 1 = internal node, 0 = leaf).",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, trees="pair"):
        p = sub.add_parser(name, help=help_text, description=help_text,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        nargs = "*" if trees == "pair" else ("+" if trees == "some" else 1)
        p.add_argument("trees", nargs=nargs, metavar="TREE", help="tree encoding")
        if trees == "pair":
            p.add_argument("--file", help="read tree encodings from a file, one per line")
        p.set_defaults(func=func)
        return p

    def chain_flag(p):
        p.add_argument("--chain-mode", choices=[m.value for m in ChainMode],
                       default=DEFAULT_CHAIN_MODE.value,
                       help="which common chains to reduce: 'literal' needs opposite pendant "
                            "sides in the two trees, 'same-side' also accepts matching sides")

    p = add("distance", cmd_distance, "exact distance by breadth-first search")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP,
                   help="largest n the exact search will attempt")

    p = add("decide", cmd_decide, "is the distance at most k? prints yes + witness or no + gate")
    p.add_argument("--k", type=int, required=True, help="distance budget")
    p.add_argument("--cache", help="plain-text memo of kernel distances to read and extend")
    p.add_argument("--witness-out", help="also write the witness path to this file")
    p.add_argument("--gate-factor", type=int, default=KERNEL_FACTOR,
                   help="reject kernels with more than this many leaves per unit of k; "
                        "0 turns the size gate off (exact but slower on large trees)")
    chain_flag(p)

    p = add("kernelize", cmd_kernelize, "reduce a pair with the subtree and chain rules")
    p.add_argument("--report", help="write the key-value reduction report here ('-' for stdout)")
    chain_flag(p)

    p = sub.add_parser("gen", help="uniform random trees",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--n", type=int, required=True, help="internal nodes per tree")
    p.add_argument("--count", type=int, default=1, help="number of trees")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.set_defaults(func=cmd_gen)

    add("bound", cmd_bound, "upper bound and path through the right comb")

    p = add("rotate", cmd_rotate, "apply rotations given as 'i R' / 'i L'", trees="one")
    p.add_argument("--step", action="append", default=[], help="rotation step, repeatable")

    p = add("export", cmd_export, "write Graphviz DOT drawings", trees="some")
    p.add_argument("--dot", required=True, help="output directory")
    p.add_argument("--polygon", action="store_true", help="also draw the dual triangulation")
    p.add_argument("--step", help="also draw the last tree after this rotation ('i R' / 'i L')")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
