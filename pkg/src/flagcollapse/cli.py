"""Command-line entry points.

Subcommands: collapse, zigzag-collapse, rips, sample, persistence,
zigzag-persistence, bottleneck.  Run statistics go to standard error as
key=value lines when --stats is given; results go to the --output file (or
stdout for scalar results).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field

from . import io as fio
from .approx import ADDITIVE, MULTIPLICATIVE, ApproxParams, approx_collapse
from .collapse import backward_collapse, collapse_to_fixpoint, forward_collapse
from .datasets import SAMPLE_KINDS, rips_graph, sample
from .graph import FilteredGraph, GraphError
from .oracle import (
    CLOSED,
    DEFAULT_BUDGET,
    OracleBudgetError,
    bottleneck_distance,
    flag_expand,
    persistence,
    zigzag_persistence,
)
from .parallel import parallel_backward_collapse
from .zigzag import ZigzagError, zigzag_collapse


@dataclass
class RunStats:
    edges_before: int = 0
    edges_after: int = 0
    rounds: int = 1
    read_seconds: float = 0.0
    collapse_seconds: float = 0.0
    write_seconds: float = 0.0
    domination_checks: int = 0
    round_sizes: list[int] = field(default_factory=list)

    def emit(self, stream) -> None:
        print(f"edges_before={self.edges_before}", file=stream)
        print(f"edges_after={self.edges_after}", file=stream)
        print(f"rounds={self.rounds}", file=stream)
        if self.round_sizes:
            print(
                "round_sizes=" + ",".join(str(s) for s in self.round_sizes),
                file=stream,
            )
        print(f"read_seconds={self.read_seconds:.6f}", file=stream)
        print(f"collapse_seconds={self.collapse_seconds:.6f}", file=stream)
        print(f"write_seconds={self.write_seconds:.6f}", file=stream)
        print(f"domination_checks={self.domination_checks}", file=stream)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagcollapse",
        description="Reduce flag and zigzag flag filtrations by edge collapse.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collapse", help="reduce a graph file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--algorithm", choices=("backward", "forward"),
                   default="backward")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--fixpoint", action="store_true",
                       help="iterate until the edge count stops decreasing")
    group.add_argument("--rounds", type=int, default=1)
    p.add_argument("--max-rounds", type=int, default=32)
    err = p.add_mutually_exclusive_group()
    err.add_argument("--epsilon", type=float,
                     help="additive approximation budget")
    err.add_argument("--alpha", type=float,
                     help="multiplicative approximation factor")
    p.add_argument("--threads", type=int, default=1)
    rep = p.add_mutually_exclusive_group()
    rep.add_argument("--dense", dest="representation", action="store_const",
                     const="dense")
    rep.add_argument("--sparse", dest="representation", action="store_const",
                     const="sparse")
    p.set_defaults(representation="dense")
    p.add_argument("--removed", help="side file for the removed edges")
    p.add_argument("--stats", action="store_true")

    p = sub.add_parser("zigzag-collapse", help="reduce a zigzag event file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--passes", type=int, default=4)
    p.add_argument("--parts", type=int, default=1)
    p.add_argument("--stats", action="store_true")

    p = sub.add_parser("rips", help="points file to Rips graph file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--threshold", type=float, default=float("inf"))

    p = sub.add_parser("sample", help="generate a synthetic dataset")
    p.add_argument("--kind", required=True, choices=SAMPLE_KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)

    p = sub.add_parser("persistence", help="diagram of a graph's flag filtration")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--max-dim", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("zigzag-persistence", help="closed-interval zigzag diagram")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--max-dim", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("bottleneck", help="bottleneck distance of two diagrams")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--dimension", type=int, default=0)
    p.add_argument("--closed", action="store_true",
                   help="treat the diagrams as closed-interval (zigzag)")

    return parser


def _cmd_collapse(args) -> int:
    approx = args.epsilon is not None or args.alpha is not None
    if approx and args.threads > 1:
        raise GraphError("--epsilon/--alpha cannot be combined with --threads > 1")
    if approx and args.algorithm != "backward":
        raise GraphError("--epsilon/--alpha require --algorithm backward")
    if approx and args.fixpoint:
        raise GraphError("--epsilon/--alpha cannot be combined with --fixpoint")
    if args.rounds < 1:
        raise GraphError("--rounds must be at least 1")

    stats = RunStats()
    t0 = time.perf_counter()
    g = fio.read_graph(args.input)
    stats.read_seconds = time.perf_counter() - t0
    stats.edges_before = g.n_edges

    t0 = time.perf_counter()
    if args.fixpoint:
        result, sizes = collapse_to_fixpoint(
            g, algorithm=args.algorithm, max_rounds=args.max_rounds,
            representation=args.representation,
        )
        stats.rounds = len(sizes)
        stats.round_sizes = sizes
    else:
        result = None
        current = g
        for _ in range(args.rounds):
            if args.epsilon is not None:
                params = ApproxParams(mode=ADDITIVE, epsilon=args.epsilon)
                result = approx_collapse(current, params, args.representation)
            elif args.alpha is not None:
                params = ApproxParams(mode=MULTIPLICATIVE, alpha=args.alpha)
                result = approx_collapse(current, params, args.representation)
            elif args.threads > 1:
                parts = 1 << max(0, (args.threads - 1).bit_length())
                result = parallel_backward_collapse(
                    current, parts, representation=args.representation
                )
            elif args.algorithm == "backward":
                result = backward_collapse(current, args.representation)
            else:
                result = forward_collapse(current, args.representation)
            current = result.to_graph()
            stats.round_sizes.append(len(result.kept))
        stats.rounds = args.rounds
    stats.collapse_seconds = time.perf_counter() - t0
    stats.edges_after = len(result.kept)
    stats.domination_checks = result.stats.domination_checks

    t0 = time.perf_counter()
    fio.write_graph(result.to_graph(), args.output)
    if args.removed:
        removed_graph = FilteredGraph(births=dict(g.births), edges=result.removed)
        fio.write_graph(removed_graph, args.removed)
    stats.write_seconds = time.perf_counter() - t0
    if args.stats:
        stats.emit(sys.stderr)
    return 0


def _cmd_zigzag_collapse(args) -> int:
    stats = RunStats()
    t0 = time.perf_counter()
    z = fio.read_zigzag(args.input)
    stats.read_seconds = time.perf_counter() - t0
    stats.edges_before = z.n_events
    t0 = time.perf_counter()
    out = zigzag_collapse(z, passes=args.passes, parts=args.parts)
    stats.collapse_seconds = time.perf_counter() - t0
    stats.edges_after = out.n_events
    t0 = time.perf_counter()
    fio.write_zigzag(out, args.output)
    stats.write_seconds = time.perf_counter() - t0
    if args.stats:
        stats.emit(sys.stderr)
    return 0


def _dispatch(args) -> int:
    if args.command == "collapse":
        return _cmd_collapse(args)
    if args.command == "zigzag-collapse":
        return _cmd_zigzag_collapse(args)
    if args.command == "rips":
        pts = fio.read_points(args.input)
        fio.write_graph(rips_graph(pts, args.threshold), args.output)
        return 0
    if args.command == "sample":
        data = sample(args.kind, args.n, args.seed)
        if isinstance(data, FilteredGraph):
            fio.write_graph(data, args.output)
        else:
            fio.write_points(data, args.output)
        return 0
    if args.command == "persistence":
        g = fio.read_graph(args.input)
        filt = flag_expand(g, args.max_dim + 1, budget=args.budget)
        fio.write_diagram(persistence(filt, args.max_dim), args.output)
        return 0
    if args.command == "zigzag-persistence":
        z = fio.read_zigzag(args.input)
        fio.write_diagram(
            zigzag_persistence(z, args.max_dim, budget=args.budget), args.output
        )
        return 0
    if args.command == "bottleneck":
        convention = CLOSED if args.closed else "half_open"
        a = fio.read_diagram(args.a, convention)
        b = fio.read_diagram(args.b, convention)
        print(repr(bottleneck_distance(a, b, args.dimension)))
        return 0
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (GraphError, ZigzagError, OracleBudgetError, ValueError, OSError) as exc:
        print(f"flagcollapse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
