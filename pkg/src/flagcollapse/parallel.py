"""Divide-and-conquer parallelization of the backward collapse.

The grade-sorted edge list is split into contiguous halves, recursively.
Each leaf runs the backward algorithm over its own range, seeing only the
edges up to the end of that range; edges a leaf shifts out of its range are
resumed by a sequential merge against the right sibling's final state, as
if they entered at the first grade of the right range.  The result is
identical, edge for edge and grade for grade, to the sequential algorithm;
only leaf tasks run concurrently.

All edge grades must be distinct.  Inputs with duplicate grades fall back
to the plain sequential driver.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .collapse import CollapseResult, CollapseStats, backward_collapse
from .graph import (
    DenseNeighborhoodMap,
    FilteredEdge,
    FilteredGraph,
    SparseNeighborhoodMap,
    edge_key,
)

MIN_LEAF_EDGES = 1024


@dataclass(frozen=True)
class PartitionPlan:
    """Contiguous leaf ranges (half-open index pairs) in grade order."""

    n_edges: int
    parts: int
    ranges: tuple[tuple[int, int], ...]

    @classmethod
    def for_graph(cls, n_edges: int, parts: int, min_leaf: int = MIN_LEAF_EDGES):
        if parts < 1 or parts & (parts - 1):
            raise ValueError("parts must be a power of two")
        while parts > 1 and n_edges // parts < min_leaf:
            parts //= 2
        ranges: list[tuple[int, int]] = []

        def split(lo: int, hi: int, k: int):
            if k == 1:
                ranges.append((lo, hi))
                return
            mid = (lo + hi) // 2
            split(lo, mid, k // 2)
            split(mid, hi, k // 2)

        split(0, n_edges, parts)
        return cls(n_edges=n_edges, parts=parts, ranges=tuple(ranges))


def _run_range(vertex_ids, edges, lo, hi, representation):
    """Backward pass over edges[lo:hi] in the graph of edges[:hi]."""
    if representation == "dense":
        nmap = DenseNeighborhoodMap(vertex_ids)
    else:
        nmap = SparseNeighborhoodMap(vertex_ids)
    for u, v, t in edges[:hi]:
        nmap.set_grade(int(u), int(v), float(t))
    kept = []
    removed = []
    stats = CollapseStats()
    for i in range(hi - 1, lo - 1, -1):
        u, v, t = edges[i]
        u, v, t = int(u), int(v), float(t)
        new_t, checks, shifts = nmap.settle_backward(u, v, t)
        stats.domination_checks += checks
        stats.shifts += shifts
        if new_t is None:
            nmap.remove(u, v)
            removed.append((u, v, t))
            stats.trims += 1
        else:
            if new_t != t:
                nmap.set_grade(u, v, new_t)
            kept.append((u, v, new_t))
    return kept, removed, stats


def _leaf_task(payload):
    vertex_ids, edges, lo, hi, representation = payload
    return _run_range(vertex_ids, edges, lo, hi, representation)


def parallel_backward_collapse(
    g: FilteredGraph,
    parts: int,
    representation: str = "dense",
    use_processes: bool = True,
    min_leaf: int = MIN_LEAF_EDGES,
) -> CollapseResult:
    """Backward collapse split over ``parts`` fork-join tasks.

    ``parts`` must be a power of two; it is lowered automatically so that
    no leaf holds fewer than ``min_leaf`` edges.  Equal grades cannot be
    split soundly, so such inputs are handed to the sequential driver.
    """
    if parts < 1 or parts & (parts - 1):
        raise ValueError("parts must be a power of two")
    if parts == 1:
        return backward_collapse(g, representation=representation)
    if not g.grades_distinct():
        warnings.warn(
            "duplicate edge grades cannot be split; running sequentially",
            RuntimeWarning,
            stacklevel=2,
        )
        return backward_collapse(g, representation=representation)
    plan = PartitionPlan.for_graph(g.n_edges, parts, min_leaf=min_leaf)
    if plan.parts == 1:
        return backward_collapse(g, representation=representation)

    vertex_ids = sorted(g.births)
    edges = [(e.u, e.v, e.t) for e in g.edges]
    payloads = [
        (vertex_ids, edges[:hi], lo, hi, representation) for lo, hi in plan.ranges
    ]
    if use_processes:
        with ProcessPoolExecutor(max_workers=plan.parts) as pool:
            leaf_results = list(pool.map(_leaf_task, payloads))
    else:
        leaf_results = [_leaf_task(p) for p in payloads]

    leaves = dict(zip(plan.ranges, leaf_results))
    stats = CollapseStats()
    for _, _, s in leaf_results:
        stats.merge(s)

    def solve(lo: int, hi: int, k: int):
        if k == 1:
            kept, removed, _ = leaves[(lo, hi)]
            return list(kept), list(removed)
        mid = (lo + hi) // 2
        left_kept, left_removed = solve(lo, mid, k // 2)
        right_kept, right_removed = solve(mid, hi, k // 2)
        # the right task's final state: edges before the range at their
        # original grades, the range itself at its settled grades
        if representation == "dense":
            nmap = DenseNeighborhoodMap(vertex_ids)
        else:
            nmap = SparseNeighborhoodMap(vertex_ids)
        for u, v, t in edges[:mid]:
            nmap.set_grade(u, v, t)
        for u, v, t in right_kept:
            nmap.set_grade(u, v, t)
        t_start = edges[mid][2]
        kept = right_kept + left_kept
        removed = list(right_removed)
        for u, v, t in sorted(left_removed, key=lambda e: (e[2], e[0], e[1]),
                              reverse=True):
            new_t, checks, shifts = nmap.settle_backward(u, v, t_start)
            stats.domination_checks += checks
            stats.shifts += shifts
            if new_t is None:
                nmap.remove(u, v)
                removed.append((u, v, t))
                stats.trims += 1
            else:
                nmap.set_grade(u, v, new_t)
                kept.append((u, v, new_t))
        return kept, removed

    kept, removed = solve(0, g.n_edges, plan.parts)
    original = {(e.u, e.v): e.t for e in g.edges}
    kept_edges = sorted((FilteredEdge(u, v, t) for u, v, t in kept), key=edge_key)
    removed_edges = sorted(
        (FilteredEdge(u, v, original[(u, v)]) for u, v, _ in removed), key=edge_key
    )
    return CollapseResult(dict(g.births), kept_edges, removed_edges, stats)
