"""Approximate backward collapse trading exactness for more removals.

Instead of examining an edge at its own grade, the first domination check
happens a little later: at ``t + epsilon`` in additive mode, at
``alpha * t`` in multiplicative mode.  An edge dominated there resumes
normal backward processing from that point; an edge that is not dominated
there keeps its original grade, so the error budget is spent at most once
per edge.  The output module is epsilon-interleaved (resp. multiplicatively
alpha-interleaved) with the input, which bounds the bottleneck distance
between the diagrams by epsilon (resp. log-scale by log alpha).

Right-to-left processing is essential for the error bound, so there is no
forward variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .collapse import CollapseResult, CollapseStats
from .graph import FilteredEdge, FilteredGraph, build_neighborhood_map, edge_key

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class ApproxParams:
    """Error budget: epsilon >= 0 (additive) or alpha >= 1 (multiplicative).

    epsilon = 0 and alpha = 1 both degrade to the exact backward algorithm.
    """

    mode: str = ADDITIVE
    epsilon: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.mode not in (ADDITIVE, MULTIPLICATIVE):
            raise ValueError(f"unknown approximation mode {self.mode!r}")
        if self.mode == ADDITIVE:
            if not (self.epsilon >= 0.0):
                raise ValueError("epsilon must be >= 0")
        else:
            if not (self.alpha >= 1.0):
                raise ValueError("alpha must be >= 1")

    def first_check_grade(self, t: float) -> float:
        if self.mode == ADDITIVE:
            return t + self.epsilon
        return self.alpha * t


def approx_collapse(
    g: FilteredGraph, params: ApproxParams, representation: str = "dense"
) -> CollapseResult:
    """Backward collapse whose first domination check is delayed per edge."""
    if params.mode == MULTIPLICATIVE:
        for e in g.edges:
            if e.t <= 0.0:
                raise ValueError(
                    "multiplicative mode requires strictly positive edge "
                    f"grades; edge ({e.u}, {e.v}) has grade {e.t}"
                )
    nmap = build_neighborhood_map(g, representation)
    kept: list[FilteredEdge] = []
    removed: list[FilteredEdge] = []
    stats = CollapseStats()
    for e in reversed(g.edges):
        t_first = params.first_check_grade(e.t)
        new_t, checks, shifts = nmap.settle_backward(e.u, e.v, t_first)
        stats.domination_checks += checks
        stats.shifts += shifts
        if new_t is None:
            nmap.remove(e.u, e.v)
            removed.append(e)
            stats.trims += 1
        elif new_t == t_first and shifts == 0:
            # not dominated at the delayed check: stays at its own grade
            kept.append(e)
        else:
            nmap.set_grade(e.u, e.v, new_t)
            kept.append(FilteredEdge(e.u, e.v, new_t))
    kept.sort(key=edge_key)
    removed.sort(key=edge_key)
    return CollapseResult(dict(g.births), kept, removed, stats)
