"""Divide-and-conquer backward collapse: output identity with sequential."""

import warnings

import numpy as np
import pytest

from flagcollapse import (
    FilteredGraph,
    PartitionPlan,
    backward_collapse,
    parallel_backward_collapse,
    rips_graph,
)
from flagcollapse.parallel import _run_range
from conftest import random_graph


def test_parts_one_is_sequential(rng):
    g = random_graph(rng, 6, 10, distinct=True)
    seq = backward_collapse(g)
    par = parallel_backward_collapse(g, 1)
    assert par.kept == seq.kept and par.removed == seq.removed


@pytest.mark.parametrize("parts", [2, 4, 8])
def test_output_identity_small_inputs(rng, parts):
    for _ in range(6):
        pts = rng.random((int(rng.integers(20, 45)), 2))
        g = rips_graph(pts)
        seq = backward_collapse(g)
        par = parallel_backward_collapse(
            g, parts, use_processes=False, min_leaf=4
        )
        assert par.kept == seq.kept
        assert par.removed == seq.removed


def test_output_identity_with_processes(rng):
    pts = rng.random((40, 2))
    g = rips_graph(pts)
    seq = backward_collapse(g)
    par = parallel_backward_collapse(g, 2, use_processes=True, min_leaf=4)
    assert par.kept == seq.kept and par.removed == seq.removed


def test_duplicate_grades_fall_back_to_sequential():
    g = FilteredGraph.build([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    with pytest.warns(RuntimeWarning, match="duplicate"):
        par = parallel_backward_collapse(g, 2, min_leaf=1)
    seq = backward_collapse(g)
    assert par.kept == seq.kept


def test_parts_must_be_power_of_two():
    g = FilteredGraph.build([(0, 1, 1.0)])
    with pytest.raises(ValueError):
        parallel_backward_collapse(g, 3)


def test_partition_plan_ranges():
    plan = PartitionPlan.for_graph(10000, 4, min_leaf=1024)
    assert plan.parts == 4
    assert plan.ranges[0][0] == 0 and plan.ranges[-1][1] == 10000
    for (a, b), (c, d) in zip(plan.ranges, plan.ranges[1:]):
        assert b == c and a < b
    # the leaf cap lowers the part count
    capped = PartitionPlan.for_graph(3000, 8, min_leaf=1024)
    assert capped.parts == 2


def test_left_call_never_sees_later_edges(rng):
    # a leaf over [lo, hi) only reads edges[:hi]: its result is unchanged
    # when everything beyond hi is altered
    g = random_graph(rng, 12, 16, distinct=True)
    edges = [(e.u, e.v, e.t) for e in g.edges]
    ids = sorted(g.births)
    hi = len(edges) // 2
    base = _run_range(ids, edges[:hi], 0, hi, "dense")
    tampered = edges[:hi] + [(u, v, t + 1000.0) for u, v, t in edges[hi:]]
    also = _run_range(ids, tampered[:hi], 0, hi, "dense")
    assert base[0] == also[0] and base[1] == also[1]
