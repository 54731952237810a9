"""Approximate collapse: parameter validation, degeneracy, error bounds."""

import math

import numpy as np
import pytest

from flagcollapse import (
    ApproxParams,
    approx_collapse,
    backward_collapse,
    bottleneck_distance,
    diagrams_equal,
    flag_expand,
    persistence,
    rips_graph,
)


def diagram_of(g, max_dim=2):
    return persistence(flag_expand(g, max_dim + 1), max_dim)


def test_params_validation():
    with pytest.raises(ValueError):
        ApproxParams(mode="additive", epsilon=-0.1)
    with pytest.raises(ValueError):
        ApproxParams(mode="multiplicative", alpha=0.9)
    with pytest.raises(ValueError):
        ApproxParams(mode="nearest")


def test_multiplicative_rejects_nonpositive_grades():
    g = rips_graph(np.array([[0.0, 0.0], [1.0, 0.0]]))
    g.edges[0] = g.edges[0]._replace(t=1.0)
    bad = g.copy()
    bad.edges[0] = bad.edges[0]._replace(t=0.0)
    with pytest.raises(ValueError, match="positive"):
        approx_collapse(bad, ApproxParams(mode="multiplicative", alpha=2.0))


def test_epsilon_zero_is_exact(rng):
    for _ in range(8):
        pts = rng.random((int(rng.integers(5, 10)), 2))
        g = rips_graph(pts)
        exact = backward_collapse(g)
        approx = approx_collapse(g, ApproxParams(epsilon=0.0))
        assert approx.kept == exact.kept and approx.removed == exact.removed


def test_alpha_one_is_exact(rng):
    for _ in range(6):
        pts = rng.random((int(rng.integers(5, 10)), 2))
        g = rips_graph(pts)
        exact = backward_collapse(g)
        approx = approx_collapse(g, ApproxParams(mode="multiplicative", alpha=1.0))
        assert approx.kept == exact.kept


def test_first_shift_is_at_least_epsilon(rng):
    eps = 0.2
    for _ in range(10):
        pts = rng.random((int(rng.integers(6, 11)), 2))
        g = rips_graph(pts)
        r = approx_collapse(g, ApproxParams(epsilon=eps))
        original = {(e.u, e.v): e.t for e in g.edges}
        for e in r.kept:
            t0 = original[(e.u, e.v)]
            assert e.t == t0 or e.t >= t0 + eps


def test_output_never_larger(rng):
    for eps in (0.05, 0.3):
        pts = rng.random((10, 2))
        g = rips_graph(pts)
        r = approx_collapse(g, ApproxParams(epsilon=eps))
        assert len(r.kept) <= g.n_edges


def test_bottleneck_within_epsilon(rng):
    for _ in range(6):
        pts = rng.random((int(rng.integers(6, 10)), 2))
        g = rips_graph(pts)
        din = diagram_of(g)
        for eps in (0.05, 0.25):
            r = approx_collapse(g, ApproxParams(epsilon=eps))
            dout = diagram_of(r.to_graph())
            for dim in (0, 1, 2):
                assert bottleneck_distance(din, dout, dim) <= eps + 1e-12


def test_multiplicative_log_scale_bound(rng):
    def log_mapped(d):
        pts = {}
        for dim in d.dimensions():
            pts[dim] = [
                (
                    math.log(b) if b > 0 else -math.inf,
                    math.log(x) if 0 < x < math.inf else (math.inf if x == math.inf else -math.inf),
                )
                for b, x in d.in_dimension(dim)
            ]
        from flagcollapse import PersistenceDiagram

        return PersistenceDiagram.make(pts, d.convention)

    for _ in range(5):
        pts = rng.random((8, 2))
        g = rips_graph(pts)
        din = log_mapped(diagram_of(g))
        for alpha in (1.2, 2.0):
            r = approx_collapse(g, ApproxParams(mode="multiplicative", alpha=alpha))
            dout = log_mapped(diagram_of(r.to_graph()))
            for dim in (0, 1, 2):
                assert bottleneck_distance(din, dout, dim) <= math.log(alpha) + 1e-12
