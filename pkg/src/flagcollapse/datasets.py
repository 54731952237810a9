"""Point-cloud samplers, Rips graphs, and small zigzag generators."""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np
from scipy.spatial.distance import pdist

from .graph import FilteredGraph, GraphError
from .zigzag import INCLUSION, REMOVAL, ZigzagFiltration

SAMPLE_KINDS = (
    "uniform_square",
    "circle",
    "regular_polygon",
    "torus",
    "complete_graph",
)

TORUS_MAJOR = 2.0
TORUS_MINOR = 1.0


def check_point_cloud(points) -> np.ndarray:
    """Validate and coerce to a non-empty (n, d) float array."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise GraphError("point cloud must be a non-empty 2-d array")
    if not np.all(np.isfinite(arr)):
        raise GraphError("point cloud contains non-finite coordinates")
    return arr


def rips_graph(points, threshold: float = math.inf) -> FilteredGraph:
    """Euclidean Rips graph: edge grade = distance, kept iff <= threshold.

    Vertices are born at grade 0.
    """
    pts = check_point_cloud(points)
    if not threshold > 0:
        raise GraphError("threshold must be positive (or infinite)")
    n = pts.shape[0]
    dists = pdist(pts)
    edges = []
    k = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            d = float(dists[k])
            k += 1
            if d <= threshold:
                edges.append((i, j, d))
    return FilteredGraph.build(edges, births={i: 0.0 for i in range(n)})


def complete_graph(n: int, grade: float = 0.0) -> FilteredGraph:
    edges = [(i, j, grade) for i in range(n - 1) for j in range(i + 1, n)]
    return FilteredGraph.build(edges, births={i: grade for i in range(n)})


def sample(kind: str, n: int, seed: int = 0) -> Union[np.ndarray, FilteredGraph]:
    """Deterministic synthetic datasets; complete_graph yields a FilteredGraph."""
    if n < 1:
        raise GraphError("n must be at least 1")
    rng = np.random.default_rng(seed)
    if kind == "uniform_square":
        return rng.random((n, 2))
    if kind == "circle":
        angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
        return np.c_[np.cos(angles), np.sin(angles)]
    if kind == "regular_polygon":
        angles = 2.0 * np.pi * np.arange(n) / n
        return np.c_[np.cos(angles), np.sin(angles)]
    if kind == "torus":
        u = rng.uniform(0.0, 2.0 * np.pi, size=n)
        v = rng.uniform(0.0, 2.0 * np.pi, size=n)
        r = TORUS_MAJOR + TORUS_MINOR * np.cos(v)
        return np.c_[r * np.cos(u), r * np.sin(u), TORUS_MINOR * np.sin(v)]
    if kind == "complete_graph":
        return complete_graph(n)
    raise GraphError(f"unknown sample kind {kind!r}; expected one of {SAMPLE_KINDS}")


def oscillating_rips_zigzag(
    points, radii: Sequence[tuple[float, float]]
) -> ZigzagFiltration:
    """Small test generator: grow edges to each upper radius, shrink to the lower.

    Step k (grade k+1) includes every absent edge of length <= up and then
    removes every present edge of length > down.  Edges shorter than a
    step's lower radius but not its upper one become transient: included
    and removed at the same grade.
    """
    pts = check_point_cloud(points)
    n = pts.shape[0]
    dists = pdist(pts)
    lengths = {}
    k = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            lengths[(i, j)] = float(dists[k])
            k += 1
    events = []
    alive: set[tuple[int, int]] = set()
    for step, (up, down) in enumerate(radii):
        g = float(step + 1)
        for pair, d in lengths.items():
            if d <= up and pair not in alive:
                events.append((pair[0], pair[1], g, INCLUSION))
                alive.add(pair)
        for pair, d in sorted(lengths.items()):
            if pair in alive and d > down:
                events.append((pair[0], pair[1], g, REMOVAL))
                alive.discard(pair)
    return ZigzagFiltration.build(events, births={i: 1.0 for i in range(n)})
