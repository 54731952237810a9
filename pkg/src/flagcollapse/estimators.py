"""scikit-learn style transformers wrapping the reduction pipeline.

Each estimator is stateless (``fit`` just validates and returns self) and
transforms a list of samples, so the stages compose in a
:class:`sklearn.pipeline.Pipeline`::

    Pipeline([
        ("rips", RipsGraph()),
        ("collapse", EdgeCollapser(fixpoint=True)),
        ("diagram", FlagPersistence(max_dim=1)),
    ]).fit_transform(list_of_point_clouds)
"""

from __future__ import annotations

import math

from sklearn.base import BaseEstimator, TransformerMixin

from . import datasets
from .approx import ADDITIVE, MULTIPLICATIVE, ApproxParams, approx_collapse
from .collapse import backward_collapse, collapse_to_fixpoint, forward_collapse
from .graph import FilteredGraph, GraphError
from .oracle import DEFAULT_BUDGET, flag_expand, persistence
from .parallel import parallel_backward_collapse
from .zigzag import ZigzagFiltration, zigzag_collapse


def _check_graphs(X) -> list[FilteredGraph]:
    if isinstance(X, FilteredGraph):
        raise GraphError(
            "expected a list of FilteredGraph samples, not a single graph; "
            "wrap it in a list"
        )
    graphs = list(X)
    for g in graphs:
        if not isinstance(g, FilteredGraph):
            raise GraphError(f"expected FilteredGraph samples, got {type(g)!r}")
    return graphs


class RipsGraph(BaseEstimator, TransformerMixin):
    """Point clouds to Euclidean Rips graphs thresholded at ``threshold``."""

    def __init__(self, threshold: float = math.inf):
        self.threshold = threshold

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return [datasets.rips_graph(pts, self.threshold) for pts in X]


class EdgeCollapser(BaseEstimator, TransformerMixin):
    """Reduce filtered graphs by dominated-edge collapse.

    Parameters mirror the library drivers: ``algorithm`` selects the
    backward or forward scan, ``rounds``/``fixpoint`` control repetition,
    ``epsilon``/``alpha`` switch to the approximate variant, and ``threads``
    enables the divide-and-conquer parallel backward driver.
    """

    def __init__(
        self,
        algorithm: str = "backward",
        rounds: int = 1,
        fixpoint: bool = False,
        max_rounds: int = 32,
        epsilon: float = 0.0,
        alpha: float = 1.0,
        threads: int = 1,
        representation: str = "dense",
    ):
        self.algorithm = algorithm
        self.rounds = rounds
        self.fixpoint = fixpoint
        self.max_rounds = max_rounds
        self.epsilon = epsilon
        self.alpha = alpha
        self.threads = threads
        self.representation = representation

    def _validate(self):
        if self.algorithm not in ("backward", "forward"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        approx = self.epsilon != 0.0 or self.alpha != 1.0
        if approx and self.threads > 1:
            raise ValueError("approximation does not compose with threads > 1")
        if approx and self.algorithm != "backward":
            raise ValueError("approximation is only defined for the backward scan")
        if approx and self.fixpoint:
            raise ValueError("approximation does not compose with fixpoint")
        if self.epsilon != 0.0 and self.alpha != 1.0:
            raise ValueError("set either epsilon or alpha, not both")
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")

    def fit(self, X, y=None):
        self._validate()
        return self

    def _reduce_once(self, g: FilteredGraph) -> FilteredGraph:
        if self.epsilon != 0.0:
            params = ApproxParams(mode=ADDITIVE, epsilon=self.epsilon)
            return approx_collapse(g, params, self.representation).to_graph()
        if self.alpha != 1.0:
            params = ApproxParams(mode=MULTIPLICATIVE, alpha=self.alpha)
            return approx_collapse(g, params, self.representation).to_graph()
        if self.threads > 1:
            parts = 1 << max(0, (self.threads - 1).bit_length())
            return parallel_backward_collapse(
                g, parts, representation=self.representation
            ).to_graph()
        if self.algorithm == "backward":
            return backward_collapse(g, representation=self.representation).to_graph()
        return forward_collapse(g, representation=self.representation).to_graph()

    def transform(self, X):
        self._validate()
        graphs = _check_graphs(X)
        out = []
        for g in graphs:
            if self.fixpoint:
                result, _ = collapse_to_fixpoint(
                    g,
                    algorithm=self.algorithm,
                    max_rounds=self.max_rounds,
                    representation=self.representation,
                )
                out.append(result.to_graph())
            else:
                reduced = g
                for _ in range(self.rounds):
                    reduced = self._reduce_once(reduced)
                out.append(reduced)
        return out


class FlagPersistence(BaseEstimator, TransformerMixin):
    """Filtered graphs to persistence diagrams of their flag filtrations.

    A verification-scale transformer: the flag complex is expanded one
    dimension above ``max_dim`` under a simplex budget.
    """

    def __init__(self, max_dim: int = 1, budget: int = DEFAULT_BUDGET):
        self.max_dim = max_dim
        self.budget = budget

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        graphs = _check_graphs(X)
        return [
            persistence(
                flag_expand(g, self.max_dim + 1, budget=self.budget), self.max_dim
            )
            for g in graphs
        ]


class ZigzagCollapser(BaseEstimator, TransformerMixin):
    """Reduce zigzag flag filtrations by the alternating two-pass scheme."""

    def __init__(self, passes: int = 4, parts: int = 1):
        self.passes = passes
        self.parts = parts

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        out = []
        for z in X:
            if not isinstance(z, ZigzagFiltration):
                raise GraphError(
                    f"expected ZigzagFiltration samples, got {type(z)!r}"
                )
            out.append(zigzag_collapse(z, passes=self.passes, parts=self.parts))
        return out
