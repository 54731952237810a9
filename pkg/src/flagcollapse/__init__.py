"""Edge-collapse reduction of flag filtrations and zigzag flag filtrations.

The reduction removes or re-grades dominated edges so that the surviving
1-skeleton defines a flag filtration with the same persistence diagram as
the input.  A small exact persistence oracle is included for verification
at desk scale, plus samplers, file formats, a CLI, and scikit-learn style
transformers.
"""

from .approx import ADDITIVE, MULTIPLICATIVE, ApproxParams, approx_collapse
from .collapse import (
    CollapseResult,
    CollapseStats,
    backward_collapse,
    collapse_to_fixpoint,
    forward_collapse,
)
from .datasets import (
    complete_graph,
    oscillating_rips_zigzag,
    rips_graph,
    sample,
)
from .estimators import EdgeCollapser, FlagPersistence, RipsGraph, ZigzagCollapser
from .graph import (
    EdgeNeighborhood,
    FilteredEdge,
    FilteredGraph,
    GraphError,
    build_neighborhood_map,
    edge_neighborhood,
    is_dominated,
)
from .oracle import (
    CLOSED,
    HALF_OPEN,
    OracleBudgetError,
    PersistenceDiagram,
    Simplex,
    SimplicialFiltration,
    bottleneck_distance,
    diagrams_equal,
    flag_expand,
    persistence,
    zigzag_persistence,
)
from .parallel import PartitionPlan, parallel_backward_collapse
from .zigzag import (
    INCLUSION,
    REMOVAL,
    ZigzagError,
    ZigzagEvent,
    ZigzagFiltration,
    pair_events,
    zigzag_collapse,
)

__version__ = "0.1.0"

__all__ = [
    "ADDITIVE",
    "MULTIPLICATIVE",
    "ApproxParams",
    "approx_collapse",
    "CollapseResult",
    "CollapseStats",
    "backward_collapse",
    "collapse_to_fixpoint",
    "forward_collapse",
    "complete_graph",
    "oscillating_rips_zigzag",
    "rips_graph",
    "sample",
    "EdgeCollapser",
    "FlagPersistence",
    "RipsGraph",
    "ZigzagCollapser",
    "EdgeNeighborhood",
    "FilteredEdge",
    "FilteredGraph",
    "GraphError",
    "build_neighborhood_map",
    "edge_neighborhood",
    "is_dominated",
    "CLOSED",
    "HALF_OPEN",
    "OracleBudgetError",
    "PersistenceDiagram",
    "Simplex",
    "SimplicialFiltration",
    "bottleneck_distance",
    "diagrams_equal",
    "flag_expand",
    "persistence",
    "zigzag_persistence",
    "PartitionPlan",
    "parallel_backward_collapse",
    "INCLUSION",
    "REMOVAL",
    "ZigzagError",
    "ZigzagEvent",
    "ZigzagFiltration",
    "pair_events",
    "zigzag_collapse",
    "__version__",
]
