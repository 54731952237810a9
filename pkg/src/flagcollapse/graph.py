"""Graded graphs and edge neighborhoods.

A :class:`FilteredGraph` is the 1-skeleton of a flag (clique) filtration:
vertices carry birth grades, edges carry the grade at which they enter the
complex.  All reduction algorithms in this package work on a mutable
:class:`NeighborhoodMap` derived from such a graph, which stores, for every
vertex, the current grade of each incident edge.

Two interchangeable map representations are provided: a sparse one backed by
per-vertex dictionaries and a dense one backed by a vertex-indexed grade
matrix.  They produce identical results; the dense variant is usually much
faster, the sparse one avoids quadratic memory on graphs with many vertices
and few edges.

Thread-safety: maps support concurrent readers; any mutation requires
exclusive access.  No locking is done internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Union

import numpy as np

INF = math.inf


class GraphError(ValueError):
    """Raised when a graph, edge list, or grade assignment is invalid."""


class FilteredEdge(NamedTuple):
    u: int
    v: int
    t: float


def edge_key(e: FilteredEdge) -> tuple[float, int, int]:
    """Canonical sort key: by grade, ties by vertex pair."""
    return (e.t, e.u, e.v)


def _check_vertex(x) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        raise GraphError(f"vertex id must be an integer, got {x!r}")
    if x < 0:
        raise GraphError(f"vertex id must be non-negative, got {x}")
    return int(x)


@dataclass
class FilteredGraph:
    """Vertex birth grades plus a graded edge list, sorted by (t, u, v).

    Edges are canonicalized to u < v.  Every edge endpoint has a birth grade;
    vertices missing from an explicit births map default to the grade of
    their earliest incident edge.  Birth grades never exceed incident edge
    grades.
    """

    births: dict[int, float] = field(default_factory=dict)
    edges: list[FilteredEdge] = field(default_factory=list)

    @classmethod
    def build(
        cls,
        edges: Iterable[tuple[int, int, float]],
        births: Optional[dict[int, float]] = None,
    ) -> "FilteredGraph":
        """Validate, canonicalize and sort raw edge data into a graph."""
        canon: dict[tuple[int, int], float] = {}
        for raw in edges:
            u, v, t = raw
            u = _check_vertex(u)
            v = _check_vertex(v)
            t = float(t)
            if u == v:
                raise GraphError(f"self-loop on vertex {u} is not an edge")
            if not math.isfinite(t):
                raise GraphError(f"edge ({u}, {v}) has non-finite grade {t}")
            if u > v:
                u, v = v, u
            if (u, v) in canon:
                raise GraphError(f"duplicate edge ({u}, {v})")
            canon[(u, v)] = t

        # explicit births win; implicit ones are the earliest incident grade
        birth_map: dict[int, float] = {
            _check_vertex(x): float(b) for x, b in (births or {}).items()
        }
        for (u, v), t in canon.items():
            for x in (u, v):
                if x not in birth_map:
                    birth_map[x] = t
                elif x not in (births or {}):
                    birth_map[x] = min(birth_map[x], t)
        for b in birth_map.values():
            if not math.isfinite(b):
                raise GraphError(f"vertex birth grade {b} is not a finite number")
        for (u, v), t in canon.items():
            limit = max(birth_map[u], birth_map[v])
            if t < limit:
                raise GraphError(
                    f"edge ({u}, {v}) at grade {t} precedes a vertex birth at {limit}"
                )
        edge_list = sorted(
            (FilteredEdge(u, v, t) for (u, v), t in canon.items()), key=edge_key
        )
        return cls(births=birth_map, edges=edge_list)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.births)

    @property
    def n_vertices(self) -> int:
        return len(self.births)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def grades_distinct(self) -> bool:
        seen = set()
        for e in self.edges:
            if e.t in seen:
                return False
            seen.add(e.t)
        return True

    def copy(self) -> "FilteredGraph":
        return FilteredGraph(births=dict(self.births), edges=list(self.edges))


@dataclass
class EdgeNeighborhood:
    """Common neighbors of an edge at a grade, split into present and future.

    ``present`` holds the vertices already adjacent to both endpoints at the
    query grade; ``future`` holds the remaining common neighbors as
    (vertex, arrival grade) pairs sorted by arrival, where the arrival grade
    is the larger of the two connecting-edge grades.
    """

    present: set[int]
    future: list[tuple[int, float]]


class SparseNeighborhoodMap:
    """Per-vertex dict of neighbor -> current grade; symmetric by construction."""

    representation = "sparse"

    def __init__(self, vertices: Iterable[int]):
        self._adj: dict[int, dict[int, float]] = {int(x): {} for x in vertices}

    # -- basic accessors --------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def grade(self, u: int, v: int) -> float:
        return self._adj[u].get(v, INF)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def set_grade(self, u: int, v: int, t: float) -> None:
        self._adj[u][v] = t
        self._adj[v][u] = t

    def remove(self, u: int, v: int) -> None:
        del self._adj[u][v]
        del self._adj[v][u]

    def neighbor_items(self, u: int) -> list[tuple[int, float]]:
        return sorted(self._adj[u].items())

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def copy(self) -> "SparseNeighborhoodMap":
        out = SparseNeighborhoodMap(self._adj)
        out._adj = {x: dict(nbrs) for x, nbrs in self._adj.items()}
        return out

    # -- neighborhood queries ---------------------------------------------

    def _common(self, u: int, v: int) -> list[tuple[int, float]]:
        nu, nv = self._adj[u], self._adj[v]
        if len(nu) > len(nv):
            nu, nv = nv, nu
        out = []
        for x, g1 in nu.items():
            g2 = nv.get(x)
            if g2 is None:
                continue
            out.append((x, g1 if g1 >= g2 else g2))
        return out

    def edge_neighborhood(self, u: int, v: int, t: float) -> EdgeNeighborhood:
        present: set[int] = set()
        future: list[tuple[float, int]] = []
        for x, a in self._common(u, v):
            if (a <= t) if t != INF else (a < INF):
                present.add(x)
            elif a < INF:
                future.append((a, x))
        future.sort()
        return EdgeNeighborhood(present=present, future=[(x, a) for a, x in future])

    def smallest_dominator(self, u: int, v: int, t: float) -> Optional[int]:
        nbhd = self.edge_neighborhood(u, v, t)
        present = nbhd.present
        for w in sorted(present):
            nw = self._adj[w]
            if all(x == w or nw.get(x, INF) <= t for x in present):
                return w
        return None

    def dominated_at(self, u: int, v: int, t: float) -> bool:
        return self.smallest_dominator(u, v, t) is not None

    # -- backward journey ---------------------------------------------------

    def settle_backward(
        self, u: int, v: int, t: float
    ) -> tuple[Optional[float], int, int]:
        """Delay edge (u, v) from grade t until it stops being dominated.

        Returns (final grade, domination checks, shifts); a final grade of
        None means the edge ran out of future common neighbors while
        dominated and is to be removed.  The map itself is not mutated.
        """
        present: set[int] = set()
        future: list[tuple[float, int]] = []
        for x, a in self._common(u, v):
            if a <= t:
                present.add(x)
            elif a < INF:
                future.append((a, x))
        future.sort()
        checks = shifts = 0

        def find(at: float) -> Optional[int]:
            nonlocal checks
            for w in sorted(present):
                checks += 1
                nw = self._adj[w]
                if all(x == w or nw.get(x, INF) <= at for x in present):
                    return w
            return None

        w = find(t)
        if w is None:
            return t, checks, shifts
        pos = 0
        while True:
            if pos == len(future):
                return None, checks, shifts
            nw = self._adj[w]
            stop = None
            for i in range(pos, len(future)):
                a, x = future[i]
                if nw.get(x, INF) > a:
                    stop = i
                    break
            if stop is None:
                return None, checks, shifts
            t = future[stop][0]
            while pos < len(future) and future[pos][0] <= t:
                present.add(future[pos][1])
                pos += 1
            shifts += 1
            w = find(t)
            if w is None:
                return t, checks, shifts


class DenseNeighborhoodMap:
    """Grade matrix indexed by compacted vertex ids; absent edges are +inf."""

    representation = "dense"

    def __init__(self, vertices: Iterable[int]):
        ids = sorted(int(x) for x in vertices)
        self._ids = np.asarray(ids, dtype=np.int64)
        self._index = {x: i for i, x in enumerate(ids)}
        n = len(ids)
        self._grades = np.full((n, n), INF, dtype=np.float64)

    @property
    def vertices(self) -> list[int]:
        return [int(x) for x in self._ids]

    def grade(self, u: int, v: int) -> float:
        g = self._grades[self._index[u], self._index[v]]
        return float(g)

    def has_edge(self, u: int, v: int) -> bool:
        return self._grades[self._index[u], self._index[v]] < INF

    def set_grade(self, u: int, v: int, t: float) -> None:
        iu, iv = self._index[u], self._index[v]
        self._grades[iu, iv] = t
        self._grades[iv, iu] = t

    def remove(self, u: int, v: int) -> None:
        self.set_grade(u, v, INF)

    def neighbor_items(self, u: int) -> list[tuple[int, float]]:
        row = self._grades[self._index[u]]
        idx = np.flatnonzero(row < INF)
        return [(int(self._ids[i]), float(row[i])) for i in idx]

    def degree(self, u: int) -> int:
        return int(np.count_nonzero(self._grades[self._index[u]] < INF))

    def copy(self) -> "DenseNeighborhoodMap":
        out = DenseNeighborhoodMap.__new__(DenseNeighborhoodMap)
        out._ids = self._ids
        out._index = self._index
        out._grades = self._grades.copy()
        return out

    # -- neighborhood queries ---------------------------------------------

    def edge_neighborhood(self, u: int, v: int, t: float) -> EdgeNeighborhood:
        G = self._grades
        both = np.maximum(G[self._index[u]], G[self._index[v]])
        if t == INF:
            pres = np.flatnonzero(both < INF)
            fut = np.empty(0, dtype=np.int64)
        else:
            pres = np.flatnonzero(both <= t)
            fut = np.flatnonzero((both > t) & (both < INF))
        arr = both[fut]
        order = np.lexsort((fut, arr))
        future = [(int(self._ids[i]), float(both[i])) for i in fut[order]]
        return EdgeNeighborhood(
            present={int(self._ids[i]) for i in pres}, future=future
        )

    def smallest_dominator(self, u: int, v: int, t: float) -> Optional[int]:
        G = self._grades
        both = np.maximum(G[self._index[u]], G[self._index[v]])
        pres = np.flatnonzero(both < INF) if t == INF else np.flatnonzero(both <= t)
        if pres.size == 0:
            return None
        sub = G[np.ix_(pres, pres)]
        bad = (sub > t).sum(axis=1)  # the diagonal is inf, so a dominator has 1
        winners = np.flatnonzero(bad == 1)
        if winners.size:
            return int(self._ids[pres[winners[0]]])
        return None

    def dominated_at(self, u: int, v: int, t: float) -> bool:
        return self.smallest_dominator(u, v, t) is not None

    # -- backward journey ---------------------------------------------------

    def _find_dominator_idx(
        self, pres_mask: np.ndarray, t: float
    ) -> tuple[int, int]:
        """Index of some dominator under pres_mask at grade t, or -1.

        Probes the smallest candidate first (always sufficient on cone-like
        graphs), then falls back to one vectorized scan of all candidates.
        """
        G = self._grades
        pres = np.flatnonzero(pres_mask)
        if pres.size == 0:
            return -1, 0
        first = pres[0]
        row = G[first].take(pres)
        if np.count_nonzero(row > t) == 1:  # only its own inf diagonal entry
            return int(first), 1
        if pres.size == 1:
            return -1, 1
        sub = G[np.ix_(pres, pres)]
        bad = (sub > t).sum(axis=1)
        winners = np.flatnonzero(bad == 1)
        if winners.size:
            return int(pres[winners[0]]), int(pres.size)
        return -1, int(pres.size)

    def settle_backward(
        self, u: int, v: int, t: float
    ) -> tuple[Optional[float], int, int]:
        """Dense counterpart of :meth:`SparseNeighborhoodMap.settle_backward`.

        While a witness stays valid the edge jumps in one step over every
        future arrival the witness already covers; a fresh dominator search
        only happens where the current witness provably fails.
        """
        G = self._grades
        iu, iv = self._index[u], self._index[v]
        both = np.maximum(G[iu], G[iv])
        pres_mask = both <= t
        fut = np.flatnonzero((both > t) & (both < INF))
        arr = both[fut]
        order = np.lexsort((fut, arr))
        fut = fut[order]
        arr = arr[order]
        checks = shifts = 0

        w, c = self._find_dominator_idx(pres_mask, t)
        checks += c
        if w < 0:
            return t, checks, shifts
        pos = 0
        while True:
            if pos == fut.size:
                return None, checks, shifts
            covered = G[w].take(fut[pos:]) <= arr[pos:]
            misses = np.flatnonzero(~covered)
            if misses.size == 0:
                return None, checks, shifts
            t = float(arr[pos + misses[0]])
            stop = pos + int(np.searchsorted(arr[pos:], t, side="right"))
            pres_mask[fut[pos:stop]] = True
            pos = stop
            shifts += 1
            w, c = self._find_dominator_idx(pres_mask, t)
            checks += c
            if w < 0:
                return t, checks, shifts


NeighborhoodMap = Union[SparseNeighborhoodMap, DenseNeighborhoodMap]


def build_neighborhood_map(
    g: FilteredGraph, representation: str = "dense"
) -> NeighborhoodMap:
    """Symmetric neighbor -> grade map holding exactly g's edges.

    ``representation`` selects the dense vertex-indexed table or the sparse
    dictionary variant; both expose the same operations.
    """
    if representation == "dense":
        nmap: NeighborhoodMap = DenseNeighborhoodMap(g.births)
    elif representation == "sparse":
        nmap = SparseNeighborhoodMap(g.births)
    else:
        raise GraphError(f"unknown representation {representation!r}")
    seen = set()
    for u, v, t in g.edges:
        if (u, v) in seen:
            raise GraphError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        nmap.set_grade(u, v, t)
    return nmap


def edge_neighborhood(
    nmap: NeighborhoodMap, e: FilteredEdge, t: float
) -> EdgeNeighborhood:
    """Present and future common neighbors of e in the graph at grade t."""
    u, v = (e.u, e.v) if e.u < e.v else (e.v, e.u)
    if not nmap.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) is not in the map")
    return nmap.edge_neighborhood(u, v, t)

def is_dominated(
    nmap: NeighborhoodMap, e: FilteredEdge, t: float
) -> Optional[int]:
    """Smallest vertex whose closed neighborhood at t contains the edge's.

    Returns None when no such vertex exists; in particular when the edge has
    no present common neighbor at t, since any dominating vertex would have
    to be adjacent to both endpoints.
    """
    u, v = (e.u, e.v) if e.u < e.v else (e.v, e.u)
    if not nmap.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) is not in the map")
    if t < nmap.grade(u, v):
        raise GraphError(
            f"domination query at grade {t} precedes the edge's grade {nmap.grade(u, v)}"
        )
    return nmap.smallest_dominator(u, v, t)
