"""Independent persistence ground truth for verification at desk scale.

Everything here is deliberately simple and exact: flag expansion by clique
enumeration, standard persistence by boundary-matrix reduction over Z/2,
zigzag persistence by explicit stage homology plus generalized-rank
counting, and bottleneck distance by binary search over bipartite
matchings.  These routines validate the collapse algorithms; they are not a
production persistence engine, and a configurable simplex budget guards
against accidentally large inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from ._f2 import Echelon, TrackedBasis, nullspace_columns, nullspace_rows, rank_of
from .graph import FilteredGraph
from .zigzag import INCLUSION, ZigzagFiltration

INF = math.inf

DEFAULT_BUDGET = 50_000


class OracleBudgetError(RuntimeError):
    """The simplex budget was exceeded; use a smaller instance."""


class Simplex(NamedTuple):
    vertices: tuple[int, ...]
    grade: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def _simplex_key(s: Simplex) -> tuple[float, int, tuple[int, ...]]:
    return (s.grade, s.dim, s.vertices)


@dataclass
class SimplicialFiltration:
    """Simplices sorted by (grade, dimension, vertices); closed under faces."""

    simplices: list[Simplex] = field(default_factory=list)

    @property
    def n_simplices(self) -> int:
        return len(self.simplices)


def flag_expand(
    g: FilteredGraph, max_dim: int, budget: int = DEFAULT_BUDGET
) -> SimplicialFiltration:
    """All cliques of g with at most max_dim+1 vertices, at their flag grades.

    The grade of a clique is the maximum over its vertices' births and its
    edges' grades.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    adj: dict[int, dict[int, float]] = {x: {} for x in g.births}
    for u, v, t in g.edges:
        adj[u][v] = t
        adj[v][u] = t
    out: list[Simplex] = []

    def emit(vertices: tuple[int, ...], grade: float) -> None:
        out.append(Simplex(vertices, grade))
        if len(out) > budget:
            raise OracleBudgetError(
                f"flag expansion exceeds the budget of {budget} simplices; "
                "use a smaller instance or raise the budget"
            )

    def extend(clique: tuple[int, ...], grade: float, cands: dict[int, float]):
        for w in sorted(cands):
            new_grade = max(grade, cands[w])
            new_clique = clique + (w,)
            emit(new_clique, new_grade)
            if len(new_clique) <= max_dim:
                nw = adj[w]
                new_cands = {
                    x: max(a, nw[x]) for x, a in cands.items() if x > w and x in nw
                }
                if new_cands:
                    extend(new_clique, new_grade, new_cands)

    for v in sorted(g.births):
        birth = g.births[v]
        emit((v,), birth)
        if max_dim >= 1:
            cands = {
                x: max(birth, g.births[x], t) for x, t in adj[v].items() if x > v
            }
            if cands:
                extend((v,), birth, cands)

    out.sort(key=_simplex_key)
    return SimplicialFiltration(out)


# ---------------------------------------------------------------------------
# persistence diagrams
# ---------------------------------------------------------------------------

HALF_OPEN = "half_open"
CLOSED = "closed"


@dataclass
class PersistenceDiagram:
    """Per-dimension multiset of (birth, death) grade pairs.

    ``convention`` records whether intervals are half-open [b, d) with an
    infinite death for essential classes (standard persistence) or closed
    [b, d] (zigzag persistence).
    """

    points: dict[int, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    convention: str = HALF_OPEN

    @classmethod
    def make(
        cls, points: dict[int, Iterable[tuple[float, float]]], convention: str
    ) -> "PersistenceDiagram":
        clean = {}
        for dim, pts in points.items():
            pts = tuple(sorted((float(b), float(d)) for b, d in pts))
            if pts:
                clean[int(dim)] = pts
        return cls(points=clean, convention=convention)

    def in_dimension(self, dim: int) -> list[tuple[float, float]]:
        return list(self.points.get(dim, ()))

    def dimensions(self) -> list[int]:
        return sorted(self.points)

    @property
    def n_points(self) -> int:
        return sum(len(p) for p in self.points.values())


def diagrams_equal(a: PersistenceDiagram, b: PersistenceDiagram) -> bool:
    """Exact multiset equality per dimension."""
    if a.convention != b.convention:
        raise ValueError(
            f"cannot compare a {a.convention} diagram with a {b.convention} one"
        )
    return a.points == b.points


def persistence(f: SimplicialFiltration, max_dim: int) -> PersistenceDiagram:
    """Boundary-matrix reduction over Z/2, half-open interval convention.

    The input filtration must contain the (max_dim+1)-simplices for deaths
    in dimension max_dim to be found.
    """
    sims = f.simplices
    index = {s.vertices: i for i, s in enumerate(sims)}
    if len(index) != len(sims):
        raise ValueError("filtration contains a duplicate simplex")
    cols: list[int] = []
    for s in sims:
        col = 0
        if s.dim > 0:
            for k in range(len(s.vertices)):
                face = s.vertices[:k] + s.vertices[k + 1 :]
                fi = index.get(face)
                if fi is None:
                    raise ValueError(f"face {face} missing from the filtration")
                if fi >= index[s.vertices]:
                    raise ValueError(f"face {face} does not precede its coface")
                col ^= 1 << fi
        cols.append(col)

    low_owner: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    for j in range(len(cols)):
        col = cols[j]
        while col:
            low = col.bit_length() - 1
            k = low_owner.get(low)
            if k is None:
                break
            col ^= cols[k]
        cols[j] = col
        if col:
            low = col.bit_length() - 1
            low_owner[low] = j
            pairs.append((low, j))

    killed = {i for i, _ in pairs}
    points: dict[int, list[tuple[float, float]]] = {}
    for i, j in pairs:
        dim = sims[i].dim
        if dim <= max_dim and sims[i].grade != sims[j].grade:
            points.setdefault(dim, []).append((sims[i].grade, sims[j].grade))
    for j, s in enumerate(sims):
        if cols[j] == 0 and j not in killed and s.dim <= max_dim:
            points.setdefault(s.dim, []).append((s.grade, INF))
    return PersistenceDiagram.make(points, HALF_OPEN)


# ---------------------------------------------------------------------------
# zigzag persistence
# ---------------------------------------------------------------------------


def _stage_cliques(
    vertices: list[int],
    adj: dict[int, set[int]],
    max_card: int,
    budget: int,
) -> dict[int, list[tuple[int, ...]]]:
    """Cliques of one stage graph, by dimension, in sorted order."""
    by_dim: dict[int, list[tuple[int, ...]]] = {d: [] for d in range(max_card)}
    count = 0

    def emit(clique: tuple[int, ...]):
        nonlocal count
        by_dim[len(clique) - 1].append(clique)
        count += 1
        if count > budget:
            raise OracleBudgetError(
                f"zigzag stage expansion exceeds the budget of {budget} simplices"
            )

    def extend(clique: tuple[int, ...], cands: set[int]):
        for w in sorted(cands):
            new_clique = clique + (w,)
            emit(new_clique)
            if len(new_clique) < max_card:
                new_cands = {x for x in cands if x > w and x in adj[w]}
                if new_cands:
                    extend(new_clique, new_cands)

    for v in vertices:
        emit((v,))
        if max_card > 1:
            cands = {x for x in adj[v] if x > v}
            if cands:
                extend((v,), cands)
    return by_dim


class _StageHomology:
    """Explicit H_p basis of one stage with coordinates for incoming cycles."""

    def __init__(self, cliques: dict[int, list[tuple[int, ...]]], p: int):
        self.p_index = {s: i for i, s in enumerate(cliques.get(p, []))}
        faces = cliques.get(p - 1, [])
        face_index = {s: i for i, s in enumerate(faces)}

        def boundary(simplex: tuple[int, ...]) -> int:
            col = 0
            if len(simplex) > 1:
                for k in range(len(simplex)):
                    face = simplex[:k] + simplex[k + 1 :]
                    col ^= 1 << face_index[face]
            return col

        cycle_combs = nullspace_columns(
            [boundary(s) for s in cliques.get(p, [])]
        )
        self.boundaries = Echelon()
        for s in cliques.get(p + 1, []):
            col = 0
            for k in range(len(s)):
                face = s[:k] + s[k + 1 :]
                col ^= 1 << self.p_index[face]
            self.boundaries.add(col)
        self.basis_cycles: list[int] = []
        self._tracked = TrackedBasis()
        self._dense: dict[int, int] = {}  # tracked add index -> basis position
        for z in cycle_combs:
            idx = self._tracked.n_added
            if self._tracked.add(self.boundaries.reduce(z)):
                self._dense[idx] = len(self.basis_cycles)
                self.basis_cycles.append(z)

    @property
    def dim(self) -> int:
        return len(self.basis_cycles)

    def express(self, chain: int) -> int:
        """Coordinates of a cycle in the H basis (bitmask)."""
        comb = self._tracked.express(self.boundaries.reduce(chain))
        if comb is None:
            raise AssertionError("chain is not a cycle of this stage")
        out = 0
        i = 0
        while comb:
            if comb & 1:
                out |= 1 << self._dense[i]
            comb >>= 1
            i += 1
        return out


def _reindex(cycle: int, src: dict[tuple[int, ...], int], dst: dict[tuple[int, ...], int]) -> int:
    src_list = list(src)
    out = 0
    i = 0
    while cycle:
        if cycle & 1:
            out |= 1 << dst[src_list[i]]
        cycle >>= 1
        i += 1
    return out


def _generalized_rank(
    dims: list[int], arrows: list[tuple[bool, list[int]]], i: int, j: int
) -> int:
    """Number of interval summands containing stages [i, j].

    Computed as the rank of the canonical map from the limit to the colimit
    of the sub-diagram spanned by stages i..j.
    """
    offs = [0]
    for k in range(i, j + 1):
        offs.append(offs[-1] + dims[k])
    width = offs[-1]
    constraints: list[int] = []
    relations: list[int] = []
    for k in range(i, j):
        forward, cols = arrows[k]
        a, b = offs[k - i], offs[k + 1 - i]  # offsets of V_k and V_{k+1}
        if forward:
            rows = [1 << (b + r) for r in range(dims[k + 1])]
            for s, col in enumerate(cols):
                rel = 1 << (a + s)
                r = 0
                while col:
                    if col & 1:
                        rows[r] |= 1 << (a + s)
                        rel |= 1 << (b + r)
                    col >>= 1
                    r += 1
                relations.append(rel)
        else:
            rows = [1 << (a + r) for r in range(dims[k])]
            for s, col in enumerate(cols):
                rel = 1 << (b + s)
                r = 0
                while col:
                    if col & 1:
                        rows[r] |= 1 << (b + s)
                        rel |= 1 << (a + r)
                    col >>= 1
                    r += 1
                relations.append(rel)
        constraints.extend(rows)
    sections = nullspace_rows(constraints, width)
    base = Echelon()
    for rel in relations:
        base.add(rel)
    block_i = ((1 << dims[i]) - 1) << 0  # V_i occupies the lowest coordinates
    rank = 0
    for s in sections:
        if base.add(s & block_i):
            rank += 1
    return rank


def zigzag_persistence(
    z: ZigzagFiltration, max_dim: int, budget: int = DEFAULT_BUDGET
) -> PersistenceDiagram:
    """Closed-interval zigzag diagram of the flag complexes of the stages.

    Every event grade (and vertex birth grade) contributes a stage; grades
    with removals contribute the intermediate post-removal stage as well.
    Interval multiplicities come from the generalized rank of each stage
    range, inverted over interval containment.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    grade_set = {ev.grade for ev in z.events} | set(z.births.values())
    if z.effective_range() is not None:
        grade_set |= set(z.effective_range())
    grades = sorted(grade_set)
    if not grades:
        return PersistenceDiagram.make({}, CLOSED)

    by_grade: dict[float, list] = {g: [] for g in grades}
    for ev in z.events:
        by_grade[ev.grade].append(ev)

    stage_grades: list[float] = []
    stage_cliques = []
    stage_forward: list[bool] = []  # orientation of arrow k -> k+1
    alive: set[tuple[int, int]] = set()
    max_card = max_dim + 2
    for g in grades:
        removals = []
        for ev in by_grade[g]:
            if ev.direction == INCLUSION:
                alive.add((ev.u, ev.v))
            else:
                removals.append(ev)
        vertices = sorted(x for x, b in z.births.items() if b <= g)
        adj: dict[int, set[int]] = {x: set() for x in vertices}
        for u, v in alive:
            adj[u].add(v)
            adj[v].add(u)
        if stage_cliques:
            stage_forward.append(True)  # previous stage includes into this one
        stage_grades.append(g)
        stage_cliques.append(_stage_cliques(vertices, adj, max_card, budget))
        if removals:
            for ev in removals:
                alive.discard((ev.u, ev.v))
            adj = {x: set() for x in vertices}
            for u, v in alive:
                adj[u].add(v)
                adj[v].add(u)
            stage_forward.append(False)  # intermediate graph includes backward
            stage_grades.append(g)
            stage_cliques.append(_stage_cliques(vertices, adj, max_card, budget))

    m = len(stage_cliques)
    points: dict[int, list[tuple[float, float]]] = {}
    for p in range(max_dim + 1):
        homs = [_StageHomology(c, p) for c in stage_cliques]
        dims = [h.dim for h in homs]
        arrows: list[tuple[bool, list[int]]] = []
        for k in range(m - 1):
            if stage_forward[k]:
                src, dst = homs[k], homs[k + 1]
            else:
                src, dst = homs[k + 1], homs[k]
            cols = [
                dst.express(_reindex(c, src.p_index, dst.p_index))
                for c in src.basis_cycles
            ]
            arrows.append((stage_forward[k], cols))

        memo: dict[tuple[int, int], int] = {}

        def r(i: int, j: int) -> int:
            if i < 0 or j >= m or i > j:
                return 0
            key = (i, j)
            if key not in memo:
                memo[key] = _generalized_rank(dims, arrows, i, j)
            return memo[key]

        for i in range(m):
            for j in range(i, m):
                mu = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
                if mu < 0:
                    raise AssertionError("negative interval multiplicity")
                for _ in range(mu):
                    points.setdefault(p, []).append(
                        (stage_grades[i], stage_grades[j])
                    )
    return PersistenceDiagram.make(points, CLOSED)


# ---------------------------------------------------------------------------
# bottleneck distance
# ---------------------------------------------------------------------------


def _matching_feasible(costs: list[list[float]], r: float) -> bool:
    """Perfect matching in the bipartite graph of costs <= r (Kuhn's)."""
    n = len(costs)
    if n == 0:
        return True
    match_r: list[Optional[int]] = [None] * n

    def try_kuhn(i: int, seen: list[bool]) -> bool:
        for j in range(n):
            if costs[i][j] <= r and not seen[j]:
                seen[j] = True
                if match_r[j] is None or try_kuhn(match_r[j], seen):
                    match_r[j] = i
                    return True
        return False

    for i in range(n):
        if not try_kuhn(i, [False] * n):
            return False
    return True


def _finite_bottleneck(
    a: list[tuple[float, float]], b: list[tuple[float, float]]
) -> float:
    if not a and not b:
        return 0.0
    diag_a = [abs(d - bb) / 2 for bb, d in a]
    diag_b = [abs(d - bb) / 2 for bb, d in b]
    na, nb = len(a), len(b)
    n = na + nb
    # rows: points of a then diagonal slots for b; columns: points of b then
    # diagonal slots for a
    costs = [[0.0] * n for _ in range(n)]
    for i in range(na):
        for j in range(nb):
            costs[i][j] = max(abs(a[i][0] - b[j][0]), abs(a[i][1] - b[j][1]))
        for j in range(na):
            costs[i][nb + j] = diag_a[i] if j == i else INF
    for i in range(nb):
        for j in range(nb):
            costs[na + i][j] = diag_b[i] if j == i else INF
        for j in range(na):
            costs[na + i][nb + j] = 0.0
    candidates = sorted(
        {0.0}
        | {costs[i][j] for i in range(n) for j in range(n) if costs[i][j] < INF}
    )
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matching_feasible(costs, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def _one_sided_bottleneck(xs: list[float], ys: list[float]) -> float:
    """Min-max matching of two equal-size 1-d point sets: sort and zip."""
    if len(xs) != len(ys):
        return INF
    xs = sorted(xs)
    ys = sorted(ys)
    return max((abs(x - y) for x, y in zip(xs, ys)), default=0.0)


def bottleneck_distance(
    a: PersistenceDiagram, b: PersistenceDiagram, dimension: int
) -> float:
    """Exact bottleneck distance in one dimension.

    Finite points may be matched to the diagonal; points with an infinite
    coordinate (infinite death, or infinite negative birth after a log
    rescale) only match points with the same infinity pattern, and a count
    mismatch there makes the distance infinite.
    """
    groups_a: dict[tuple[bool, bool], list] = {}
    groups_b: dict[tuple[bool, bool], list] = {}
    for pts, groups in ((a.in_dimension(dimension), groups_a),
                        (b.in_dimension(dimension), groups_b)):
        for birth, death in pts:
            sig = (math.isinf(birth), math.isinf(death))
            groups.setdefault(sig, []).append((birth, death))
    best = 0.0
    for sig in set(groups_a) | set(groups_b):
        ga = groups_a.get(sig, [])
        gb = groups_b.get(sig, [])
        if sig == (False, False):
            best = max(best, _finite_bottleneck(ga, gb))
        elif len(ga) != len(gb):
            return INF
        elif sig == (True, True):
            continue  # fully infinite points match at distance 0
        elif sig == (True, False):
            best = max(
                best, _one_sided_bottleneck([d for _, d in ga], [d for _, d in gb])
            )
        else:
            best = max(
                best, _one_sided_bottleneck([x for x, _ in ga], [x for x, _ in gb])
            )
    return best
