"""Reduction of zigzag flag filtrations.

A zigzag flag filtration is stored as a globally ordered list of edge
events: inclusions and removals, each at a grade.  At a single grade the
stage order is fixed by the intermediate-graph convention: the grade's
inclusions build the graph ``G_t``, then all of the grade's removals yield
an intermediate graph ``G_t'``, and the next grade's inclusions depart from
there.

``zigzag_collapse`` alternates a backward pass over inclusions with a
mirror-image forward pass over removals.  A dominated inclusion is shifted
toward the end one grade at a time; crossing a grade that has removals
additionally requires the edge to be dominated in the post-removal graph,
and an inclusion meeting its own removal cancels against it.  Removals are
handled symmetrically toward the beginning, since a removal is an inclusion
seen from the opposite end of the filtration.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .graph import FilteredEdge, FilteredGraph, GraphError, _check_vertex, edge_key

INCLUSION = "inclusion"
REMOVAL = "removal"


class ZigzagError(ValueError):
    """Raised for inconsistent event sequences or invalid splits."""


class ZigzagEvent(NamedTuple):
    u: int
    v: int
    grade: float
    direction: str  # INCLUSION or REMOVAL


def _dir_rank(direction: str) -> int:
    return 0 if direction == INCLUSION else 1


def event_key(ev: ZigzagEvent) -> tuple[float, int, int, int]:
    return (ev.grade, _dir_rank(ev.direction), ev.u, ev.v)


@dataclass
class ZigzagFiltration:
    """Vertex births plus a consistent, canonically ordered event list.

    ``grade_range`` pins the filtration's index span.  Reduction may empty
    the leading or trailing grades of events, but the reduced sequence
    still runs over the same grades (with repeated graphs), so classes
    alive to the end keep their right endpoint; the range records that.
    When absent, the span of the events and births is used.
    """

    births: dict[int, float] = field(default_factory=dict)
    events: list[ZigzagEvent] = field(default_factory=list)
    grade_range: Optional[tuple[float, float]] = None

    @classmethod
    def build(
        cls,
        events: Iterable[tuple[int, int, float, str]],
        births: Optional[dict[int, float]] = None,
        grade_range: Optional[tuple[float, float]] = None,
    ) -> "ZigzagFiltration":
        canon: list[ZigzagEvent] = []
        for u, v, grade, direction in events:
            u = _check_vertex(u)
            v = _check_vertex(v)
            if u == v:
                raise ZigzagError(f"self-loop event on vertex {u}")
            if u > v:
                u, v = v, u
            grade = float(grade)
            if not math.isfinite(grade):
                raise ZigzagError(f"event for edge ({u}, {v}) has grade {grade}")
            if direction not in (INCLUSION, REMOVAL):
                raise ZigzagError(f"unknown event direction {direction!r}")
            canon.append(ZigzagEvent(u, v, grade, direction))
        canon.sort(key=event_key)

        per_edge: dict[tuple[int, int], list[ZigzagEvent]] = {}
        for ev in canon:
            per_edge.setdefault((ev.u, ev.v), []).append(ev)
        for (u, v), evs in per_edge.items():
            expect = INCLUSION
            last = None
            for ev in evs:
                if ev.direction != expect:
                    raise ZigzagError(
                        f"edge ({u}, {v}): unexpected {ev.direction} at grade {ev.grade}"
                    )
                if last is not None and ev.grade < last:
                    raise ZigzagError(
                        f"edge ({u}, {v}): event at grade {ev.grade} out of order"
                    )
                # a removal may share its inclusion's grade; a re-insertion
                # at the grade of the preceding removal would reverse the
                # within-grade stage order and is rejected
                if (
                    last is not None
                    and ev.grade == last
                    and ev.direction == INCLUSION
                ):
                    raise ZigzagError(
                        f"edge ({u}, {v}): re-inserted at grade {ev.grade} "
                        "in the same stage as its removal"
                    )
                last = ev.grade
                expect = REMOVAL if expect == INCLUSION else INCLUSION

        birth_map: dict[int, float] = {
            _check_vertex(x): float(b) for x, b in (births or {}).items()
        }
        for ev in canon:
            for x in (ev.u, ev.v):
                if x not in birth_map:
                    birth_map[x] = ev.grade
                elif x not in (births or {}):
                    birth_map[x] = min(birth_map[x], ev.grade)
        for ev in canon:
            limit = max(birth_map[ev.u], birth_map[ev.v])
            if ev.grade < limit:
                raise ZigzagError(
                    f"edge ({ev.u}, {ev.v}) event at grade {ev.grade} precedes "
                    f"a vertex birth at {limit}"
                )
        if grade_range is not None:
            lo, hi = float(grade_range[0]), float(grade_range[1])
            all_grades = [ev.grade for ev in canon] + list(birth_map.values())
            if all_grades and not (lo <= min(all_grades) and hi >= max(all_grades)):
                raise ZigzagError(
                    f"grade range [{lo}, {hi}] does not cover all events and births"
                )
            grade_range = (lo, hi)
        return cls(births=birth_map, events=canon, grade_range=grade_range)

    @classmethod
    def from_graph(cls, g: FilteredGraph) -> "ZigzagFiltration":
        """Monotone zigzag: every edge included at its grade, never removed."""
        return cls.build(
            [(e.u, e.v, e.t, INCLUSION) for e in g.edges], births=dict(g.births)
        )

    def to_graph(self) -> FilteredGraph:
        """Inverse of :meth:`from_graph`; only valid without removals."""
        if any(ev.direction == REMOVAL for ev in self.events):
            raise ZigzagError("filtration has removals; not a monotone filtration")
        return FilteredGraph.build(
            [(ev.u, ev.v, ev.grade) for ev in self.events], births=dict(self.births)
        )

    @property
    def n_events(self) -> int:
        return len(self.events)

    def effective_range(self) -> Optional[tuple[float, float]]:
        if self.grade_range is not None:
            return self.grade_range
        grades = [ev.grade for ev in self.events] + list(self.births.values())
        if not grades:
            return None
        return (min(grades), max(grades))

    def grades(self) -> list[float]:
        return sorted({ev.grade for ev in self.events})

    def stages(self) -> list[tuple[float, bool, frozenset[tuple[int, int]]]]:
        """Materialized stage graphs as (grade, after_removals, edge set).

        For every grade the ``G_t`` stage is listed; the intermediate
        ``G_t'`` stage follows only when the grade has removals.
        """
        out = []
        alive: set[tuple[int, int]] = set()
        by_grade: dict[float, list[ZigzagEvent]] = {}
        for ev in self.events:
            by_grade.setdefault(ev.grade, []).append(ev)
        for g in sorted(by_grade):
            removals = []
            for ev in by_grade[g]:
                if ev.direction == INCLUSION:
                    alive.add((ev.u, ev.v))
                else:
                    removals.append(ev)
            out.append((g, False, frozenset(alive)))
            if removals:
                for ev in removals:
                    alive.discard((ev.u, ev.v))
                out.append((g, True, frozenset(alive)))
        return out


def pair_events(
    z: ZigzagFiltration,
) -> dict[tuple[int, int], list[tuple[float, Optional[float]]]]:
    """Pair each inclusion with the next removal of the same edge.

    The final inclusion of an edge that is never removed again is paired
    with None.
    """
    out: dict[tuple[int, int], list[tuple[float, Optional[float]]]] = {}
    for ev in z.events:
        pair = (ev.u, ev.v)
        if ev.direction == INCLUSION:
            out.setdefault(pair, []).append((ev.grade, None))
        else:
            pairs = out[pair]
            pairs[-1] = (pairs[-1][0], ev.grade)
    return out


# ---------------------------------------------------------------------------
# mutable working state
# ---------------------------------------------------------------------------


class _Event:
    __slots__ = ("u", "v", "grade", "inclusion", "alive", "beyond")

    def __init__(self, u, v, grade, inclusion):
        self.u = u
        self.v = v
        self.grade = grade
        self.inclusion = inclusion
        self.alive = True
        # while deferred past a split boundary B, the inclusion has left
        # every stage <= B but is still present in the stages above B
        self.beyond: Optional[float] = None

    @property
    def pair(self):
        return (self.u, self.v)


class _ZigzagState:
    """Event list under mutation, with stage materialization on demand."""

    def __init__(self, z: ZigzagFiltration):
        self.births = dict(z.births)
        self.grade_range = z.effective_range()
        self.events: list[_Event] = [
            _Event(ev.u, ev.v, ev.grade, ev.direction == INCLUSION)
            for ev in z.events
        ]
        self.per_edge: dict[tuple[int, int], list[_Event]] = {}
        for ev in self.events:
            self.per_edge.setdefault(ev.pair, []).append(ev)
        self.version = 0
        self._stage_cache: dict[tuple[float, bool], dict[int, set[int]]] = {}
        self._grade_cache: Optional[list[float]] = None

    # -- bookkeeping -------------------------------------------------------

    def _touch(self) -> None:
        self.version += 1
        self._stage_cache.clear()
        self._grade_cache = None

    def live_grades(self) -> list[float]:
        if self._grade_cache is None:
            self._grade_cache = sorted(
                {ev.grade for ev in self.events if ev.alive and ev.beyond is None}
            )
        return self._grade_cache

    def next_grade(self, g: float, ceiling: Optional[float]) -> Optional[float]:
        grades = self.live_grades()
        i = bisect_right(grades, g)
        if i == len(grades):
            return None
        nxt = grades[i]
        if ceiling is not None and nxt > ceiling:
            return None
        return nxt

    def prev_grade(self, g: float) -> Optional[float]:
        grades = self.live_grades()
        i = bisect_left(grades, g)
        return grades[i - 1] if i > 0 else None

    def edge_events(self, pair) -> list[_Event]:
        return [ev for ev in self.per_edge[pair] if ev.alive]

    def has_removals_at(self, g: float) -> bool:
        return any(
            ev.alive and ev.beyond is None and not ev.inclusion and ev.grade == g
            for ev in self.events
        )

    def has_inclusions_at(self, g: float) -> bool:
        return any(
            ev.alive and ev.beyond is None and ev.inclusion and ev.grade == g
            for ev in self.events
        )

    # -- stage graphs --------------------------------------------------------

    def adjacency_at(self, g: float, post: bool) -> dict[int, set[int]]:
        key = (g, post)
        cached = self._stage_cache.get(key)
        if cached is not None:
            return cached
        adj: dict[int, set[int]] = {x: set() for x in self.births}
        for pair, evs in self.per_edge.items():
            state = False
            for ev in evs:
                if not ev.alive:
                    continue
                if ev.beyond is not None:
                    if g > ev.beyond:
                        state = True
                    continue
                eg = ev.grade
                if eg < g or (eg == g and (ev.inclusion or post)):
                    state = ev.inclusion
                elif eg > g:
                    break
            if state:
                u, v = pair
                adj[u].add(v)
                adj[v].add(u)
        self._stage_cache[key] = adj
        return adj

    def dominated_at(self, pair, g: float, post: bool) -> bool:
        adj = self.adjacency_at(g, post)
        u, v = pair
        common = adj[u] & adj[v]
        for w in common:
            nw = adj[w]
            if all(x == w or x in nw for x in common):
                return True
        return False

    # -- mutations -----------------------------------------------------------

    def move(self, ev: _Event, grade: float) -> None:
        # an inclusion only ever moves up to at most the grade of the edge's
        # next event, a removal down to at least its inclusion's grade, so
        # the per-edge event order never changes
        ev.grade = grade
        self._touch()

    def drop(self, *evs: _Event) -> None:
        for ev in evs:
            ev.alive = False
        self._touch()

    def to_filtration(self) -> ZigzagFiltration:
        return ZigzagFiltration.build(
            [
                (ev.u, ev.v, ev.grade, INCLUSION if ev.inclusion else REMOVAL)
                for ev in self.events
                if ev.alive
            ],
            births=dict(self.births),
            grade_range=self.grade_range,
        )


# ---------------------------------------------------------------------------
# the two passes
# ---------------------------------------------------------------------------


def _next_event_of_edge(state: _ZigzagState, ev: _Event) -> Optional[_Event]:
    evs = state.edge_events(ev.pair)
    i = evs.index(ev)
    return evs[i + 1] if i + 1 < len(evs) else None


def _prev_event_of_edge(state: _ZigzagState, ev: _Event) -> Optional[_Event]:
    evs = state.edge_events(ev.pair)
    i = evs.index(ev)
    return evs[i - 1] if i > 0 else None


def _settle_inclusion(
    state: _ZigzagState,
    ev: _Event,
    ceiling: Optional[float],
    trim_at_end: bool,
    deferred: list[_Event],
) -> int:
    """Shift one dominated inclusion toward the end as far as the rules allow.

    Returns the number of effective operations (shifts, cancellations,
    trims).  When the next grade lies beyond ``ceiling`` the event is left
    in place and recorded in ``deferred`` for the caller to resume later in
    a wider context; trimming at the true end only happens when
    ``trim_at_end`` is set.
    """
    changed = 0
    while True:
        g = ev.grade
        if not state.dominated_at(ev.pair, g, post=False):
            return changed
        nxt = _next_event_of_edge(state, ev)
        if nxt is not None and nxt.grade == g:
            # inserted and removed at the same grade while dominated
            state.drop(ev, nxt)
            return changed + 1
        if state.has_removals_at(g) and not state.dominated_at(
            ev.pair, g, post=True
        ):
            return changed  # shift across the removals is refused
        nxt_g = state.next_grade(g, ceiling)
        if nxt_g is None:
            if ceiling is not None:
                # leaves the stages of this context; the caller resumes the
                # shift against the merged state
                ev.beyond = ceiling
                state._touch()
                deferred.append(ev)
                return changed
            if not trim_at_end:
                raise AssertionError("unbounded context must trim at the end")
            state.drop(ev)  # dominated past the final grade
            return changed + 1
        state.move(ev, nxt_g)
        changed += 1


def _settle_removal(state: _ZigzagState, ev: _Event) -> int:
    """Mirror image of :func:`_settle_inclusion`, toward the beginning."""
    changed = 0
    while True:
        g = ev.grade
        if not state.dominated_at(ev.pair, g, post=False):
            return changed
        prev = _prev_event_of_edge(state, ev)
        if prev is not None and prev.inclusion and prev.grade == g:
            state.drop(prev, ev)
            return changed + 1
        prev_g = state.prev_grade(g)
        if prev_g is None:
            return changed
        if state.has_inclusions_at(g) and not state.dominated_at(
            ev.pair, prev_g, post=True
        ):
            return changed
        state.move(ev, prev_g)
        changed += 1


def _split_snapshot(snapshot, parts):
    """Boundary grade splitting the snapshot roughly in half, or None."""
    grades = sorted({ev.grade for ev in snapshot})
    if len(grades) < 2 or parts < 2:
        return None
    mid = len(grades) // 2
    return grades[mid - 1]


def _pair_straddles(state: _ZigzagState, boundary: float) -> bool:
    for pair, evs in state.per_edge.items():
        live = [ev for ev in evs if ev.alive]
        for i in range(0, len(live) - 1, 2):
            inc, rem = live[i], live[i + 1]
            if inc.grade <= boundary < rem.grade:
                return True
    return False


def _inclusion_pass(
    state: _ZigzagState,
    snapshot: list[_Event],
    ceiling: Optional[float],
    trim_at_end: bool,
    parts: int,
    pool: Optional[ThreadPoolExecutor],
) -> tuple[list[_Event], int]:
    if parts > 1:
        boundary = _split_snapshot(snapshot, parts)
        if boundary is not None:
            if _pair_straddles(state, boundary):
                raise ZigzagError(
                    f"split at grade {boundary} separates an inclusion from "
                    "its paired removal"
                )
            left = [ev for ev in snapshot if ev.grade <= boundary]
            right = [ev for ev in snapshot if ev.grade > boundary]
            if pool is not None:
                f_right = pool.submit(
                    _inclusion_pass, state, right, ceiling, trim_at_end,
                    parts // 2, pool,
                )
                f_left = pool.submit(
                    _inclusion_pass, state, left, boundary, False,
                    parts // 2, pool,
                )
                right_def, ch_r = f_right.result()
                left_def, ch_l = f_left.result()
            else:
                right_def, ch_r = _inclusion_pass(
                    state, right, ceiling, trim_at_end, parts // 2, pool
                )
                left_def, ch_l = _inclusion_pass(
                    state, left, boundary, False, parts // 2, pool
                )
            changed = ch_r + ch_l
            # events deferred by the right child already point past this
            # node's ceiling; only the left child's deferrals resume here,
            # entering the merged state at its first live grade beyond the
            # boundary, exactly where the sequential pass would shift them
            deferred = [ev for ev in right_def if ev.alive]
            for ev in left_def:
                if not ev.alive:
                    continue
                from_grade = ev.beyond
                ev.beyond = None
                state._touch()
                nxt = state.next_grade(from_grade, ceiling)
                if nxt is None:
                    if ceiling is not None:
                        ev.beyond = ceiling
                        state._touch()
                        deferred.append(ev)
                        continue
                    state.drop(ev)
                    changed += 1
                    continue
                state.move(ev, nxt)
                changed += 1
                changed += _settle_inclusion(
                    state, ev, ceiling, trim_at_end, deferred
                )
            return deferred, changed
    deferred = []
    changed = 0
    for ev in snapshot:
        if ev.alive and ev.inclusion:
            changed += _settle_inclusion(state, ev, ceiling, trim_at_end, deferred)
    return deferred, changed


def _removal_pass(
    state: _ZigzagState,
    snapshot: list[_Event],
    parts: int,
    pool: Optional[ThreadPoolExecutor],
) -> int:
    if parts > 1:
        boundary = _split_snapshot(snapshot, parts)
        if boundary is not None:
            if _pair_straddles(state, boundary):
                raise ZigzagError(
                    f"split at grade {boundary} separates an inclusion from "
                    "its paired removal"
                )
            left = [ev for ev in snapshot if ev.grade <= boundary]
            right = [ev for ev in snapshot if ev.grade > boundary]
            if pool is not None:
                f_left = pool.submit(_removal_pass, state, left, parts // 2, pool)
                f_right = pool.submit(_removal_pass, state, right, parts // 2, pool)
                return f_left.result() + f_right.result()
            return _removal_pass(state, left, parts // 2, pool) + _removal_pass(
                state, right, parts // 2, pool
            )
    changed = 0
    for ev in snapshot:
        if ev.alive and not ev.inclusion:
            changed += _settle_removal(state, ev)
    return changed


def zigzag_collapse(
    z: ZigzagFiltration, passes: int = 4, parts: int = 1
) -> ZigzagFiltration:
    """Reduce a zigzag flag filtration, preserving its persistence diagram.

    Each pass shifts, cancels, or trims dominated inclusions backward over
    the whole filtration, then handles removals symmetrically forward.
    Passes repeat up to ``passes`` times, stopping early once a full pass
    changes nothing.  ``parts`` > 1 runs each pass as a fork-join
    divide-and-conquer over the grade range (output identical to the
    sequential pass); it requires that no chosen split boundary separates an
    inclusion from its paired removal.
    """
    if passes < 1:
        raise ValueError("passes must be at least 1")
    if parts < 1 or parts & (parts - 1):
        raise ValueError("parts must be a power of two")
    state = _ZigzagState(z)
    pool = ThreadPoolExecutor(max_workers=parts) if parts > 1 else None
    try:
        for _ in range(passes):
            inc_snapshot = sorted(
                (ev for ev in state.events if ev.alive and ev.inclusion),
                key=lambda e: (e.grade, e.u, e.v),
                reverse=True,
            )
            deferred, changed = _inclusion_pass(
                state, inc_snapshot, None, True, parts, pool
            )
            assert not deferred
            rem_snapshot = sorted(
                (ev for ev in state.events if ev.alive and not ev.inclusion),
                key=lambda e: (e.grade, e.u, e.v),
            )
            changed += _removal_pass(state, rem_snapshot, parts, pool)
            if changed == 0:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return state.to_filtration()
