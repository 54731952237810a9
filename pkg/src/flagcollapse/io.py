"""Plain-text file formats: graphs, zigzag event lists, diagrams, points.

Graph files hold whitespace-separated triples ``u v t``; a line with
``u == v`` declares a vertex birth grade.  Zigzag files hold
``u v grade +|-`` lines.  Diagram files hold ``dim birth death`` lines with
``inf`` permitted as a death.  ``#`` starts a comment anywhere.  Grades are
written with round-trip-exact decimal representations, and writers emit
canonical sorted order, so write-read-write is byte-identical.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from .graph import FilteredGraph, GraphError, edge_key
from .oracle import HALF_OPEN, PersistenceDiagram
from .zigzag import INCLUSION, REMOVAL, ZigzagError, ZigzagFiltration, event_key


def _fmt(x: float) -> str:
    return repr(float(x))


def _data_lines(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line.split()


def write_graph(g: FilteredGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x in sorted(g.births):
            fh.write(f"{x} {x} {_fmt(g.births[x])}\n")
        for e in sorted(g.edges, key=edge_key):
            fh.write(f"{e.u} {e.v} {_fmt(e.t)}\n")


def read_graph(path: str) -> FilteredGraph:
    births: dict[int, float] = {}
    edges: list[tuple[int, int, float]] = []
    for lineno, parts in _data_lines(path):
        if len(parts) != 3:
            raise GraphError(f"{path}:{lineno}: expected 'u v t', got {parts}")
        try:
            u, v = int(parts[0]), int(parts[1])
            t = float(parts[2])
        except ValueError as exc:
            raise GraphError(f"{path}:{lineno}: {exc}") from None
        if u == v:
            if u in births:
                raise GraphError(f"{path}:{lineno}: repeated birth for vertex {u}")
            births[u] = t
        else:
            edges.append((u, v, t))
    try:
        return FilteredGraph.build(edges, births=births)
    except GraphError as exc:
        raise GraphError(f"{path}: {exc}") from None


def write_zigzag(z: ZigzagFiltration, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x in sorted(z.births):
            fh.write(f"{x} {x} {_fmt(z.births[x])} +\n")
        for ev in sorted(z.events, key=event_key):
            sign = "+" if ev.direction == INCLUSION else "-"
            fh.write(f"{ev.u} {ev.v} {_fmt(ev.grade)} {sign}\n")


def read_zigzag(path: str) -> ZigzagFiltration:
    births: dict[int, float] = {}
    events: list[tuple[int, int, float, str]] = []
    for lineno, parts in _data_lines(path):
        if len(parts) != 4 or parts[3] not in ("+", "-"):
            raise ZigzagError(
                f"{path}:{lineno}: expected 'u v grade +|-', got {parts}"
            )
        try:
            u, v = int(parts[0]), int(parts[1])
            t = float(parts[2])
        except ValueError as exc:
            raise ZigzagError(f"{path}:{lineno}: {exc}") from None
        if u == v:
            if parts[3] != "+":
                raise ZigzagError(f"{path}:{lineno}: vertices cannot be removed")
            if u in births:
                raise ZigzagError(f"{path}:{lineno}: repeated birth for vertex {u}")
            births[u] = t
        else:
            events.append((u, v, t, INCLUSION if parts[3] == "+" else REMOVAL))
    try:
        return ZigzagFiltration.build(events, births=births)
    except ZigzagError as exc:
        raise ZigzagError(f"{path}: {exc}") from None


def write_diagram(d: PersistenceDiagram, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for dim in d.dimensions():
            for birth, death in d.in_dimension(dim):
                death_s = "inf" if death == math.inf else _fmt(death)
                fh.write(f"{dim} {_fmt(birth)} {death_s}\n")


def read_diagram(path: str, convention: str = HALF_OPEN) -> PersistenceDiagram:
    points: dict[int, list[tuple[float, float]]] = {}
    for lineno, parts in _data_lines(path):
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'dim birth death'")
        try:
            dim = int(parts[0])
            birth = float(parts[1])
            death = float(parts[2])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
        points.setdefault(dim, []).append((birth, death))
    return PersistenceDiagram.make(points, convention)


def write_points(points: Union[np.ndarray, "list"], path: str) -> None:
    arr = np.asarray(points, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        for row in arr:
            fh.write(" ".join(_fmt(x) for x in row) + "\n")


def read_points(path: str) -> np.ndarray:
    rows = []
    width = None
    for lineno, parts in _data_lines(path):
        try:
            row = [float(x) for x in parts]
        except ValueError as exc:
            raise GraphError(f"{path}:{lineno}: {exc}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise GraphError(
                f"{path}:{lineno}: expected {width} coordinates, got {len(row)}"
            )
        rows.append(row)
    if not rows:
        raise GraphError(f"{path}: no points")
    return np.asarray(rows, dtype=np.float64)
