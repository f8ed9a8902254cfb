"""Lift points of x-space to unit flows on D(p, q)."""

from __future__ import annotations

from fractions import Fraction

from .core import ZERO, Cell, InvalidInput, OrbiMatrix, PACKING, index_set, is_vertex
from .digraph import (
    SINK,
    SOURCE,
    Flow,
    column_zero_path,
    diagonal,
    path_arcs,
    path_flow,
    sink_arc,
    vertical,
)


def check_packing_point(x: OrbiMatrix) -> None:
    """Raise unless ``x >= 0`` and every row sums to at most 1."""
    if any(v < 0 for v in x.entries.values()):
        raise InvalidInput("x has negative entries")
    for i in range(1, x.params.p + 1):
        if x.row_sum(i) > 1:
            raise InvalidInput(f"row {i} of x sums to more than 1")


def lift(x: OrbiMatrix) -> Flow:
    """Unit flow with ``y[d(i-1,j-1)] <= x[i,j]`` that uses a vertical arc only
    when the diagonal arc leaving the same node is saturated.

    Starts with one unit down column 0 and scans cells by column, then row.
    At ``(i, j)`` it moves ``min(y[v(i-1,j-1)], x[i,j] - y[d(i-1,j-1)])``
    units from column ``j-1`` onto the diagonal arc and on down column ``j``
    to the sink. Every SCI-feasible ``x`` yields a point of the extended
    polytope; for other inputs the bar constraints may fail, which is what
    separation detects.
    """
    check_packing_point(x)
    params = x.params
    p, q = params.p, params.q
    y: dict = {a: Fraction(1) for a in path_arcs(params, column_zero_path(params))}

    for j in range(1, q + 1):
        for i in range(j, p + 1):
            down, side = vertical(i - 1, j - 1), diagonal(i - 1, j - 1)
            theta = min(y.get(down, ZERO), x[i, j] - y.get(side, ZERO))
            if theta <= 0:
                continue
            # downstream of (i, j-1) the flow still runs straight down column j-1
            for k in range(i - 1, p):
                y[vertical(k, j - 1)] -= theta
            y[sink_arc(params, j - 1)] -= theta
            y[side] = y.get(side, ZERO) + theta
            for k in range(i, p):
                a = vertical(k, j)
                y[a] = y.get(a, ZERO) + theta
            t = sink_arc(params, j)
            y[t] = y.get(t, ZERO) + theta
    return Flow(params, y)


def saturation_violations(x: OrbiMatrix, y: Flow) -> list[Cell]:
    """Cells ``(i, j)`` where ``y`` uses Vertical(i-1, j-1) although
    Diagonal(i-1, j-1) carries less than ``x[i, j]``."""
    return [
        c
        for c in index_set(x.params)
        if y[vertical(c.i - 1, c.j - 1)] > 0 and y[diagonal(c.i - 1, c.j - 1)] != x[c]
    ]


def vertex_path(x: OrbiMatrix) -> list:
    """The s-t path of a packing vertex: it turns diagonally at the first 1 of
    each column and goes straight down otherwise."""
    if not is_vertex(x, PACKING):
        raise InvalidInput("x is not a vertex of the packing orbitope")
    params = x.params
    path, col = [SOURCE, (0, 0)], 0
    for i in range(1, params.p + 1):
        if col < params.qi(i) and x[i, col + 1] == 1:
            col += 1
        path.append((i, col))
    path.append(SINK)
    return path


def lift_vertex(x: OrbiMatrix) -> Flow:
    return path_flow(x.params, vertex_path(x))


def project(point) -> OrbiMatrix:
    """x-part of an extended point given as ``(x, y)`` or an object with ``.x``."""
    if isinstance(point, tuple):
        return point[0]
    return point.x
