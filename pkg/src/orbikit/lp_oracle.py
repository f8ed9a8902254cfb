"""Brute-force ground truth at desk scale: vertices, paths and integral points.

The exact simplex used alongside these lives in :mod:`orbikit.simplex`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import caps
from .core import PACKING, PARTITIONING, Cell, OrbiMatrix, Params, SizeCapExceeded, check_kind, row_cells
from .digraph import SINK, SOURCE, bar, build, diag_into_segment, diagonal, path_flow
from .formulations import ExtendedPoint
from .simplex import Infeasible, SimplexResult, Unbounded, simplex_max

__all__ = [
    "VertexList",
    "enumerate_vertices",
    "enumerate_paths",
    "count_paths",
    "enumerate_integral_extended_points",
    "brute_force_max",
    "simplex_max",
    "SimplexResult",
    "Infeasible",
    "Unbounded",
]


def _check_p(params: Params, limit: int, what: str) -> None:
    if params.p > limit:
        raise SizeCapExceeded(f"{what} is capped at p <= {limit}, got p={params.p}")


@dataclass(frozen=True)
class VertexList:
    params: Params
    kind: str
    matrices: tuple[OrbiMatrix, ...]

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)


def enumerate_vertices(params: Params, kind: str = PACKING, max_p: int = caps.MAX_P_ENUMERATION) -> VertexList:
    """All vertices, generated as restricted-growth assignments of rows to
    columns: row i may open column ``m + 1`` where ``m`` is the largest
    column used so far, or reuse a column ``<= m``, or (packing) stay empty.
    """
    check_kind(kind)
    _check_p(params, max_p, "vertex enumeration")
    out = []

    def grow(i, used, cells):
        if i > params.p:
            out.append(OrbiMatrix.from_cells(params, cells))
            return
        if kind == PACKING:
            grow(i + 1, used, cells)
        for j in range(1, min(used + 1, params.q) + 1):
            cells.append(Cell(i, j))
            grow(i + 1, max(used, j), cells)
            cells.pop()

    grow(1, 0, [])
    return VertexList(params, kind, tuple(out))


def enumerate_paths(params: Params, max_p: int = caps.MAX_P_ENUMERATION) -> list[list]:
    """All s-t paths of D(p, q) as node lists (depth-first)."""
    _check_p(params, max_p, "path enumeration")
    D = build(params)
    out = []

    def dfs(path):
        node = path[-1]
        if node == SINK:
            out.append(list(path))
            return
        for a in D.out_arcs[node]:
            path.append(a.head)
            dfs(path)
            path.pop()

    dfs([SOURCE])
    return out


def count_paths(params: Params) -> int:
    """Number of s-t paths by a sweep over the topological order."""
    D = build(params)
    count = {SOURCE: 1}
    for n in D.nodes[1:]:
        count[n] = sum(count[a.tail] for a in D.in_arcs[n])
    return count[SINK]


def enumerate_integral_extended_points(
    params: Params, kind: str = PACKING, max_p: int = caps.MAX_P_EXTENDED_POINTS
) -> list[ExtendedPoint]:
    """Every 0/1 point of the extended polytope (or its partitioning face).

    For a fixed path the constraints on ``x`` split by rows, so each row's
    0/1 patterns are filtered independently and the survivors combined.
    """
    check_kind(kind)
    _check_p(params, max_p, "integral extended point enumeration")
    out = []
    for path in enumerate_paths(params):
        y = path_flow(params, path)
        per_row = []
        for i in range(1, params.p + 1):
            cells = row_cells(params, i)
            ok = []
            for bits in itertools.product((0, 1), repeat=len(cells)):
                row = dict(zip(cells, bits))
                if kind == PARTITIONING and sum(bits) != 1:
                    continue
                if any(y[diagonal(c.i - 1, c.j - 1)] > row[c] for c in cells):
                    continue
                if any(
                    sum(row[b] for b in bar(params, c.i, c.j)) > y.total(diag_into_segment(params, c.i, c.j))
                    for c in cells
                ):
                    continue
                ok.append([c for c in cells if row[c]])
            per_row.append(ok)
        for choice in itertools.product(*per_row):
            x = OrbiMatrix.from_cells(params, [c for r in choice for c in r])
            out.append(ExtendedPoint(x, y))
    return out


def brute_force_max(vertices: VertexList, d) -> object:
    """Largest ``<d, x>`` over an explicit vertex list."""
    return max(v.dot(d) for v in vertices)
