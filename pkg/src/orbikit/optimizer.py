"""Linear optimization over packing and partitioning orbitopes in O(pq).

The objective ``d`` is turned into arc lengths on D(p, q): the cost of a cell
goes onto the diagonal arc entering it and the vertical arc entering row i in
column j gets ``max(0, d[i,1..j])``. A longest s-t path then determines an
optimal 0/1 vertex.

All arithmetic is exact: objectives are scaled to integers by the common
denominator of their entries and handled as ``int64`` arrays, or as arrays of
Python integers when ``int64`` could overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .core import (
    PACKING,
    PARTITIONING,
    Cell,
    InvalidInput,
    OrbiMatrix,
    Params,
    as_rational,
    check_kind,
    format_rational,
    parse_rational,
)
from .digraph import (
    DIAGONAL,
    SINK,
    SINK_ARC,
    SOURCE,
    VERTICAL,
    Arc,
    Flow,
    arc_exists,
    build,
    check_path,
    path_flow,
)

_INT64_SAFE = 2**62


def _fits_int64(bound: int) -> bool:
    return bound < _INT64_SAFE


def objective_array(params: Params, d) -> tuple[np.ndarray, int]:
    """Scale ``d`` to an integer array ``D`` with ``d[i,j] = D[i,j] / denom``.

    ``D`` has shape ``(p+1, q+1)``, is indexed 1-based, and is zero in row 0,
    column 0 and above the diagonal. ``d`` may be a mapping cell -> number,
    an :class:`OrbiMatrix`, or an array of shape ``(p, q)`` whose entries
    above the diagonal are ignored.
    """
    p, q = params.p, params.q
    if isinstance(d, OrbiMatrix):
        if d.params != params:
            raise InvalidInput("objective dimensions disagree with params")
        d = d.entries
    if isinstance(d, Mapping):
        vals = {}
        for cell, v in d.items():
            if tuple(cell) not in params:
                raise InvalidInput(f"objective cell {tuple(cell)} outside the index set")
            vals[Cell(*cell)] = as_rational(v)
        denom = math.lcm(*(v.denominator for v in vals.values())) if vals else 1
        ints = {c: int(v * denom) for c, v in vals.items()}
        big = max((abs(v) for v in ints.values()), default=0)
        dtype = np.int64 if _fits_int64(big * (p + 2)) else object
        D = np.zeros((p + 1, q + 1), dtype=dtype, order="F")
        if dtype is object:
            D[...] = 0
        for (i, j), v in ints.items():
            D[i, j] = v
        return D, denom

    arr = np.asarray(d)
    if arr.shape != (p, q):
        raise InvalidInput(f"objective array must have shape {(p, q)}, got {arr.shape}")
    if arr.dtype.kind in "iub":
        big = max(-int(arr.min(initial=0)), int(arr.max(initial=0)))
        dtype = np.int64 if _fits_int64(big * (p + 2)) else object
        D = np.zeros((p + 1, q + 1), dtype=dtype, order="F")
        if dtype == object:
            D[...] = 0
            arr = arr.astype(object)
        D[1:, 1:] = arr
        # only rows 1..q-1 have cells above the diagonal
        D[1 : q + 1, 1:] = np.tril(D[1 : q + 1, 1:])
        return D, 1
    if arr.dtype.kind == "f" and np.isfinite(arr).all() and (arr == np.round(arr)).all() and np.abs(arr).max(initial=0) < 2**52:
        return objective_array(params, arr.astype(np.int64))
    # general case: exact conversion entry by entry
    mapping = {Cell(i + 1, j + 1): arr[i, j] for i in range(p) for j in range(min(i + 1, q))}
    return objective_array(params, mapping)


# --------------------------------------------------------------------------
# arc costs


@dataclass(frozen=True)
class ArcCosts:
    """Rational arc lengths on D(p, q), stored as integer arrays over ``denom``.

    ``vertical[i, j]`` is the length of (i,j)->(i+1,j), ``diagonal[i, j]`` of
    (i,j)->(i+1,j+1), ``sink[j]`` of (p,j)->t. Array slots without a matching
    arc are zero and never read.
    """

    params: Params
    vertical: np.ndarray
    diagonal: np.ndarray
    sink: np.ndarray
    source: int
    denom: int = 1

    def __getitem__(self, arc) -> Fraction:
        arc = Arc(*arc)
        if not arc_exists(self.params, arc):
            raise KeyError(arc)
        if arc.kind == VERTICAL:
            v = self.vertical[arc.i, arc.j]
        elif arc.kind == DIAGONAL:
            v = self.diagonal[arc.i, arc.j]
        elif arc.kind == SINK_ARC:
            v = self.sink[arc.j]
        else:
            v = self.source
        return Fraction(int(v), self.denom)

    def items(self):
        return ((a, self[a]) for a in build(self.params).arcs)

    def as_dict(self) -> dict:
        return dict(self.items())

    @classmethod
    def from_mapping(cls, params: Params, costs: Mapping) -> ArcCosts:
        """Costs for arbitrary arc lengths; missing arcs have length 0."""
        vals = {}
        for a, v in costs.items():
            a = Arc(*a)
            if not arc_exists(params, a):
                raise InvalidInput(f"arc {tuple(a)} is not in D({params.p},{params.q})")
            vals[a] = as_rational(v)
        denom = math.lcm(*(v.denominator for v in vals.values())) if vals else 1
        p, q = params.p, params.q
        dtype = object
        vert = np.zeros((p, q + 1), dtype=dtype)
        diag = np.zeros((p, max(q, 1)), dtype=dtype)
        sink = np.zeros(q + 1, dtype=dtype)
        vert[...] = 0
        diag[...] = 0
        sink[...] = 0
        source = 0
        for a, v in vals.items():
            n = int(v * denom)
            if a.kind == VERTICAL:
                vert[a.i, a.j] = n
            elif a.kind == DIAGONAL:
                diag[a.i, a.j] = n
            elif a.kind == SINK_ARC:
                sink[a.j] = n
            else:
                source = n
        return cls(params, vert, diag, sink, source, denom)


def _arc_costs_from_array(params: Params, D: np.ndarray, denom: int) -> ArcCosts:
    p, q = params.p, params.q
    dtype = D.dtype
    # column-major storage: every pass below walks one column
    diag = np.asfortranarray(D[1:, 1:])  # Diagonal(i-1, j-1) carries d[i, j]
    vert = np.zeros((p, q + 1), dtype=dtype, order="F")
    if dtype == object:
        vert[...] = 0
    running = np.maximum(D[:, 0], 0)
    for j in range(1, q + 1):
        running = np.maximum(running, D[:, j])
        # Vertical(i-1, j) gets max(0, d[i,1..j]); entries with j > i-1 are unused
        vert[:, j] = running[1:]
    sink = np.zeros(q + 1, dtype=dtype)
    if dtype == object:
        sink[...] = 0
    return ArcCosts(params, vert, diag, sink, 0, denom)


def arc_costs(params: Params, d) -> ArcCosts:
    """Arc lengths of the longest-path reformulation for objective ``d``."""
    D, denom = objective_array(params, d)
    return _arc_costs_from_array(params, D, denom)


# --------------------------------------------------------------------------
# longest path


def _sweep(costs: ArcCosts) -> tuple[int, np.ndarray]:
    """Longest s-t path as ``(integer length, column of the path in each row)``.

    Within a column the recurrence ``v[i] = max(v[i-1] + a[i-1], b[i])`` is a
    running maximum after subtracting prefix sums of ``a``, so each column is
    one vectorized pass. Ties prefer the vertical arc, and at the sink the
    lowest column.
    """
    params = costs.params
    p, q = params.p, params.q
    vert, diag = costs.vertical, costs.diagonal
    dtype = object if object in (vert.dtype, diag.dtype, costs.sink.dtype) else np.int64
    V = np.zeros((p + 1, q + 1), dtype=dtype, order="F")
    if dtype == object:
        V[...] = 0
    take_diag = np.zeros((p + 1, q + 1), dtype=bool, order="F")
    V[0, 0] = costs.source
    V[1:, 0] = costs.source + np.cumsum(vert[:, 0])
    for j in range(1, q + 1):
        b = V[j - 1 : p, j - 1] + diag[j - 1 : p, j - 1]  # rows i = j..p
        a = vert[j:p, j]  # Vertical(k, j) for k = j..p-1
        A = np.zeros(p - j + 1, dtype=dtype)
        if dtype == object:
            A[...] = 0
        A[1:] = np.cumsum(a)
        V[j:, j] = np.maximum.accumulate(b - A) + A
        take = np.ones(p - j + 1, dtype=bool)
        take[1:] = b[1:] > V[j:p, j] + a
        take_diag[j:, j] = take
    final = V[p, :] + costs.sink
    best = max(final.tolist())
    jstar = final.tolist().index(best)

    cols = np.zeros(p + 1, dtype=np.int64)
    i, j = p, jstar
    while j > 0:
        entry = j + int(np.flatnonzero(take_diag[j : i + 1, j])[-1])
        cols[entry : i + 1] = j
        i, j = entry - 1, j - 1
    return int(best), cols


def cols_to_path(cols: Sequence[int]) -> list:
    return [SOURCE] + [(i, int(c)) for i, c in enumerate(cols)] + [SINK]


def path_to_cols(params: Params, path: Sequence) -> np.ndarray:
    check_path(params, path)
    if path[0] != SOURCE or path[-1] != SINK:
        raise InvalidInput("expected an s-t path")
    return np.array([n[1] for n in path[1:-1]], dtype=np.int64)


def longest_path(costs: ArcCosts) -> tuple[Fraction, list]:
    """A maximum-length s-t path and its length."""
    value, cols = _sweep(costs)
    return Fraction(value, costs.denom), cols_to_path(cols)


# --------------------------------------------------------------------------
# reconstruction of x from a path


def _reconstruct_cols(D: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Column of the 1-entry in each row (0 for an empty row)."""
    p1, q1 = D.shape
    xcol = np.zeros(p1, dtype=np.int64)
    step = cols[1:] - cols[:-1]
    diag_rows = np.flatnonzero(step == 1) + 1
    xcol[diag_rows] = cols[diag_rows]
    # vertical arcs in column j >= 1: leftmost argmax of d[i, 1..j], if >= 0
    best = None
    arg = np.zeros(p1, dtype=np.int64)
    for j in range(1, q1):
        if best is None:
            best = D[:, 1].copy()
            arg[:] = 1
        else:
            better = D[:, j] > best
            best = np.where(better, D[:, j], best)
            arg = np.where(better, j, arg)
        rows = np.flatnonzero((step == 0) & (cols[1:] == j)) + 1
        if rows.size:
            keep = rows[best[rows] >= 0]
            xcol[keep] = arg[keep]
    return xcol


def _xcol_value(D: np.ndarray, xcol: np.ndarray) -> int:
    rows = np.flatnonzero(xcol)
    if not rows.size:
        return 0
    vals = D[rows, xcol[rows]]
    return int(sum(vals.tolist())) if D.dtype == object else int(vals.sum())


def _xcol_matrix(params: Params, xcol: np.ndarray) -> OrbiMatrix:
    rows = np.flatnonzero(xcol)
    return OrbiMatrix.from_cells(params, zip(rows.tolist(), xcol[rows].tolist()))


def reconstruct(params: Params, path: Sequence, d) -> OrbiMatrix:
    """The 0/1 matrix paired with an s-t path for objective ``d``.

    Each diagonal arc into ``(i, j)`` sets ``x[i, j] = 1``; a vertical arc
    entering row ``i`` in column ``j >= 1`` sets the leftmost maximizer of
    ``d[i, 1..j]`` to 1 when that maximum is nonnegative.
    """
    D, _ = objective_array(params, d)
    return _xcol_matrix(params, _reconstruct_cols(D, path_to_cols(params, path)))


# --------------------------------------------------------------------------
# optimization


@dataclass(frozen=True, eq=False)
class OptResult:
    """An optimal vertex with its certificate path.

    ``x``, ``path`` and ``y`` are materialized on first access; the compact
    arrays ``xcol`` (column of the 1 in each row, 0 if none) and ``cols``
    (column of the path in rows 0..p) are always present.
    """

    params: Params
    kind: str
    value: Fraction
    xcol: np.ndarray
    cols: np.ndarray

    @cached_property
    def x(self) -> OrbiMatrix:
        return _xcol_matrix(self.params, self.xcol)

    @cached_property
    def path(self) -> list:
        return cols_to_path(self.cols)

    @cached_property
    def y(self) -> Flow:
        return path_flow(self.params, self.path)

    def to_json(self) -> dict:
        path = [n if isinstance(n, str) else list(n) for n in self.path]
        return {
            "p": self.params.p,
            "q": self.params.q,
            "kind": self.kind,
            "value": format_rational(self.value),
            "x": [{"i": c.i, "j": c.j} for c in self.x.support()],
            "path": path,
        }

    @classmethod
    def from_json(cls, data: dict) -> OptResult:
        try:
            params = Params(data["p"], data["q"])
            xcol = np.zeros(params.p + 1, dtype=np.int64)
            for e in data["x"]:
                xcol[int(e["i"])] = int(e["j"])
            path = [n if isinstance(n, str) else tuple(n) for n in data["path"]]
            return cls(params, check_kind(data["kind"]), parse_rational(data["value"]), xcol, path_to_cols(params, path))
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidInput(f"bad result JSON: {exc}") from exc

    def __eq__(self, other) -> bool:
        if not isinstance(other, OptResult):
            return NotImplemented
        return (
            self.params == other.params
            and self.kind == other.kind
            and self.value == other.value
            and np.array_equal(self.xcol, other.xcol)
            and np.array_equal(self.cols, other.cols)
        )


def _optimize_array(params: Params, D: np.ndarray, denom: int, kind: str) -> OptResult:
    costs = _arc_costs_from_array(params, D, denom)
    length, cols = _sweep(costs)
    xcol = _reconstruct_cols(D, cols)
    value = _xcol_value(D, xcol)
    if value != length:
        raise AssertionError("path length and vertex value disagree")
    return OptResult(params, kind, Fraction(value, denom), xcol, cols)


def optimize_packing(params: Params, d) -> OptResult:
    """Maximize ``<d, x>`` over the packing orbitope."""
    D, denom = objective_array(params, d)
    return _optimize_array(params, D, denom, PACKING)


def optimize_partitioning(params: Params, d) -> OptResult:
    """Maximize ``<d, x>`` over the partitioning orbitope.

    Each row is shifted by ``1 - min_j d[i, j]`` so all coefficients become
    positive; on that objective every packing optimum has one 1 per row.
    """
    D, denom = objective_array(params, d)
    p, q = params.p, params.q
    lower = np.zeros((p + 1, q + 1), dtype=bool)
    lower[1:, 1:] = np.tril(np.ones((p, q), dtype=bool))
    if D.dtype == object:
        rowmin = np.array([min(D[i, 1 : min(i, q) + 1].tolist()) for i in range(1, p + 1)], dtype=object)
    else:
        rowmin = np.where(lower, D, np.iinfo(np.int64).max)[1:].min(axis=1)
    shift = np.zeros(p + 1, dtype=D.dtype)
    shift[1:] = denom - rowmin  # (1 - min d) scaled by denom
    S = D + np.where(lower, shift[:, None], 0)
    if S.dtype != object:
        big = int(np.abs(S).max(initial=0))
        if not _fits_int64(big * (p + 2)):
            S = D.astype(object) + np.where(lower, shift.astype(object)[:, None], 0)
    shifted = _optimize_array(params, S, denom, PARTITIONING)
    if not shifted.xcol[1:].all():
        raise AssertionError("shifted optimum is not a partitioning vertex")
    value = Fraction(_xcol_value(D, shifted.xcol), denom)
    return OptResult(params, PARTITIONING, value, shifted.xcol, shifted.cols)


def optimize(params: Params, d, kind: str = PACKING) -> OptResult:
    check_kind(kind)
    if kind == PACKING:
        return optimize_packing(params, d)
    return optimize_partitioning(params, d)
