"""Constraint systems for the extended formulations and the change of
variables between them.

Variable names: ``x_i_j`` for cells, ``y_v_i_j``/``y_d_i_j``/``y_s``/``y_t_j``
for arcs, ``z_i_j``/``w_i_j`` for the compact system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .core import (
    ONE,
    PACKING,
    PARTITIONING,
    ZERO,
    Cell,
    OrbiMatrix,
    Params,
    as_rational,
    cell_name,
    check_kind,
    index_set,
    row_cells,
)
from .digraph import (
    SINK,
    SOURCE,
    Flow,
    bar,
    build,
    diag_into_segment,
    diagonal,
    sink_arc,
    source_arc,
    vertical,
)
from .linsys import NONNEG, LinearSystem


def z_name(i: int, j: int) -> str:
    return f"z_{i}_{j}"


def w_name(i: int, j: int) -> str:
    return f"w_{i}_{j}"


# --------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class ExtendedPoint:
    x: OrbiMatrix
    y: Flow

    @property
    def params(self) -> Params:
        return self.x.params

    def assignment(self) -> dict[str, Fraction]:
        vals = {cell_name(c): v for c, v in self.x.entries.items()}
        vals.update({a.var_name: v for a, v in self.y.values.items()})
        return vals

    def link_violations(self) -> list[Cell]:
        """Cells where the diagonal arc entering them carries more than x."""
        return [c for c in index_set(self.params) if self.y[diagonal(c.i - 1, c.j - 1)] > self.x[c]]

    def bar_violations(self) -> list[Cell]:
        """Cells where the bar weight exceeds the diagonal inflow of the column segment."""
        P = self.params
        return [
            c
            for c in index_set(P)
            if self.x.total(bar(P, c.i, c.j)) > self.y.total(diag_into_segment(P, c.i, c.j))
        ]

    def is_feasible(self, kind: str = PACKING) -> bool:
        check_kind(kind)
        if not self.y.is_unit_flow() or self.link_violations() or self.bar_violations():
            return False
        if kind == PARTITIONING:
            return all(self.x.row_sum(i) == 1 for i in range(1, self.params.p + 1))
        return True


@dataclass(frozen=True)
class CompactPoint:
    params: Params
    z: Mapping[Cell, Fraction] = field(default_factory=dict)
    w: Mapping[Cell, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("z", "w"):
            vals = {Cell(*c): as_rational(v) for c, v in dict(getattr(self, name)).items()}
            object.__setattr__(self, name, {c: v for c, v in vals.items() if v})

    def zv(self, i: int, j: int) -> Fraction:
        return self.z.get((i, j), ZERO)

    def wv(self, i: int, j: int) -> Fraction:
        return self.w.get((i, j), ZERO)

    def assignment(self) -> dict[str, Fraction]:
        vals = {z_name(*c): v for c, v in self.z.items()}
        vals.update({w_name(*c): v for c, v in self.w.items()})
        return vals


def to_compact(pt: ExtendedPoint) -> CompactPoint:
    P = pt.params
    z = {c: pt.x.total(bar(P, c.i, c.j)) for c in index_set(P)}
    w = {c: pt.y.total(diag_into_segment(P, c.i, c.j)) for c in index_set(P)}
    return CompactPoint(P, z, w)


def from_compact(cpt: CompactPoint) -> ExtendedPoint:
    """Inverse change of variables; arc values other than diagonal ones come
    from the flow identities (out-of-range ``w`` read as 0, ``w[p, 0]`` as 1)."""
    P = cpt.params
    p, q = P.p, P.q
    zv, wv = cpt.zv, cpt.wv
    x = {c: zv(c.i, c.j) - zv(c.i, c.j + 1) for c in index_set(P)}
    y = {source_arc(): ONE}
    for i in range(p):
        for j in range(P.qi(i + 1)):
            y[diagonal(i, j)] = wv(i + 1, j + 1) - wv(i, j + 1)
        y[vertical(i, 0)] = 1 - wv(i + 1, 1)
        for j in range(1, P.qi(i) + 1):
            y[vertical(i, j)] = wv(i, j) - wv(i + 1, j + 1)
    for j in range(q + 1):
        top = ONE if j == 0 else wv(p, j)
        y[sink_arc(P, j)] = top - wv(p, j + 1)
    return ExtendedPoint(OrbiMatrix(P, x), Flow(P, y))


def compact_objective(params: Params, d: Mapping) -> dict[str, Fraction]:
    """Coefficients on z equivalent to ``<d, x>`` under ``x[i,j] = z[i,j] - z[i,j+1]``."""
    dv = {Cell(*c): as_rational(v) for c, v in d.items()}
    obj = {}
    for c in index_set(params):
        coef = dv.get(c, ZERO) - dv.get((c.i, c.j - 1), ZERO)
        if coef:
            obj[z_name(*c)] = coef
    return obj


def x_objective(d: Mapping) -> dict[str, Fraction]:
    return {cell_name(c): as_rational(v) for c, v in d.items() if as_rational(v)}


# --------------------------------------------------------------------------
# systems


def extended_system(params: Params, kind: str = PACKING) -> LinearSystem:
    """Unit s-t flows y with ``y[d(i-1,j-1)] <= x[i,j]`` and
    ``x(bar(i,j)) <= y(diagonal arcs into column segment (j..i, j))``."""
    check_kind(kind)
    D = build(params)
    sys = LinearSystem(name=f"extended_{kind}_{params.p}_{params.q}")
    cells = index_set(params)
    for c in cells:
        sys.add_variable(cell_name(c), lower=None)
    for a in D.arcs:
        sys.add_variable(a.var_name)
    for n in D.nodes:
        if n in (SOURCE, SINK):
            continue
        coeffs = {a.var_name: 1 for a in D.in_arcs[n]}
        for a in D.out_arcs[n]:
            coeffs[a.var_name] = coeffs.get(a.var_name, 0) - 1
        sys.add_constraint(f"flow_{n[0]}_{n[1]}", coeffs, "=", 0)
    sys.add_constraint("source", {source_arc().var_name: 1}, "=", 1)
    for c in cells:
        sys.add_constraint(f"link_{c.i}_{c.j}", {diagonal(c.i - 1, c.j - 1).var_name: 1, cell_name(c): -1}, "<=", 0)
    for c in cells:
        coeffs = {cell_name(b): 1 for b in bar(params, c.i, c.j)}
        for a in diag_into_segment(params, c.i, c.j):
            coeffs[a.var_name] = -1
        sys.add_constraint(f"bar_{c.i}_{c.j}", coeffs, "<=", 0)
    if kind == PARTITIONING:
        for i in range(1, params.p + 1):
            sys.add_constraint(f"row_{i}", {cell_name(c): 1 for c in row_cells(params, i)}, "=", 1)
    return sys


def compact_system(params: Params, kind: str = PACKING) -> LinearSystem:
    """The system in variables ``z[i,j] = x(bar(i,j))`` and ``w[i,j]`` = diagonal
    inflow of the column segment ending at (i, j).

    Terms whose indices fall outside the index set are dropped. Rows that
    only restate nonnegativity of an eliminated arc are tagged ``nonneg``.
    For ``partitioning`` the rows ``z[i,1] = 1`` (the row sums) are added
    next to ``w[1,1] = 1``.
    """
    check_kind(kind)
    P = params
    p = P.p
    sys = LinearSystem(name=f"compact_{kind}_{p}_{P.q}")
    cells = index_set(P)
    for c in cells:
        sys.add_variable(z_name(*c), lower=None)
    for c in cells:
        sys.add_variable(w_name(*c), lower=None)

    def w(i, j):
        return w_name(i, j) if (i, j) in P else None

    def z(i, j):
        return z_name(i, j) if (i, j) in P else None

    def terms(*pairs):
        out = {}
        for name, coef in pairs:
            if name is not None:
                out[name] = out.get(name, 0) + coef
        return out

    for i in range(p):
        for j in range(P.qi(i + 1)):
            sys.add_constraint(
                f"diag_{i}_{j}", terms((w(i + 1, j + 1), 1), (w(i, j + 1), -1)), ">=", 0, tag=NONNEG
            )
    for c in cells:
        if c.i < p:
            sys.add_constraint(
                f"vert_{c.i}_{c.j}", terms((w(c.i, c.j), 1), (w(c.i + 1, c.j + 1), -1)), ">=", 0, tag=NONNEG
            )
    sys.add_constraint("vert0", {w_name(p, 1): 1}, "<=", 1, tag=NONNEG)
    for c in cells:
        i, j = c
        sys.add_constraint(
            f"link_{i}_{j}",
            terms((w(i, j), 1), (w(i - 1, j), -1), (z(i, j), -1), (z(i, j + 1), 1)),
            "<=",
            0,
        )
    for c in cells:
        sys.add_constraint(f"bar_{c.i}_{c.j}", terms((z(*c), 1), (w(*c), -1)), "<=", 0)
    for i in range(1, p + 1):
        sys.add_constraint(f"wlast_{i}", {w_name(i, P.qi(i)): 1}, ">=", 0, tag=NONNEG)
    if kind == PARTITIONING:
        sys.add_constraint("w11", {w_name(1, 1): 1}, "=", 1)
        for i in range(1, p + 1):
            sys.add_constraint(f"row_{i}", {z_name(i, 1): 1}, "=", 1)
    return sys
