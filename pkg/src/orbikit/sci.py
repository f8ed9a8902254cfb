"""Shifted columns, shifted-column inequalities (SCIs) and their separation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import caps
from .core import (
    PACKING,
    PARTITIONING,
    Cell,
    InvalidInput,
    OrbiMatrix,
    Params,
    SizeCapExceeded,
    cell_name,
    check_kind,
    format_rational,
    index_set,
    row_cells,
)
from .digraph import bar, diagonal, grid_paths, path_node_sets
from .lifting import check_packing_point, lift
from .linsys import LinearSystem


@dataclass(frozen=True)
class ShiftedColumn:
    cells: tuple[Cell, ...]
    anchor_bar: tuple[int, int]
    witness_path: tuple

    @classmethod
    def from_path(cls, path, anchor) -> ShiftedColumn:
        S, _ = path_node_sets(path)
        return cls(tuple(sorted(Cell(*c) for c in S)), tuple(anchor), tuple(path))


@dataclass(frozen=True)
class SCInequality:
    """``x(bar(i, j)) <= x(S)`` for a shifted column ``S``."""

    params: Params
    shifted_column: ShiftedColumn

    @property
    def i(self) -> int:
        return self.shifted_column.anchor_bar[0]

    @property
    def j(self) -> int:
        return self.shifted_column.anchor_bar[1]

    @property
    def bar(self) -> list[Cell]:
        return bar(self.params, self.i, self.j)

    @property
    def cells(self) -> tuple[Cell, ...]:
        return self.shifted_column.cells

    @property
    def key(self) -> tuple:
        return (self.i, self.j, self.cells)

    def coefficients(self) -> dict[Cell, int]:
        coeffs = {c: 1 for c in self.bar}
        for c in self.cells:
            coeffs[c] = coeffs.get(c, 0) - 1
        return coeffs

    def violation(self, x: OrbiMatrix) -> Fraction:
        """``x(bar) - x(S)``; positive means violated."""
        return x.total(self.bar) - x.total(self.cells)

    def __str__(self) -> str:
        lhs = " + ".join(cell_name(c) for c in self.bar)
        rhs = " + ".join(cell_name(c) for c in self.cells)
        return f"{lhs} <= {rhs}"

    def to_json(self, x: OrbiMatrix | None = None) -> dict:
        out = {
            "bar": {"i": self.i, "j": self.j},
            "S": [{"i": c.i, "j": c.j} for c in self.cells],
        }
        if x is not None:
            out["violation"] = format_rational(self.violation(x))
        return out

    def dumps(self, x: OrbiMatrix | None = None) -> str:
        return json.dumps(self.to_json(x), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict, params: Params) -> SCInequality:
        try:
            anchor = (int(data["bar"]["i"]), int(data["bar"]["j"]))
            cells = tuple(sorted(Cell(int(c["i"]), int(c["j"])) for c in data["S"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad SCI JSON: {exc}") from exc
        sci = cls(params, ShiftedColumn(cells, anchor, ()))
        validate_sci(sci)
        return sci


def validate_sci(sci: SCInequality) -> None:
    P = sci.params
    i, j = sci.i, sci.j
    if not (i >= 2 and j >= 2 and (i, j) in P):
        raise InvalidInput(f"bar anchor {(i, j)} needs i, j >= 2 inside the index set")
    cells = sci.cells
    if not cells or any(c not in P for c in cells):
        raise InvalidInput("shifted column must be a nonempty set of cells")


# --------------------------------------------------------------------------
# enumeration


def iter_scis(params: Params) -> Iterator[SCInequality]:
    """Every SCI once, ordered by bar anchor (row-major), then discovery order."""
    for i in range(2, params.p + 1):
        for j in range(2, params.qi(i) + 1):
            seen = set()
            for l in range(1, j):
                for path in grid_paths(params, (l, l), (i - 1, j - 1)):
                    sc = ShiftedColumn.from_path(path, (i, j))
                    if sc.cells in seen:
                        continue
                    seen.add(sc.cells)
                    yield SCInequality(params, sc)


def enumerate_scis(params: Params, cap: int | None = None) -> list[SCInequality]:
    """All SCIs of D(p, q); raises :class:`SizeCapExceeded` past ``cap``."""
    limit = caps.count_cap(cap)
    out = []
    for sci in iter_scis(params):
        out.append(sci)
        if len(out) > limit:
            raise SizeCapExceeded(f"more than {limit} SCIs for p={params.p}, q={params.q}")
    return out


def sci_system(params: Params, kind: str = PACKING, cap: int | None = None) -> LinearSystem:
    """Nonnegativity, row-sum rows (equations for partitioning) and all SCIs."""
    check_kind(kind)
    scis = enumerate_scis(params, cap)
    sys = LinearSystem(name=f"sci_{kind}_{params.p}_{params.q}")
    for c in index_set(params):
        sys.add_variable(cell_name(c), lower=0)
    sense = "=" if kind == PARTITIONING else "<="
    for i in range(1, params.p + 1):
        sys.add_constraint(f"row_{i}", {cell_name(c): 1 for c in row_cells(params, i)}, sense, 1)
    counter: dict = {}
    for sci in scis:
        k = counter[sci.i, sci.j] = counter.get((sci.i, sci.j), 0) + 1
        coeffs = {cell_name(c): a for c, a in sci.coefficients().items()}
        sys.add_constraint(f"sci_{sci.i}_{sci.j}_{k}", coeffs, "<=", 0)
    return sys


def scan(x: OrbiMatrix, scis: list[SCInequality]) -> SCInequality | None:
    """Most violated SCI of an explicit list, or None."""
    best, worst = None, Fraction(0)
    for sci in scis:
        v = sci.violation(x)
        if v > worst:
            best, worst = sci, v
    return best


# --------------------------------------------------------------------------
# separation


def _backward_path(x: OrbiMatrix, y, i: int, j: int) -> list:
    """Residual path ending at ``(i, j)``, built backwards.

    Steps back along the diagonal arc when it is unsaturated, along the
    vertical arc otherwise, and stops at column 0 or on a diagonal node
    whose entering diagonal arc is saturated.
    """
    path = [(i, j)]
    a, b = i, j
    while b != 0:
        if y[diagonal(a - 1, b - 1)] < x[a, b]:
            a, b = a - 1, b - 1
        elif a - 1 >= b:
            a = a - 1
        else:
            break
        path.append((a, b))
    path.reverse()
    return path


def separate(x: OrbiMatrix) -> SCInequality | None:
    """A violated SCI, or None when ``x`` lifts into the extended polytope.

    ``x`` must be nonnegative with row sums at most 1. None certifies that
    ``x`` lies in the packing orbitope.
    """
    check_packing_point(x)
    P = x.params
    y = lift(x)
    target = None
    for j in range(1, P.q + 1):
        for i in range(j, P.p + 1):
            if x.total(bar(P, i, j)) > y.bar_flow(i, j):
                target = (i, j)
                break
        if target:
            break
    if target is None:
        return None
    i, j = target
    gamma = _backward_path(x, y, i, j)
    if gamma[0][1] == 0 or len(gamma) < 2:
        raise AssertionError("residual path does not certify a violated SCI")
    if gamma[-2] == (i - 1, j - 1):
        sci = SCInequality(P, ShiftedColumn.from_path(gamma[:-1], (i, j)))
    else:
        # entered vertically: (i, j) drops out of S and the bar shrinks by one
        sci = SCInequality(P, ShiftedColumn.from_path(gamma[:-1], (i, j + 1)))
    if sci.violation(x) <= 0:
        raise AssertionError("constructed SCI is not violated")
    return sci
