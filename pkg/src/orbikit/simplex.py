"""Exact primal simplex for small :class:`LinearSystem` instances.

Dense two-phase tableau with Bland's rule. The tableau is kept
integer-preserving: entries are integers ``T`` over a common positive
denominator ``D`` (the last pivot), and a pivot on ``(r, c)`` maps each row
to ``(T[i] * T[r, c] - T[i, c] * T[r]) / D`` with exact division. Entries stay
in ``int64`` while they are small and switch to Python integers otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import ZERO, OrbikitError
from .linsys import LinearSystem


class Infeasible(OrbikitError):
    pass


class Unbounded(OrbikitError):
    pass


_SMALL = 2**30


@dataclass(frozen=True)
class SimplexResult:
    value: Fraction
    point: dict[str, Fraction]
    basis: tuple[str, ...] = field(default=())
    pivots: int = 0

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for v in self.point.values())

    @property
    def binary(self) -> bool:
        return all(v in (0, 1) for v in self.point.values())


def _lcm_den(values) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


class _Tableau:
    def __init__(self, rows: list[list[int]], basis: list[int]):
        self.T = np.array(rows, dtype=np.int64)
        self.D = 1
        self.basis = basis
        self.pivots = 0
        self._widen_if_needed()

    def _widen_if_needed(self):
        if self.T.dtype != object and int(np.abs(self.T).max(initial=0)) > _SMALL:
            self.T = self.T.astype(object)

    def pivot(self, r: int, c: int):
        T = self.T
        P = T[r, c]
        if P <= 0:
            raise AssertionError("pivot element must be positive")
        num = T * P - np.outer(T[:, c], T[r])
        new = num // self.D
        if T.dtype == object:
            if any(v != 0 for v in (num - new * self.D).flat):
                raise AssertionError("inexact tableau division")
        elif (num - new * self.D).any():
            raise AssertionError("inexact tableau division")
        new[r] = T[r]
        self.T = new
        self.D = int(P)
        self.basis[r - 1] = c
        self.pivots += 1
        self._widen_if_needed()

    def run(self, allowed: np.ndarray):
        """Bland's rule until optimal; raises Unbounded."""
        while True:
            obj = self.T[0, :-1]
            cand = np.flatnonzero((obj < 0) & allowed)
            if not cand.size:
                return
            c = int(cand[0])
            col = self.T[1:, c]
            rows = np.flatnonzero(col > 0)
            if not rows.size:
                raise Unbounded("objective is unbounded")
            best = None
            for k in rows:
                i = int(k) + 1
                ratio = (int(self.T[i, -1]), int(self.T[i, c]))
                if best is None:
                    best, best_ratio = i, ratio
                    continue
                lhs = ratio[0] * best_ratio[1]
                rhs = best_ratio[0] * ratio[1]
                if lhs < rhs or (lhs == rhs and self.basis[i - 1] < self.basis[best - 1]):
                    best, best_ratio = i, ratio
            self.pivot(best, c)

    def set_objective(self, cost: list[int]):
        """Install reduced costs of ``max cost @ x`` for the current basis."""
        T = self.T
        row = -self.D * np.array(cost + [0], dtype=object)
        for i, b in enumerate(self.basis, start=1):
            if cost[b]:
                row = row + cost[b] * T[i].astype(object)
        if T.dtype != object and all(abs(int(v)) <= _SMALL for v in row):
            row = row.astype(np.int64)
        else:
            self.T = T.astype(object)
        self.T[0] = row
        self._widen_if_needed()


def simplex_max(system: LinearSystem) -> SimplexResult:
    """Optimize ``system.objective`` (maximize or minimize as the system says).

    Returns the optimal value, an optimal basic solution over the system's
    variables and the names of the basic columns.
    """
    # --- columns: shift/split variables so every column is >= 0
    cols: list[str] = []
    expand: dict[str, tuple[Fraction, list[tuple[int, int]]]] = {}
    extra_rows = []
    for v in system.variables:
        if v.lower is not None:
            k = len(cols)
            cols.append(v.name)
            expand[v.name] = (v.lower, [(k, 1)])
            if v.upper is not None:
                extra_rows.append(({k: Fraction(1)}, "<=", v.upper - v.lower))
        elif v.upper is not None:
            k = len(cols)
            cols.append(v.name + "~neg")
            expand[v.name] = (v.upper, [(k, -1)])
        else:
            k = len(cols)
            cols += [v.name + "~pos", v.name + "~neg"]
            expand[v.name] = (ZERO, [(k, 1), (k + 1, -1)])

    rows = []
    for con in system.constraints:
        coeffs: dict[int, Fraction] = {}
        rhs = con.rhs
        for name, a in con.coeffs.items():
            off, parts = expand[name]
            rhs -= a * off
            for k, s in parts:
                coeffs[k] = coeffs.get(k, ZERO) + a * s
        rows.append((coeffs, con.sense, rhs))
    rows += extra_rows

    # --- integer rows with nonnegative right-hand sides
    int_rows = []
    for coeffs, sense, rhs in rows:
        if rhs < 0:
            coeffs = {k: -a for k, a in coeffs.items()}
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        scale = _lcm_den(list(coeffs.values()) + [rhs])
        int_rows.append(({k: int(a * scale) for k, a in coeffs.items() if a}, sense, int(rhs * scale)))

    slack_of = {}
    for r, (_, sense, _) in enumerate(int_rows):
        if sense != "=":
            slack_of[r] = len(cols)
            cols.append(f"~slack{r}")
    art_of = {}
    for r, (_, sense, _) in enumerate(int_rows):
        if sense != "<=":
            art_of[r] = len(cols)
            cols.append(f"~art{r}")
    n = len(cols)

    table = [[0] * (n + 1)]
    basis = []
    for r, (coeffs, sense, rhs) in enumerate(int_rows):
        row = [0] * (n + 1)
        for k, a in coeffs.items():
            row[k] = a
        if sense == "<=":
            row[slack_of[r]] = 1
            basis.append(slack_of[r])
        else:
            if sense == ">=":
                row[slack_of[r]] = -1
            row[art_of[r]] = 1
            basis.append(art_of[r])
        row[n] = rhs
        table.append(row)

    tab = _Tableau(table, basis)
    is_art = np.zeros(n, dtype=bool)
    is_art[list(art_of.values())] = True

    # --- phase 1
    if art_of:
        tab.set_objective([-1 if is_art[k] else 0 for k in range(n)])
        tab.run(np.ones(n, dtype=bool))
        if tab.T[0, -1] != 0:
            raise Infeasible("system has no feasible point")
        r = 1
        while r < tab.T.shape[0]:
            if is_art[tab.basis[r - 1]]:
                nz = [k for k in np.flatnonzero(tab.T[r, :-1]) if not is_art[k]]
                if nz:
                    k = int(nz[0])
                    if tab.T[r, k] < 0:
                        tab.T[r] = -tab.T[r]
                    tab.pivot(r, k)
                else:
                    tab.T = np.delete(tab.T, r, axis=0)
                    del tab.basis[r - 1]
                    continue
            r += 1

    # --- phase 2
    sign = 1 if system.maximize else -1
    obj = system.objective or {}
    lc = _lcm_den(obj.values())
    cost_frac = [ZERO] * n
    for name, a in obj.items():
        _, parts = expand[name]
        for k, s in parts:
            cost_frac[k] += sign * a * s
    cost = [int(c * lc) for c in cost_frac]
    tab.set_objective(cost)
    tab.run(~is_art)

    colval = [ZERO] * n
    for i, b in enumerate(tab.basis, start=1):
        colval[b] = Fraction(int(tab.T[i, -1]), tab.D)
    point = {}
    for v in system.variables:
        off, parts = expand[v.name]
        point[v.name] = off + sum((s * colval[k] for k, s in parts), ZERO)
    value = system.objective_value(point)
    return SimplexResult(value, point, tuple(cols[b] for b in tab.basis), tab.pivots)
