"""Sparse linear systems with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .core import ZERO, InvalidInput, as_rational

SENSES = ("<=", "=", ">=")

# Rows tagged with this encode nonnegativity of an eliminated variable. They
# count as simple bounds in `Stats`.
NONNEG = "nonneg"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: Fraction | None = ZERO
    upper: Fraction | None = None


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: Mapping[str, Fraction]
    sense: str
    rhs: Fraction = ZERO
    tag: str = ""

    def activity(self, values: Mapping[str, Fraction]) -> Fraction:
        return sum((a * as_rational(values.get(v, 0)) for v, a in self.coeffs.items()), ZERO)

    def slack(self, values: Mapping[str, Fraction]) -> Fraction:
        """Nonnegative iff satisfied (for '=' rows: zero iff satisfied)."""
        act = self.activity(values)
        if self.sense == "<=":
            return self.rhs - act
        if self.sense == ">=":
            return act - self.rhs
        return -abs(act - self.rhs)


@dataclass
class LinearSystem:
    """Variables, rows and an optional objective.

    Systems are assembled with :meth:`add_variable`, :meth:`add_constraint`
    and :meth:`set_objective` and treated as read-only afterwards.
    """

    name: str = ""
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, Fraction] | None = None
    maximize: bool = True

    def __post_init__(self):
        self._vindex = {v.name: k for k, v in enumerate(self.variables)}
        self._cnames = {c.name for c in self.constraints}

    def add_variable(self, name: str, lower=ZERO, upper=None) -> Variable:
        if name in self._vindex:
            raise InvalidInput(f"duplicate variable {name}")
        lo = None if lower is None else as_rational(lower)
        up = None if upper is None else as_rational(upper)
        if lo is not None and up is not None and lo > up:
            raise InvalidInput(f"empty bounds for {name}")
        var = Variable(name, lo, up)
        self._vindex[name] = len(self.variables)
        self.variables.append(var)
        return var

    def add_constraint(self, name: str, coeffs: Mapping[str, object], sense: str, rhs=0, tag: str = "") -> Constraint:
        if sense not in SENSES:
            raise InvalidInput(f"unknown sense {sense!r}")
        if name in self._cnames:
            raise InvalidInput(f"duplicate constraint {name}")
        clean = {}
        for v, a in coeffs.items():
            if v not in self._vindex:
                raise InvalidInput(f"constraint {name} references undeclared variable {v}")
            a = as_rational(a)
            if a:
                clean[v] = a
        clean = dict(sorted(clean.items(), key=lambda t: self._vindex[t[0]]))
        if not clean:
            raise InvalidInput(f"constraint {name} has no nonzero coefficients")
        row = Constraint(name, clean, sense, as_rational(rhs), tag)
        self._cnames.add(name)
        self.constraints.append(row)
        return row

    def set_objective(self, coeffs: Mapping[str, object] | None, maximize: bool = True) -> None:
        self.maximize = maximize
        if coeffs is None:
            self.objective = None
            return
        obj = {}
        for v, a in coeffs.items():
            if v not in self._vindex:
                raise InvalidInput(f"objective references undeclared variable {v}")
            a = as_rational(a)
            if a:
                obj[v] = a
        self.objective = dict(sorted(obj.items(), key=lambda t: self._vindex[t[0]])) or None

    @property
    def variable_names(self) -> list[str]:
        return [v.name for v in self.variables]

    def variable(self, name: str) -> Variable:
        return self.variables[self._vindex[name]]

    def constraint(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def violations(self, values: Mapping[str, object]) -> list[str]:
        """Names of violated rows and bounds (bounds reported as ``bound:<var>``)."""
        bad = []
        for v in self.variables:
            val = as_rational(values.get(v.name, 0))
            if (v.lower is not None and val < v.lower) or (v.upper is not None and val > v.upper):
                bad.append(f"bound:{v.name}")
        for c in self.constraints:
            if c.slack(values) < 0 or (c.sense == "=" and c.slack(values) != 0):
                bad.append(c.name)
        return bad

    def is_feasible(self, values: Mapping[str, object]) -> bool:
        return not self.violations(values)

    def objective_value(self, values: Mapping[str, object]) -> Fraction:
        if not self.objective:
            return ZERO
        return sum((a * as_rational(values.get(v, 0)) for v, a in self.objective.items()), ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearSystem):
            return NotImplemented
        return (
            self.variables == other.variables
            and [(c.name, dict(c.coeffs), c.sense, c.rhs) for c in self.constraints]
            == [(c.name, dict(c.coeffs), c.sense, c.rhs) for c in other.constraints]
            and (self.objective or None) == (other.objective or None)
            and (self.maximize == other.maximize or not self.objective)
        )


@dataclass(frozen=True)
class Stats:
    """Size counts of a system.

    ``nrows`` counts every row; ``nbounds`` counts finite variable bounds;
    ``nnonneg_rows`` counts rows that only encode nonnegativity of an
    eliminated variable.
    """

    nvars: int
    nrows: int
    nnonzeros: int
    nbounds: int
    nnonneg_rows: int
    nnonneg_nonzeros: int

    @property
    def nconstraints(self) -> int:
        """All constraints, simple bounds included."""
        return self.nrows + self.nbounds

    @property
    def nconstraints_core(self) -> int:
        """Constraints without bounds and nonnegativity rows."""
        return self.nrows - self.nnonneg_rows

    @property
    def nnonzeros_core(self) -> int:
        return self.nnonzeros - self.nnonneg_nonzeros

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "cons": self.nconstraints,
            "nnz": self.nnonzeros,
            "rows": self.nrows,
            "bounds": self.nbounds,
            "nonneg_rows": self.nnonneg_rows,
            "cons_core": self.nconstraints_core,
            "nnz_core": self.nnonzeros_core,
        }

    @classmethod
    def from_json(cls, data: dict) -> Stats:
        nnz_core = data["nnz_core"]
        return cls(
            nvars=data["vars"],
            nrows=data["rows"],
            nnonzeros=data["nnz"],
            nbounds=data["bounds"],
            nnonneg_rows=data["nonneg_rows"],
            nnonneg_nonzeros=data["nnz"] - nnz_core,
        )

    def line(self) -> str:
        return f"vars={self.nvars} cons={self.nconstraints} nnz={self.nnonzeros}"


def stats(system: LinearSystem) -> Stats:
    nonneg = [c for c in system.constraints if c.tag == NONNEG]
    nbounds = sum((v.lower is not None) + (v.upper is not None) for v in system.variables)
    return Stats(
        nvars=len(system.variables),
        nrows=len(system.constraints),
        nnonzeros=sum(len(c.coeffs) for c in system.constraints),
        nbounds=nbounds,
        nnonneg_rows=len(nonneg),
        nnonneg_nonzeros=sum(len(c.coeffs) for c in nonneg),
    )
