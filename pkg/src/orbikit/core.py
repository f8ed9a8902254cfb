"""Index sets, orbitope matrices and exact rationals shared by all modules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Iterator, Mapping, NamedTuple

PACKING = "packing"
PARTITIONING = "partitioning"
KINDS = (PACKING, PARTITIONING)


class OrbikitError(Exception):
    pass


class InvalidInput(OrbikitError, ValueError):
    pass


class ParamsError(InvalidInput):
    """Raised when ``p >= q >= 1`` does not hold."""


class SizeCapExceeded(OrbikitError):
    pass


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise InvalidInput(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


# --------------------------------------------------------------------------
# rationals

ZERO = Fraction(0)
ONE = Fraction(1)
_SMALL_INTS = {k: Fraction(k) for k in range(-2, 3)}


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without rounding.

    Accepts ints (including numpy integers), Fractions, strings like
    ``"3/4"`` or ``"0.25"``, and floats (converted exactly from their binary
    value).
    """
    if type(value) is Fraction:
        return value
    if type(value) is int:
        return _SMALL_INTS[value] if -2 <= value <= 2 else Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (Integral, Rational, float, str)):
        return Fraction(value)
    if hasattr(value, "item"):  # numpy scalar
        return as_rational(value.item())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value) -> str:
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad rational {text!r}") from exc
    if isinstance(text, float):
        raise InvalidInput(f"rationals must be strings or integers, got {text!r}")
    try:
        return as_rational(text)
    except TypeError as exc:
        raise InvalidInput(str(exc)) from exc


# --------------------------------------------------------------------------
# index sets


@dataclass(frozen=True)
class Params:
    p: int
    q: int

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, Integral):
                raise ParamsError(f"{name} must be an integer, got {v!r}")
        if not (self.p >= self.q >= 1):
            raise ParamsError(f"need p >= q >= 1, got p={self.p}, q={self.q}")

    def qi(self, i: int) -> int:
        """Number of cells in row ``i``, i.e. ``min(i, q)``."""
        return min(i, self.q)

    @property
    def ncells(self) -> int:
        return self.p * self.q - self.q * (self.q - 1) // 2

    def __contains__(self, cell) -> bool:
        i, j = cell
        return 1 <= i <= self.p and 1 <= j <= min(i, self.q)


class Cell(NamedTuple):
    i: int
    j: int


def index_set(params: Params) -> list[Cell]:
    """All cells ``(i, j)`` with ``j <= min(i, q)`` in row-major order."""
    return [Cell(i, j) for i in range(1, params.p + 1) for j in range(1, params.qi(i) + 1)]


def row_cells(params: Params, i: int) -> list[Cell]:
    return [Cell(i, j) for j in range(1, params.qi(i) + 1)]


def cell_name(cell) -> str:
    return f"x_{cell[0]}_{cell[1]}"


# --------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class OrbiMatrix:
    """A sparse rational matrix supported on the lower-triangular index set.

    Zero entries are not stored. Indexing with ``m[i, j]`` returns 0 for any
    cell that is absent.
    """

    params: Params
    entries: Mapping[Cell, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for cell, v in dict(self.entries).items():
            cell = Cell(*cell)
            if cell not in self.params:
                raise InvalidInput(f"cell {tuple(cell)} outside the index set of {self.params}")
            v = as_rational(v)
            if v:
                clean[cell] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def zeros(cls, params: Params) -> OrbiMatrix:
        return cls(params, {})

    @classmethod
    def from_cells(cls, params: Params, cells: Iterable) -> OrbiMatrix:
        """0/1 matrix with ones exactly at ``cells``."""
        return cls(params, {Cell(*c): ONE for c in cells})

    @classmethod
    def from_rows(cls, rows: list[list]) -> OrbiMatrix:
        """Build from triangular rows ``[[x11], [x21, x22], ...]`` (rows may be
        shorter than ``min(i, q)``; q is the longest row length)."""
        p = len(rows)
        q = max((len(r) for r in rows), default=0)
        params = Params(p, max(q, 1))
        return cls(params, {Cell(i + 1, j + 1): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    def __getitem__(self, cell) -> Fraction:
        return self.entries.get(Cell(*cell), ZERO)

    def __iter__(self) -> Iterator[tuple[Cell, Fraction]]:
        return iter(sorted(self.entries.items()))

    def total(self, cells: Iterable) -> Fraction:
        return sum((self[c] for c in cells), ZERO)

    def row_sum(self, i: int) -> Fraction:
        return self.total(row_cells(self.params, i))

    def support(self) -> list[Cell]:
        return sorted(self.entries)

    def column(self, j: int) -> tuple[Fraction, ...]:
        """Column ``j`` as a full length-p vector (zeros above the diagonal)."""
        return tuple(self[i, j] if i >= j else ZERO for i in range(1, self.params.p + 1))

    def dense(self) -> list[list[Fraction]]:
        p, q = self.params.p, self.params.q
        return [[self[i, j] if j <= i else ZERO for j in range(1, q + 1)] for i in range(1, p + 1)]

    def is_binary(self) -> bool:
        return all(v == 1 for v in self.entries.values())

    def dot(self, other) -> Fraction:
        """Inner product with another matrix or a mapping cell -> number."""
        if isinstance(other, OrbiMatrix):
            other = other.entries
        return sum((v * as_rational(other.get(c, 0)) for c, v in self.entries.items()), ZERO)

    def to_json(self) -> dict:
        return {
            "p": self.params.p,
            "q": self.params.q,
            "entries": [{"i": c.i, "j": c.j, "v": format_rational(v)} for c, v in self],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict, params: Params | None = None) -> OrbiMatrix:
        if not isinstance(data, dict):
            raise InvalidInput("matrix JSON must be an object")
        extra = set(data) - {"p", "q", "entries"}
        if extra:
            raise InvalidInput(f"unknown matrix JSON keys {sorted(extra)}")
        if params is None:
            try:
                params = Params(data["p"], data["q"])
            except KeyError as exc:
                raise InvalidInput(f"matrix JSON lacks {exc}") from None
        elif ("p" in data and data["p"] != params.p) or ("q" in data and data["q"] != params.q):
            raise InvalidInput("matrix JSON dimensions disagree with the requested p, q")
        entries = {}
        for e in data.get("entries", []):
            if not isinstance(e, dict) or set(e) - {"i", "j", "v"}:
                raise InvalidInput(f"bad matrix entry {e!r}")
            try:
                cell = Cell(int(e["i"]), int(e["j"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidInput(f"bad matrix entry {e!r}") from exc
            if cell in entries:
                raise InvalidInput(f"duplicate entry for cell {tuple(cell)}")
            entries[cell] = parse_rational(e.get("v", "1"))
        return cls(params, entries)


def is_vertex(m: OrbiMatrix, kind: str = PACKING) -> bool:
    """True iff ``m`` is a vertex of the packing (partitioning) orbitope.

    The matrix must be 0/1 with at most (exactly) one 1 per row, and its
    columns, read as length-p vectors padded with zeros above the diagonal,
    must be lexicographically non-increasing from left to right.
    """
    check_kind(kind)
    if not m.is_binary():
        return False
    bound = (lambda s: s == 1) if kind == PARTITIONING else (lambda s: s <= 1)
    if not all(bound(m.row_sum(i)) for i in range(1, m.params.p + 1)):
        return False
    cols = [m.column(j) for j in range(1, m.params.q + 1)]
    return all(a >= b for a, b in zip(cols, cols[1:]))
