"""The acyclic network D(p, q) whose s-t paths encode orbitope vertices.

Grid nodes are plain ``(i, j)`` tuples with ``0 <= j <= min(i, q)``; the
source and sink are the strings ``"s"`` and ``"t"``. Column 0 and row 0 exist
only here, cells of the index set are the grid nodes with ``j >= 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .core import ONE, ZERO, Cell, InvalidInput, Params, as_rational, format_rational, parse_rational

SOURCE = "s"
SINK = "t"

VERTICAL = "v"
DIAGONAL = "d"
SOURCE_ARC = "s"
SINK_ARC = "t"


class Arc(NamedTuple):
    """An arc identified by ``(kind, i, j)``.

    ``("v", i, j)`` is (i,j)->(i+1,j), ``("d", i, j)`` is (i,j)->(i+1,j+1),
    ``("s", 0, 0)`` is s->(0,0) and ``("t", p, j)`` is (p,j)->t.
    """

    kind: str
    i: int
    j: int

    @property
    def tail(self):
        if self.kind == SOURCE_ARC:
            return SOURCE
        return (self.i, self.j)

    @property
    def head(self):
        if self.kind == VERTICAL:
            return (self.i + 1, self.j)
        if self.kind == DIAGONAL:
            return (self.i + 1, self.j + 1)
        if self.kind == SOURCE_ARC:
            return (0, 0)
        return SINK

    @property
    def var_name(self) -> str:
        if self.kind == SOURCE_ARC:
            return "y_s"
        if self.kind == SINK_ARC:
            return f"y_t_{self.j}"
        return f"y_{self.kind}_{self.i}_{self.j}"


def vertical(i: int, j: int) -> Arc:
    return Arc(VERTICAL, i, j)


def diagonal(i: int, j: int) -> Arc:
    return Arc(DIAGONAL, i, j)


def source_arc() -> Arc:
    return Arc(SOURCE_ARC, 0, 0)


def sink_arc(params: Params, j: int) -> Arc:
    return Arc(SINK_ARC, params.p, j)


def arc_between(params: Params, u, w) -> Arc:
    if u == SOURCE:
        arc = source_arc()
    elif w == SINK:
        arc = sink_arc(params, u[1])
    elif w == (u[0] + 1, u[1]):
        arc = vertical(*u)
    elif w == (u[0] + 1, u[1] + 1):
        arc = diagonal(*u)
    else:
        raise InvalidInput(f"no arc from {u} to {w}")
    if not arc_exists(params, arc):
        raise InvalidInput(f"arc {arc} is not in D({params.p},{params.q})")
    return arc


def arc_exists(params: Params, arc: Arc) -> bool:
    kind, i, j = arc
    p = params.p
    if kind == VERTICAL:
        return 0 <= i <= p - 1 and 0 <= j <= params.qi(i)
    if kind == DIAGONAL:
        return 0 <= i <= p - 1 and 0 <= j <= params.qi(i + 1) - 1
    if kind == SOURCE_ARC:
        return i == 0 and j == 0
    if kind == SINK_ARC:
        return i == p and 0 <= j <= params.q
    return False


def node_exists(params: Params, node) -> bool:
    if node in (SOURCE, SINK):
        return True
    i, j = node
    return 0 <= i <= params.p and 0 <= j <= params.qi(i)


def bar(params: Params, i: int, j: int) -> list[Cell]:
    """Cells of row ``i`` at or right of column ``j``; empty when ``j > min(i, q)``."""
    return [Cell(i, l) for l in range(max(j, 1), params.qi(i) + 1)]


def column_segment(params: Params, i: int, j: int) -> list[Cell]:
    """Cells ``(k, j)`` for ``j <= k <= i``; empty when ``j > min(i, q)``."""
    if j > params.qi(i) or j < 1:
        return []
    return [Cell(k, j) for k in range(j, i + 1)]


def diag_into_segment(params: Params, i: int, j: int) -> list[Arc]:
    """Diagonal arcs entering the column segment ending at ``(i, j)``."""
    return [diagonal(k - 1, j - 1) for k, _ in column_segment(params, i, j)]


class CutSets(NamedTuple):
    out: frozenset
    vert_out: frozenset
    in_: frozenset
    vert_in: frozenset
    diag_in: frozenset


@dataclass(frozen=True)
class Digraph:
    params: Params
    nodes: tuple
    arcs: tuple
    out_arcs: Mapping = field(repr=False)
    in_arcs: Mapping = field(repr=False)

    def __contains__(self, item) -> bool:
        if isinstance(item, Arc):
            return arc_exists(self.params, item)
        return node_exists(self.params, item)

    @cached_property
    def arc_index(self) -> dict:
        return {a: k for k, a in enumerate(self.arcs)}

    def cut_sets(self, W: Iterable) -> CutSets:
        return cut_sets(self, W)

    def to_dot(self) -> str:
        def label(n):
            return n if isinstance(n, str) else f"{n[0]},{n[1]}"

        lines = [f'digraph "D({self.params.p},{self.params.q})" {{']
        for n in self.nodes:
            lines.append(f'  "{label(n)}";')
        for a in self.arcs:
            style = ' [style=dashed]' if a.kind == DIAGONAL else ""
            lines.append(f'  "{label(a.tail)}" -> "{label(a.head)}"{style};')
        lines.append("}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=64)
def build(params: Params) -> Digraph:
    """Build D(p, q). Nodes are listed in a topological order (s, rows 0..p, t)."""
    p, q = params.p, params.q
    nodes = [SOURCE]
    for i in range(p + 1):
        nodes.extend((i, j) for j in range(params.qi(i) + 1))
    nodes.append(SINK)
    arcs = [source_arc()]
    arcs += [vertical(i, j) for i in range(p) for j in range(params.qi(i) + 1)]
    arcs += [diagonal(i, j) for i in range(p) for j in range(params.qi(i + 1))]
    arcs += [sink_arc(params, j) for j in range(q + 1)]
    out_arcs = {n: [] for n in nodes}
    in_arcs = {n: [] for n in nodes}
    for a in arcs:
        out_arcs[a.tail].append(a)
        in_arcs[a.head].append(a)
    return Digraph(
        params,
        tuple(nodes),
        tuple(arcs),
        {n: tuple(v) for n, v in out_arcs.items()},
        {n: tuple(v) for n, v in in_arcs.items()},
    )


def cut_sets(D: Digraph, W: Iterable) -> CutSets:
    W = set(W)
    out, vout, in_, vin, din = set(), set(), set(), set(), set()
    for a in D.arcs:
        t_in, h_in = a.tail in W, a.head in W
        if t_in and not h_in:
            out.add(a)
            if a.kind == VERTICAL:
                vout.add(a)
        elif h_in and not t_in:
            in_.add(a)
            if a.kind == VERTICAL:
                vin.add(a)
            elif a.kind == DIAGONAL:
                din.add(a)
    return CutSets(*(frozenset(s) for s in (out, vout, in_, vin, din)))


# --------------------------------------------------------------------------
# paths


def path_arcs(params: Params, path: Sequence) -> list[Arc]:
    """Arcs of a node-list path; raises if consecutive nodes are not joined."""
    return [arc_between(params, u, w) for u, w in zip(path, path[1:])]


def check_path(params: Params, path: Sequence) -> None:
    if not path:
        raise InvalidInput("empty path")
    for n in path:
        if not node_exists(params, n):
            raise InvalidInput(f"node {n} is not in D({params.p},{params.q})")
    path_arcs(params, path)


def path_node_sets(path: Sequence, params: Params | None = None) -> tuple[frozenset, frozenset]:
    """``(S, T)``: nodes not entered via a diagonal arc, and nodes left via one."""
    if params is not None:
        check_path(params, path)
    S = {path[0]}
    T = set()
    for u, w in zip(path, path[1:]):
        diag = u != SOURCE and w != SINK and w == (u[0] + 1, u[1] + 1)
        if diag:
            T.add(u)
        else:
            S.add(w)
    return frozenset(S), frozenset(T)


def grid_paths(params: Params, start, end) -> Iterator[list]:
    """All directed paths between two grid nodes as node lists (depth-first)."""
    r, c = end

    def reach(a, b):
        return a <= r and b <= c and c - b <= r - a

    def dfs(path):
        a, b = path[-1]
        if (a, b) == end:
            yield list(path)
            return
        for nxt in ((a + 1, b), (a + 1, b + 1)):
            if nxt[1] <= params.qi(nxt[0]) and reach(*nxt):
                path.append(nxt)
                yield from dfs(path)
                path.pop()

    if reach(*start):
        yield from dfs([start])


def column_zero_path(params: Params) -> list:
    return [SOURCE] + [(i, 0) for i in range(params.p + 1)] + [SINK]


# --------------------------------------------------------------------------
# flows


@dataclass(frozen=True)
class Flow:
    """Rational arc values on D(p, q). Zero arcs are not stored."""

    params: Params
    values: Mapping[Arc, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for a, v in dict(self.values).items():
            a = Arc(*a)
            if not arc_exists(self.params, a):
                raise InvalidInput(f"arc {tuple(a)} is not in D({self.params.p},{self.params.q})")
            v = as_rational(v)
            if v:
                clean[a] = v
        object.__setattr__(self, "values", clean)

    def __getitem__(self, arc) -> Fraction:
        return self.values.get(Arc(*arc), ZERO)

    def total(self, arcs: Iterable) -> Fraction:
        return sum((self[a] for a in arcs), ZERO)

    def inflow(self, node) -> Fraction:
        return self.total(build(self.params).in_arcs[node])

    def outflow(self, node) -> Fraction:
        return self.total(build(self.params).out_arcs[node])

    def through(self, cells: Iterable) -> Fraction:
        """Flow passing through the given grid nodes (sum of their inflows)."""
        return sum((self.inflow(tuple(c)) for c in cells), ZERO)

    def bar_flow(self, i: int, j: int) -> Fraction:
        return self.through(bar(self.params, i, j))

    @property
    def value(self) -> Fraction:
        return self.outflow(SOURCE) - self.inflow(SOURCE)

    def conservation_violations(self) -> list:
        D = build(self.params)
        return [n for n in D.nodes if n not in (SOURCE, SINK) and self.inflow(n) != self.outflow(n)]

    def is_unit_flow(self) -> bool:
        return (
            all(v >= 0 for v in self.values.values())
            and self.value == 1
            and not self.conservation_violations()
        )

    def is_path_flow(self) -> bool:
        return self.is_unit_flow() and all(v == 1 for v in self.values.values())

    def to_path(self) -> list:
        """Node list of a 0/1 path flow."""
        if not self.is_path_flow():
            raise InvalidInput("flow is not a path incidence vector")
        D = build(self.params)
        node, path = SOURCE, [SOURCE]
        while node != SINK:
            (a,) = [a for a in D.out_arcs[node] if self[a] == 1]
            node = a.head
            path.append(node)
        return path

    def dot(self, costs: Mapping) -> Fraction:
        return sum((v * as_rational(costs[a]) for a, v in self.values.items()), ZERO)

    def __add__(self, other: Flow) -> Flow:
        vals = dict(self.values)
        for a, v in other.values.items():
            vals[a] = vals.get(a, ZERO) + v
        return Flow(self.params, vals)

    def scale(self, factor) -> Flow:
        factor = as_rational(factor)
        return Flow(self.params, {a: v * factor for a, v in self.values.items()})

    def to_json(self) -> dict:
        D = build(self.params)
        order = D.arc_index
        return {
            "p": self.params.p,
            "q": self.params.q,
            "arcs": [
                {"kind": a.kind, "i": a.i, "j": a.j, "flow": format_rational(v)}
                for a, v in sorted(self.values.items(), key=lambda t: order[t[0]])
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict, params: Params | None = None) -> Flow:
        try:
            params = params or Params(data["p"], data["q"])
            vals = {}
            for e in data["arcs"]:
                a = Arc(str(e["kind"]), int(e["i"]), int(e["j"]))
                vals[a] = vals.get(a, ZERO) + parse_rational(e["flow"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad flow JSON: {exc}") from exc
        return cls(params, vals)


def path_flow(params: Params, path: Sequence, amount=ONE) -> Flow:
    return Flow(params, {a: amount for a in path_arcs(params, path)})
