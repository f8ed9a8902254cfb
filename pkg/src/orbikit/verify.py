"""Exact-arithmetic verification suites.

Each check compares a library operation with an independent oracle at
desk scale and records how many instances it ran and which failed.
Randomness comes only from ``numpy.random.default_rng(seed)`` (PCG64), so a
report is reproducible across platforms for a given seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import caps
from .core import (
    PACKING,
    PARTITIONING,
    Cell,
    OrbiMatrix,
    Params,
    SizeCapExceeded,
    index_set,
    is_vertex,
)
from .digraph import bar, build, diag_into_segment, grid_paths, path_arcs, path_node_sets
from .formulations import (
    CompactPoint,
    ExtendedPoint,
    compact_objective,
    compact_system,
    extended_system,
    from_compact,
    to_compact,
    x_objective,
)
from .lifting import lift, lift_vertex, saturation_violations
from .linsys import stats
from .lp_oracle import enumerate_integral_extended_points, enumerate_paths, enumerate_vertices, simplex_max
from .optimizer import optimize
from .sci import enumerate_scis, scan, sci_system, separate

SUITES = ("cuts", "integrality", "projection", "sci", "transform")
MAX_FAILURES_LISTED = 10


@dataclass
class Check:
    suite: str
    name: str
    count: int = 0
    nfail: int = 0
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def record(self, ok: bool, msg: str = "") -> bool:
        self.count += 1
        if not ok:
            self.nfail += 1
            if len(self.failures) < MAX_FAILURES_LISTED:
                self.failures.append(msg)
        return ok

    @property
    def passed(self) -> bool:
        return self.nfail == 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "passed": self.passed,
            "count": self.count,
            "failed": self.nfail,
            "failures": list(self.failures),
            "info": dict(self.info),
        }

    @classmethod
    def from_json(cls, data: dict) -> Check:
        return cls(data["suite"], data["name"], data["count"], data["failed"], list(data["failures"]), dict(data["info"]))


@dataclass
class Report:
    params: Params
    seed: int
    trials: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "p": self.params.p,
            "q": self.params.q,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> Report:
        return cls(Params(data["p"], data["q"]), data["seed"], data["trials"], [Check.from_json(c) for c in data["checks"]])


# --------------------------------------------------------------------------
# random instances


def random_objective(params: Params, rng: np.random.Generator, lo: int = -9, hi: int = 9) -> dict[Cell, int]:
    vals = rng.integers(lo, hi + 1, size=params.ncells)
    return {c: int(v) for c, v in zip(index_set(params), vals)}


def random_convex_point(vertices, rng: np.random.Generator, max_terms: int = 4) -> OrbiMatrix:
    """Convex combination of up to ``max_terms`` random vertices with small integer weights."""
    k = int(rng.integers(1, max_terms + 1))
    picks = rng.integers(0, len(vertices), size=k)
    weights = rng.integers(1, 6, size=k)
    total = int(weights.sum())
    acc: dict = {}
    for idx, w in zip(picks, weights):
        for c, v in vertices.matrices[int(idx)]:
            acc[c] = acc.get(c, Fraction(0)) + v * Fraction(int(w), total)
    return OrbiMatrix(vertices.params, acc)


def random_packing_point(params: Params, rng: np.random.Generator, max_den: int = 4) -> OrbiMatrix:
    """Nonnegative rational point with row sums at most 1: each row splits
    ``N`` units among its cells and a slack."""
    entries = {}
    for i in range(1, params.p + 1):
        n = params.qi(i)
        den = int(rng.integers(1, max_den + 1))
        cuts = np.sort(rng.integers(0, den + 1, size=n + 1))
        cuts[-1] = den if rng.random() < 0.5 else cuts[-1]
        parts = np.diff(np.concatenate(([0], cuts)))
        for j in range(1, n + 1):
            entries[(i, j)] = Fraction(int(parts[j - 1]), den)
    return OrbiMatrix(params, entries)


def _cap(params: Params, limit: int, suite: str) -> None:
    if params.p > limit:
        raise SizeCapExceeded(f"suite {suite!r} is capped at p <= {limit}, got p={params.p}")


def _matrix_rows(params: Params, mats) -> np.ndarray:
    """0/1 matrices as rows of an integer array over ``index_set`` order."""
    pos = {c: k for k, c in enumerate(index_set(params))}
    out = np.zeros((len(mats), params.ncells), dtype=np.int64)
    for r, m in enumerate(mats):
        for c, v in m:
            out[r, pos[c]] = int(v)
    return out


def _dvec(params: Params, d: dict) -> np.ndarray:
    return np.array([d[c] for c in index_set(params)], dtype=np.int64)


# --------------------------------------------------------------------------
# checks


def check_optimizer(params: Params, rng: np.random.Generator, trials: int, kinds=(PACKING, PARTITIONING)) -> Check:
    """DP optimum against the brute-force vertex maximum."""
    chk = Check("integrality", "optimizer_vs_vertices")
    for kind in kinds:
        verts = enumerate_vertices(params, kind)
        V = _matrix_rows(params, verts.matrices)
        chk.info[f"{kind}_vertices"] = len(verts)
        for _ in range(trials):
            d = random_objective(params, rng)
            want = int((V @ _dvec(params, d)).max())
            got = optimize(params, d, kind).value
            chk.record(got == want, f"{kind} d={_fmt_d(d)}: dp={got} brute={want}")
    return chk


def _fmt_d(d: dict) -> str:
    return ",".join(str(v) for _, v in sorted(d.items()))


def check_cut_identities(params: Params) -> Check:
    """Both cut identities for every qualifying path and every s-t path flow,
    plus the column cut and the in/out arc identity. Each identity is linear in y,
    so it is evaluated for all path flows at once as a matrix product.

    For paths starting in column 0 the identity checked is
    ``1 + y(diag_in(S)) - y(vert_out(T)) = y(bar(i, j))``; the form without
    the ``diag_in(S)`` term fails whenever that term is positive, and the
    number of such (path, flow) pairs is reported in ``info``.
    """
    chk = Check("cuts", "cut_identities")
    D = build(params)
    aidx = D.arc_index
    flows = np.array(
        [[1 if a in arcs else 0 for a in D.arcs] for arcs in (set(path_arcs(params, g)) for g in enumerate_paths(params))],
        dtype=np.int64,
    )
    cols, consts, labels = [], [], []

    def inflow_vec(nodes) -> np.ndarray:
        vec = np.zeros(len(D.arcs), dtype=np.int64)
        for n in nodes:
            for a in D.in_arcs[tuple(n)]:
                vec[aidx[a]] += 1
        return vec

    def arc_vec(arcs) -> np.ndarray:
        vec = np.zeros(len(D.arcs), dtype=np.int64)
        for a in arcs:
            vec[aidx[a]] += 1
        return vec

    npaths = literal_gaps = 0
    for cell in index_set(params):
        i, j = cell
        bar_in = inflow_vec(bar(params, i, j))
        cols.append(arc_vec(diag_into_segment(params, i, j)) - bar_in)
        consts.append(0)
        labels.append(f"column cut ({i},{j})")
        starts = [(k, k) for k in range(1, j + 1)] + [(k, 0) for k in range(i)]
        for st in starts:
            for gamma in grid_paths(params, st, (i, j)):
                S, T = path_node_sets(gamma)
                cS, cT = D.cut_sets(S), D.cut_sets(T)
                full = D.cut_sets(gamma)
                # vertical arcs leaving the path's node set, except at its end node
                leave = frozenset(a for a in full.vert_out if a.tail != (i, j))
                npaths += 1
                chk.record(
                    full.diag_in == cS.diag_in and leave == cT.vert_out,
                    f"in/out arc identity fails for path {gamma}",
                )
                if st[1] == 0:
                    # the diagonal inflow of S(gamma) is absent from the stated
                    # form; it matters only when gamma steps down a column >= 1
                    dS = arc_vec(cS.diag_in)
                    cols.append(dS - arc_vec(cT.vert_out) - bar_in)
                    consts.append(-1)
                    labels.append(f"column-0 start cut, path {gamma}")
                    if dS.any():
                        literal_gaps += int((flows @ dS).astype(bool).sum())
                else:
                    cols.append(arc_vec(cS.diag_in) - arc_vec(cT.vert_out) - bar_in)
                    consts.append(0)
                    labels.append(f"diagonal start cut, path {gamma}")
    G = np.array(cols, dtype=np.int64).T
    vals = flows @ G
    ok = vals == np.array(consts, dtype=np.int64)
    for k, label in enumerate(labels):
        bad = np.flatnonzero(~ok[:, k])
        chk.count += flows.shape[0]
        if bad.size:
            chk.nfail += int(bad.size)
            if len(chk.failures) < MAX_FAILURES_LISTED:
                chk.failures.append(f"{label}: {bad.size} flows violate it")
    chk.info.update(
        flows=int(flows.shape[0]),
        identities=len(labels),
        paths=npaths,
        cut_without_inflow_term_failures=literal_gaps,
    )
    return chk


def _integral_points(params: Params, kind: str):
    pts = enumerate_integral_extended_points(params, kind)
    return pts, _matrix_rows(params, [pt.x for pt in pts])


def check_extended_lp(params: Params, rng: np.random.Generator, trials: int, kind: str = PACKING) -> Check:
    """Exact LP optimum of the extended system equals the DP value and is
    attained by an enumerated 0/1 point."""
    chk = Check("integrality", f"extended_lp_{kind}")
    system = extended_system(params, kind)
    _, X = _integral_points(params, kind)
    integral = 0
    for _ in range(trials):
        d = random_objective(params, rng)
        dp = optimize(params, d, kind).value
        system.set_objective(x_objective(d))
        res = simplex_max(system)
        best01 = int((X @ _dvec(params, d)).max())
        integral += res.binary
        chk.record(res.value == dp and best01 == dp, f"d={_fmt_d(d)}: lp={res.value} dp={dp} best01={best01}")
    chk.info.update(integral_points=len(X), binary_lp_optima=integral)
    return chk


def check_compact_lp(params: Params, rng: np.random.Generator, trials: int, kind: str = PACKING) -> Check:
    chk = Check("transform", f"compact_lp_{kind}")
    system = compact_system(params, kind)
    for _ in range(trials):
        d = random_objective(params, rng)
        dp = optimize(params, d, kind).value
        system.set_objective(compact_objective(params, d))
        res = simplex_max(system)
        chk.record(res.value == dp, f"d={_fmt_d(d)}: lp={res.value} dp={dp}")
    return chk


def check_projection(params: Params) -> Check:
    """x-parts of integral extended points equal the vertex set, both kinds;
    every vertex lifts to a feasible point."""
    chk = Check("projection", "projection")
    for kind in (PACKING, PARTITIONING):
        pts = enumerate_integral_extended_points(params, kind)
        xs = {tuple(sorted(pt.x.support())) for pt in pts}
        verts = {tuple(sorted(m.support())) for m in enumerate_vertices(params, kind)}
        chk.record(xs <= verts, f"{kind}: {len(xs - verts)} x-parts are not vertices")
        chk.record(verts <= xs, f"{kind}: {len(verts - xs)} vertices have no integral extension")
        chk.info[f"{kind}_vertices"] = len(verts)
        chk.info[f"{kind}_integral_points"] = len(pts)
    for m in enumerate_vertices(params, PACKING):
        pt = ExtendedPoint(m, lift_vertex(m))
        chk.record(pt.is_feasible(PACKING) and is_vertex(pt.x), f"lift_vertex infeasible for {m.support()}")
    return chk


def check_sci_validity(params: Params) -> Check:
    chk = Check("sci", "sci_validity")
    scis = enumerate_scis(params)
    verts = enumerate_vertices(params, PACKING)
    for sci in scis:
        for m in verts:
            chk.record(sci.violation(m) <= 0, f"vertex {m.support()} violates {sci}")
    chk.info.update(scis=len(scis), vertices=len(verts))
    return chk


def check_sci_lp(params: Params, rng: np.random.Generator, trials: int, kind: str = PACKING) -> Check:
    """Exact LP optimum over the SCI system equals the DP value. Integrality
    of the returned vertex is reported, and the optimal point is lifted."""
    chk = Check("sci", f"sci_lp_{kind}")
    system = sci_system(params, kind)
    integral = 0
    fractional = []
    for _ in range(trials):
        d = random_objective(params, rng)
        dp = optimize(params, d, kind).value
        system.set_objective(x_objective(d))
        res = simplex_max(system)
        chk.record(res.value == dp, f"d={_fmt_d(d)}: lp={res.value} dp={dp}")
        if res.binary:
            integral += 1
        elif len(fractional) < MAX_FAILURES_LISTED:
            fractional.append(_fmt_d(d))
        x = OrbiMatrix(params, {Cell(*map(int, n.split("_")[1:])): v for n, v in res.point.items()})
        y = lift(x)
        chk.record(ExtendedPoint(x, y).is_feasible(PACKING), f"LP optimum for d={_fmt_d(d)} does not lift")
    chk.info.update(binary_optima=integral, trials=trials, fractional_objectives=fractional)
    return chk


def check_lifting(params: Params, rng: np.random.Generator, trials: int) -> Check:
    """``lift`` on random convex combinations of packing vertices."""
    chk = Check("sci", "lift_convex_combinations")
    verts = enumerate_vertices(params, PACKING)
    for _ in range(trials):
        x = random_convex_point(verts, rng)
        y = lift(x)
        pt = ExtendedPoint(x, y)
        ok = y.is_unit_flow() and not saturation_violations(x, y) and pt.is_feasible(PACKING)
        chk.record(ok, f"lift fails at {x.dumps()}")
    return chk


def check_separation(params: Params, rng: np.random.Generator, trials: int) -> Check:
    """Separation against the exhaustive SCI scan."""
    chk = Check("sci", "separation")
    scis = enumerate_scis(params)
    verts = enumerate_vertices(params, PACKING)
    found = 0
    for t in range(trials):
        x = random_packing_point(params, rng) if t % 2 else random_convex_point(verts, rng)
        cut = separate(x)
        worst = scan(x, scis)
        lifted_ok = ExtendedPoint(x, lift(x)).is_feasible(PACKING)
        if cut is not None:
            found += 1
            chk.record(cut.violation(x) > 0, f"returned SCI {cut} is not violated by {x.dumps()}")
        chk.record((cut is None) == lifted_ok, f"separate disagrees with the lifted flow at {x.dumps()}")
        chk.record(worst is None or cut is not None, f"scan finds {worst} but separate returns none at {x.dumps()}")
        chk.record(worst is not None or cut is None, f"separate returns {cut} but scan finds none at {x.dumps()}")
    chk.info.update(cuts_found=found, scis=len(scis))
    return chk


def check_transform(params: Params, rng: np.random.Generator, trials: int) -> Check:
    """Compact change of variables on all integral points, both kinds, and on
    random convex combinations of transformed points."""
    chk = Check("transform", "compact_bijection")
    for kind in (PACKING, PARTITIONING):
        ext = extended_system(params, kind)
        comp = compact_system(params, kind)
        pts = enumerate_integral_extended_points(params, kind)
        cpts = []
        for pt in pts:
            c = to_compact(pt)
            back = from_compact(c)
            chk.record(back == pt, f"{kind}: round trip changes {pt.x.support()}")
            chk.record(comp.is_feasible(c.assignment()), f"{kind}: image of {pt.x.support()} infeasible")
            chk.record(ext.is_feasible(back.assignment()), f"{kind}: preimage infeasible")
            cpts.append(c)
        for _ in range(trials):
            k = int(rng.integers(1, 4))
            picks = rng.integers(0, len(cpts), size=k)
            weights = rng.integers(1, 6, size=k)
            tot = int(weights.sum())
            z: dict = {}
            w: dict = {}
            for idx, wt in zip(picks, weights):
                lam = Fraction(int(wt), tot)
                for c, v in cpts[int(idx)].z.items():
                    z[c] = z.get(c, 0) + lam * v
                for c, v in cpts[int(idx)].w.items():
                    w[c] = w.get(c, 0) + lam * v
            cpt = CompactPoint(params, z, w)
            back = from_compact(cpt)
            chk.record(to_compact(back) == cpt, f"{kind}: compact round trip fails")
            chk.record(
                comp.is_feasible(cpt.assignment()) and ext.is_feasible(back.assignment()),
                f"{kind}: convex combination infeasible",
            )
    return chk


def size_bounds(params: Params) -> dict:
    """Size of the compact system against 2pq variables, 4pq constraints and 10pq nonzeros."""
    st = stats(compact_system(params, PACKING))
    pq = params.p * params.q
    return {
        "vars": st.nvars,
        "cons_core": st.nconstraints_core,
        "cons_all": st.nconstraints,
        "nnz_core": st.nnonzeros_core,
        "nnz": st.nnonzeros,
        "ok": st.nvars < 2 * pq and st.nconstraints_core < 4 * pq and st.nnonzeros_core < 10 * pq,
    }


def check_size_bounds(pmax: int = 50, qmin: int = 2) -> Check:
    chk = Check("transform", "size_bounds")
    for p in range(qmin, pmax + 1):
        for q in range(qmin, p + 1):
            b = size_bounds(Params(p, q))
            chk.record(b["ok"], f"p={p} q={q}: {b}")
    return chk


# --------------------------------------------------------------------------
# suites


def run_suite(suite: str, params: Params, seed: int = 0, trials: int = 25) -> list[Check]:
    rng = np.random.default_rng(seed)
    if suite == "cuts":
        _cap(params, caps.MAX_P_ENUMERATION, suite)
        return [check_cut_identities(params)]
    if suite == "integrality":
        _cap(params, caps.MAX_P_EXTENDED_POINTS, suite)
        return [
            check_optimizer(params, rng, trials),
            check_extended_lp(params, rng, trials, PACKING),
            check_extended_lp(params, rng, trials, PARTITIONING),
        ]
    if suite == "projection":
        _cap(params, caps.MAX_P_EXTENDED_POINTS, suite)
        return [check_projection(params)]
    if suite == "sci":
        _cap(params, caps.MAX_P_ENUMERATION, suite)
        return [
            check_sci_validity(params),
            check_sci_lp(params, rng, trials, PACKING),
            check_sci_lp(params, rng, trials, PARTITIONING),
            check_lifting(params, rng, trials),
            check_separation(params, rng, trials),
        ]
    if suite == "transform":
        _cap(params, caps.MAX_P_EXTENDED_POINTS, suite)
        chk = Check("transform", "size_bounds_instance")
        if params.q >= 2:
            b = size_bounds(params)
            chk.record(b["ok"], f"size bounds fail: {b}")
            chk.info.update(b)
        return [
            check_transform(params, rng, trials),
            check_compact_lp(params, rng, trials, PACKING),
            check_compact_lp(params, rng, trials, PARTITIONING),
            chk,
        ]
    raise ValueError(f"unknown suite {suite!r}")


def verify(params: Params, suite: str = "all", seed: int = 0, trials: int = 25) -> Report:
    """Run one suite or all of them with a single seeded generator per suite."""
    names = SUITES if suite == "all" else (suite,)
    report = Report(params, seed, trials)
    for name in names:
        report.checks += run_suite(name, params, seed, trials)
    return report
