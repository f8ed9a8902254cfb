"""Acceptance criteria 1-9, each at its stated scale and tolerance.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from orbikit.core import PACKING, PARTITIONING, Params, index_set
from orbikit.digraph import build, diag_into_segment, grid_paths, path_arcs, path_node_sets
from orbikit.formulations import (
    ExtendedPoint,
    compact_system,
    extended_system,
    from_compact,
    to_compact,
    x_objective,
)
from orbikit.lifting import lift, saturation_violations
from orbikit.linsys import stats
from orbikit.lp_oracle import enumerate_integral_extended_points, enumerate_paths, enumerate_vertices, simplex_max
from orbikit.optimizer import optimize_packing, optimize_partitioning
from orbikit.sci import enumerate_scis, scan, sci_system, separate
from orbikit.verify import random_convex_point, random_objective, random_packing_point


def grid(pmax, qmin=1):
    return [Params(p, q) for p in range(1, pmax + 1) for q in range(qmin, p + 1)]


def vertex_matrix(params, verts):
    cells = index_set(params)
    return np.array([[int(v[c]) for c in cells] for v in verts], dtype=np.int64), cells


def test_1_optimizer_matches_brute_force(criterion):
    start = time.perf_counter()
    checked = wrong = 0
    for P in grid(6):
        rng = np.random.default_rng(1000 * P.p + P.q)
        tables = {}
        for kind in (PACKING, PARTITIONING):
            tables[kind] = vertex_matrix(P, enumerate_vertices(P, kind))
        for _ in range(200):
            d = random_objective(P, rng)
            for kind, solve in ((PACKING, optimize_packing), (PARTITIONING, optimize_partitioning)):
                V, cells = tables[kind]
                best = Fraction(int((V @ np.array([d[c] for c in cells], dtype=np.int64)).max()))
                checked += 1
                wrong += solve(P, d).value != best
    elapsed = time.perf_counter() - start
    criterion.note(f"{checked} optima, {wrong} mismatches, {elapsed:.1f}s (limit 60s)")
    assert criterion.done(wrong == 0 and elapsed < 60)


def test_2_extended_lp_is_integral(criterion):
    start = time.perf_counter()
    lps = wrong = missing = 0
    for P in grid(5):
        rng = np.random.default_rng(2000 + 10 * P.p + P.q)
        system = extended_system(P)
        points = enumerate_integral_extended_points(P)
        X, cells = vertex_matrix(P, [pt.x for pt in points])
        for _ in range(100):
            d = random_objective(P, rng)
            dp = optimize_packing(P, d).value
            system.set_objective(x_objective(d))
            lps += 1
            wrong += simplex_max(system).value != dp
            missing += int((X @ np.array([d[c] for c in cells], dtype=np.int64)).max()) != dp
    elapsed = time.perf_counter() - start
    criterion.note(f"{lps} LPs, {wrong} value mismatches, {missing} without a 0/1 optimum, {elapsed:.1f}s (limit 120s)")
    assert criterion.done(wrong == 0 and missing == 0 and elapsed < 120)


def test_3_projection_of_integral_points(criterion):
    sizes = []
    ok = True
    for P in grid(4):
        xs = {tuple(pt.x.support()) for pt in enumerate_integral_extended_points(P)}
        vs = {tuple(v.support()) for v in enumerate_vertices(P)}
        ok &= xs == vs
        sizes.append(len(vs))
    criterion.note(f"{len(sizes)} (p,q) pairs, {sum(sizes)} vertices, sets equal: {ok}")
    assert criterion.done(ok)


def test_4_sci_lp_is_integral(criterion):
    start = time.perf_counter()
    lps = wrong = fractional = 0
    for P in grid(5):
        rng = np.random.default_rng(4000 + 10 * P.p + P.q)
        system = sci_system(P)
        for _ in range(100):
            d = random_objective(P, rng)
            system.set_objective(x_objective(d))
            res = simplex_max(system)
            lps += 1
            wrong += res.value != optimize_packing(P, d).value
            fractional += not res.binary
    elapsed = time.perf_counter() - start
    criterion.note(
        f"{lps} LPs, {wrong} value mismatches, {lps - fractional} terminated at 0/1 points"
        f" ({fractional} at fractional degenerate optima), {elapsed:.1f}s (limit 120s)"
    )
    assert criterion.done(wrong == 0 and elapsed < 120)


def test_5_lifting(criterion):
    points = bad = 0
    for P in grid(5):
        rng = np.random.default_rng(5000 + 10 * P.p + P.q)
        verts = enumerate_vertices(P)
        system = extended_system(P)
        for _ in range(500):
            x = random_convex_point(verts, rng)
            y = lift(x)
            pt = ExtendedPoint(x, y)
            points += 1
            good = (
                y.is_unit_flow()
                and not saturation_violations(x, y)
                and not pt.link_violations()
                and not pt.bar_violations()
                and system.is_feasible(pt.assignment())
            )
            bad += not good
    criterion.note(f"{points} lifted points, {bad} failures")
    assert criterion.done(bad == 0)


def test_6_cut_identities(criterion):
    diag_start = column = stated = corrected = 0
    bad_diag = badcol = bad_stated = badcorr = 0
    for P in grid(5):
        D = build(P)
        aidx = D.arc_index
        flows = np.array(
            [[a in set(path_arcs(P, g)) for a in D.arcs] for g in enumerate_paths(P)], dtype=np.int64
        )

        def vec(arcs):
            v = np.zeros(len(D.arcs), dtype=np.int64)
            for a in arcs:
                v[aidx[a]] += 1
            return v

        for c in index_set(P):
            bar_in = vec(a for k in range(c.j, P.qi(c.i) + 1) for a in D.in_arcs[(c.i, k)])
            yb = flows @ bar_in
            column += len(flows)
            badcol += int((flows @ vec(diag_into_segment(P, c.i, c.j)) != yb).sum())
            for st in [(k, k) for k in range(1, c.j + 1)] + [(k, 0) for k in range(c.i)]:
                for g in grid_paths(P, st, c):
                    S, T = path_node_sets(g)
                    dS = flows @ vec(D.cut_sets(S).diag_in)
                    vT = flows @ vec(D.cut_sets(T).vert_out)
                    if st[1] >= 1:
                        diag_start += len(flows)
                        bad_diag += int((dS - vT != yb).sum())
                    else:
                        stated += len(flows)
                        bad_stated += int((1 - vT != yb).sum())
                        corrected += len(flows)
                        badcorr += int((1 + dS - vT != yb).sum())
    criterion.note(f"diagonal-start cuts: {bad_diag}/{diag_start} fail")
    criterion.note(f"column cut: {badcol}/{column} fail")
    criterion.note(f"column-0-start cuts as required: {bad_stated}/{stated} fail")
    criterion.note(f"column-0-start cuts with the diag_in(S) term: {badcorr}/{corrected} fail")
    assert bad_diag == 0 and badcol == 0 and badcorr == 0
    assert criterion.done(bad_stated == 0), "1 - y(vert_out(T)) = y(bar) fails when diag_in(S) carries flow"


def test_7_compact_bijection_and_sizes(criterion):
    points = bad = 0
    for P in grid(4):
        for kind in (PACKING, PARTITIONING):
            ext, cmp_ = extended_system(P, kind), compact_system(P, kind)
            names = cmp_.variable_names
            for pt in enumerate_integral_extended_points(P, kind):
                cpt = to_compact(pt)
                back = from_compact(cpt)
                vals = cpt.assignment()
                points += 1
                bad += not (
                    back == pt
                    and to_compact(back) == cpt
                    and cmp_.is_feasible({v: vals.get(v, 0) for v in names})
                    and ext.is_feasible(back.assignment())
                )
    sized = oversize = 0
    worst = [0.0, 0.0, 0.0]
    for P in grid(50, qmin=2):
        st = stats(compact_system(P))
        pq = P.p * P.q
        ratios = (st.nvars / (2 * pq), st.nconstraints_core / (4 * pq), st.nnonzeros / (10 * pq))
        worst = [max(w, r) for w, r in zip(worst, ratios)]
        sized += 1
        oversize += any(r >= 1 for r in ratios)
    criterion.note(f"{points} integral points, {bad} bijection failures")
    criterion.note(
        f"{sized} size instances, {oversize} over a bound (max ratios vars {worst[0]:.3f},"
        f" cons {worst[1]:.3f}, nnz {worst[2]:.3f})"
    )
    assert criterion.done(bad == 0 and oversize == 0)


def test_8_separation(criterion):
    points = unsound = missed = violated = 0
    for P in grid(5):
        rng = np.random.default_rng(8000 + 10 * P.p + P.q)
        scis = enumerate_scis(P)
        for _ in range(500):
            x = random_packing_point(P, rng)
            cut = separate(x)
            worst = scan(x, scis)
            lifted_bad = bool(ExtendedPoint(x, lift(x)).bar_violations())
            points += 1
            violated += worst is not None
            if cut is not None and cut.violation(x) <= 0:
                unsound += 1
            if worst is not None and lifted_bad and cut is None:
                missed += 1
    criterion.note(f"{points} points ({violated} violate some SCI), {unsound} unsound cuts, {missed} missed")
    assert criterion.done(unsound == 0 and missed == 0 and violated > 0)


def test_9_linear_time(criterion):
    q = 10
    times = {}
    for p in (250_000, 500_000, 1_000_000):
        P = Params(p, q)
        rng = np.random.default_rng(9)
        d = np.zeros((p, q), dtype=np.int64)
        mask = np.tril(np.ones((p, q), dtype=bool))
        d[mask] = rng.integers(-9, 10, size=int(mask.sum()))
        best = float("inf")
        for _ in range(3):
            t = time.perf_counter()
            optimize_packing(P, d)
            best = min(best, time.perf_counter() - t)
        times[p] = best
    r1 = times[500_000] / times[250_000]
    r2 = times[1_000_000] / times[500_000]
    criterion.note(
        "best of 3: " + ", ".join(f"p={p}: {t:.2f}s" for p, t in times.items())
        + f"; doubling ratios {r1:.2f}, {r2:.2f} (limit 2.5); limit 10s at p=1e6"
    )
    assert criterion.done(r1 <= 2.5 and r2 <= 2.5 and times[1_000_000] < 10)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
