from fractions import Fraction

import numpy as np
import pytest

from orbikit.core import PARTITIONING, OrbiMatrix, Params, index_set
from orbikit.digraph import SINK, SOURCE, build, column_zero_path, path_flow
from orbikit.formulations import (
    CompactPoint,
    ExtendedPoint,
    compact_objective,
    compact_system,
    extended_system,
    from_compact,
    to_compact,
)
from orbikit.lifting import lift_vertex
from orbikit.linsys import stats
from orbikit.lp_oracle import enumerate_integral_extended_points, enumerate_vertices
from orbikit.verify import random_objective

GRID = [(p, q) for p in range(1, 5) for q in range(1, p + 1)]


def rows(system):
    return {c.name: (dict(c.coeffs), c.sense, c.rhs) for c in system.constraints}


class TestExtended:
    def test_p1(self):
        s = extended_system(Params(1, 1))
        assert s.variable_names == ["x_1_1", "y_s", "y_v_0_0", "y_d_0_0", "y_t_0", "y_t_1"]
        r = rows(s)
        assert set(r) == {"flow_0_0", "flow_1_0", "flow_1_1", "source", "link_1_1", "bar_1_1"}
        assert r["link_1_1"] == ({"y_d_0_0": 1, "x_1_1": -1}, "<=", 0)
        assert r["bar_1_1"] == ({"x_1_1": 1, "y_d_0_0": -1}, "<=", 0)
        assert r["source"] == ({"y_s": 1}, "=", 1)

    @pytest.mark.parametrize("p", range(1, 9))
    def test_constraint_count(self, p):
        for q in range(1, p + 1):
            P = Params(p, q)
            ncells = len(index_set(P))
            base = len(build(P).nodes) - 2 + 1 + 2 * ncells
            assert len(extended_system(P).constraints) == base
            assert len(extended_system(P, PARTITIONING).constraints) == base + p

    def test_p8_q6_variables(self):
        names = extended_system(Params(8, 6)).variable_names
        assert sum(n.startswith("x_") for n in names) == 33
        assert sum(n.startswith("y_") for n in names) == 76

    def test_stats(self):
        assert stats(extended_system(Params(1, 1))).nvars == 6

    @pytest.mark.parametrize("pq", GRID)
    def test_integral_points_are_feasible(self, pq):
        s = extended_system(Params(*pq))
        for pt in enumerate_integral_extended_points(Params(*pq)):
            assert s.is_feasible(pt.assignment())
            assert pt.is_feasible()

    def test_row_sum_implication(self):
        P = Params(4, 3)
        pts = enumerate_integral_extended_points(P)
        rng = np.random.default_rng(3)
        for _ in range(50):
            idx = rng.integers(0, len(pts), size=3)
            lam = [Fraction(int(k), 1) for k in rng.integers(1, 5, size=3)]
            tot = sum(lam)
            x = {c: sum(l * pts[int(k)].x[c] for l, k in zip(lam, idx)) / tot for c in index_set(P)}
            assert all(sum(v for c, v in x.items() if c.i == i) <= 1 for i in range(1, 5))


class TestCompact:
    def test_p1(self):
        r = rows(compact_system(Params(1, 1)))
        assert r["vert0"] == ({"w_1_1": 1}, "<=", 1)
        assert r["link_1_1"] == ({"w_1_1": 1, "z_1_1": -1}, "<=", 0)
        assert r["bar_1_1"] == ({"z_1_1": 1, "w_1_1": -1}, "<=", 0)
        assert r["diag_0_0"] == ({"w_1_1": 1}, ">=", 0)
        assert r["wlast_1"] == ({"w_1_1": 1}, ">=", 0)

    def test_p8_q6(self):
        st = stats(compact_system(Params(8, 6)))
        assert st.nvars == 66 < 96
        assert st.nconstraints_core < 192
        assert st.nnonzeros_core < st.nnonzeros < 480

    @pytest.mark.parametrize("p", [*range(2, 13), 25, 50])
    def test_size_bounds(self, p):
        for q in range(2, p + 1):
            st = stats(compact_system(Params(p, q)))
            assert st.nvars < 2 * p * q
            assert st.nconstraints_core < 4 * p * q
            assert st.nnonzeros < 10 * p * q

    def test_zero_is_feasible(self):
        P = Params(5, 3)
        s = compact_system(P)
        assert s.is_feasible({v: 0 for v in s.variable_names})

    def test_partitioning_face(self):
        # w11 = 1 alone admits x = (1; 0) at p=2, q=1; the row equations cut it off
        P = Params(2, 1)
        cpt = to_compact(ExtendedPoint(OrbiMatrix(P, {(1, 1): 1}), path_flow(P, [SOURCE, (0, 0), (1, 1), (2, 1), SINK])))
        vals = cpt.assignment()
        full = {v: vals.get(v, 0) for v in compact_system(P).variable_names}
        assert compact_system(P).is_feasible(full)
        assert full["w_1_1"] == 1
        assert not compact_system(P, PARTITIONING).is_feasible(full)


class TestTransform:
    def test_zero(self):
        P = Params(3, 2)
        pt = ExtendedPoint(OrbiMatrix.zeros(P), path_flow(P, column_zero_path(P)))
        cpt = to_compact(pt)
        assert cpt.z == {} and cpt.w == {}
        assert from_compact(CompactPoint(P)) == pt

    def test_vertex_example(self):
        x = OrbiMatrix.from_rows([[1], [0, 1]])
        cpt = to_compact(ExtendedPoint(x, lift_vertex(x)))
        ones = {(1, 1): 1, (2, 1): 1, (2, 2): 1}
        assert cpt.z == ones and cpt.w == ones

    @pytest.mark.parametrize("pq", GRID)
    @pytest.mark.parametrize("kind", ["packing", "partitioning"])
    def test_bijection_on_integral_points(self, pq, kind):
        P = Params(*pq)
        ext, cmp_ = extended_system(P, kind), compact_system(P, kind)
        for pt in enumerate_integral_extended_points(P, kind):
            cpt = to_compact(pt)
            assert from_compact(cpt) == pt
            vals = {v: cpt.assignment().get(v, 0) for v in cmp_.variable_names}
            assert cmp_.is_feasible(vals)
            assert ext.is_feasible(from_compact(cpt).assignment())

    def test_random_convex_compact_points(self):
        P = Params(4, 3)
        pts = [to_compact(pt) for pt in enumerate_integral_extended_points(P)]
        rng = np.random.default_rng(11)
        s = compact_system(P)
        for _ in range(40):
            a, b = (pts[int(k)] for k in rng.integers(0, len(pts), size=2))
            lam = Fraction(int(rng.integers(0, 6)), 5)
            z = {c: lam * a.zv(*c) + (1 - lam) * b.zv(*c) for c in index_set(P)}
            w = {c: lam * a.wv(*c) + (1 - lam) * b.wv(*c) for c in index_set(P)}
            cpt = CompactPoint(P, z, w)
            assert to_compact(from_compact(cpt)) == cpt
            vals = {v: cpt.assignment().get(v, 0) for v in s.variable_names}
            assert s.is_feasible(vals)
            assert from_compact(cpt).is_feasible()

    def test_compact_objective(self):
        P = Params(4, 3)
        rng = np.random.default_rng(5)
        for _ in range(20):
            d = random_objective(P, rng)
            obj = compact_objective(P, d)
            for v in enumerate_vertices(P):
                cpt = to_compact(ExtendedPoint(v, lift_vertex(v)))
                assert sum(a * cpt.zv(*map(int, n.split("_")[1:])) for n, a in obj.items()) == v.dot(d)
