from fractions import Fraction

import pytest

from orbikit.core import InvalidInput
from orbikit.linsys import NONNEG, LinearSystem, Stats, stats


def small():
    s = LinearSystem(name="demo")
    s.add_variable("a")
    s.add_variable("b", lower=None, upper=3)
    s.add_variable("c", lower=None)
    s.add_constraint("r1", {"a": 1, "b": "1/2"}, "<=", 2)
    s.add_constraint("r2", {"c": 1, "a": -1}, ">=", 0, tag=NONNEG)
    s.add_constraint("r3", {"a": 1, "c": 1}, "=", 1)
    return s


def test_rows_are_sorted_by_variable_order():
    s = small()
    assert list(s.constraint("r2").coeffs) == ["a", "c"]
    assert s.constraint("r1").coeffs["b"] == Fraction(1, 2)


def test_validation():
    s = small()
    with pytest.raises(InvalidInput):
        s.add_variable("a")
    with pytest.raises(InvalidInput):
        s.add_constraint("r1", {"a": 1}, "<=", 0)
    with pytest.raises(InvalidInput):
        s.add_constraint("r9", {"zz": 1}, "<=", 0)
    with pytest.raises(InvalidInput):
        s.add_constraint("r9", {"a": 1}, "<", 0)


def test_violations_and_objective():
    s = small()
    pt = {"a": 1, "b": 3, "c": 0}
    assert s.violations(pt) == ["r1", "r2"]
    assert s.is_feasible({"a": "1/2", "b": 0, "c": "1/2"})
    assert "bound:b" in s.violations({"a": 0, "b": 4, "c": 1})
    assert "bound:a" in s.violations({"a": -1, "b": 0, "c": 2})
    s.set_objective({"a": 2, "c": -1})
    assert s.objective_value(pt) == 2


def test_stats():
    st = stats(small())
    assert (st.nvars, st.nrows, st.nnonzeros, st.nbounds) == (3, 3, 6, 2)
    assert st.nconstraints == 5 and st.nconstraints_core == 2 and st.nnonzeros_core == 4
    assert st.line() == "vars=3 cons=5 nnz=6"
    assert Stats.from_json(st.to_json()) == st


def test_equality_is_structural():
    assert small() == small()
    other = small()
    other.add_constraint("r4", {"a": 1}, "<=", 1)
    assert other != small()
