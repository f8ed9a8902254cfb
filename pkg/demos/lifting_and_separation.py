"""
Lifting points and separating shifted-column inequalities
=========================================================

A fractional point x with row sums at most 1 is lifted to a unit s-t flow y
by rerouting flow from column j-1 onto diagonal arcs. If (x, y) violates a
bar constraint, a backward path in the residual network yields an SCI that
x violates.
"""

from fractions import Fraction

from orbikit import OrbiMatrix, Params
from orbikit.formulations import ExtendedPoint
from orbikit.lifting import lift, saturation_violations
from orbikit.sci import separate

half = Fraction(1, 2)

# half of the vertex {11, 22} plus half of zero: inside the orbitope
x = OrbiMatrix(Params(2, 2), {(1, 1): half, (2, 2): half})
y = lift(x)
for arc, v in sorted(y.values.items()):
    print(f"  {arc.var_name:8s} {v}")
print("feasible:", ExtendedPoint(x, y).is_feasible(), "| saturation violations:", saturation_violations(x, y))
print("separate:", separate(x))

# x22 = 1 alone breaks column order; the lift cannot cover bar(2,2)
bad = OrbiMatrix(Params(2, 2), {(2, 2): 1})
print("lifted feasible:", ExtendedPoint(bad, lift(bad)).is_feasible())
cut = separate(bad)
print("violated SCI:", cut, "by", cut.violation(bad))

# a larger example: the separator finds an SCI with a longer shifted column
x = OrbiMatrix(Params(5, 3), {(1, 1): half, (2, 1): half, (3, 2): half, (4, 3): 1})
cut = separate(x)
print("violated SCI:", cut, "by", cut.violation(x))
