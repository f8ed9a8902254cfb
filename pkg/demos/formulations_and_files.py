"""
Extended formulations and solver files
======================================

Three constraint systems describe the packing orbitope: the flow-based
extended system in (x, y), the compact system in (z, w), and the system of
shifted-column inequalities (SCIs) in x alone. Any of them can be written as
CPLEX-LP or MPS and solved exactly here.
"""

import io

from orbikit import Params
from orbikit.formulations import compact_objective, compact_system, extended_system, x_objective
from orbikit.linsys import stats
from orbikit.lpfiles import dumps_lp, emit, read_lp
from orbikit.lp_oracle import simplex_max
from orbikit.sci import enumerate_scis, sci_system

P = Params(8, 6)
for name, system in [("extended", extended_system(P)), ("compact", compact_system(P)), ("sci", sci_system(P))]:
    print(f"{name:9s}", stats(system).line())

# the compact system stays below 2pq variables and 10pq nonzeros
st = stats(compact_system(P))
print("compact core constraints:", st.nconstraints_core, "< 4pq =", 4 * P.p * P.q)

# SCIs for p = 3: x22 <= x11 and x32 <= x11 + x21
for sci in enumerate_scis(Params(3, 2)):
    print("SCI:", sci)

# the same objective over all three systems gives one value
P = Params(4, 3)
d = {(1, 1): 1, (2, 2): 3, (3, 1): -2, (3, 3): 2, (4, 2): 1}
ext, cmp_, sci = extended_system(P), compact_system(P), sci_system(P)
ext.set_objective(x_objective(d))
cmp_.set_objective(compact_objective(P, d))
sci.set_objective(x_objective(d))
print("LP values:", [str(simplex_max(s).value) for s in (ext, cmp_, sci)])

# write the smallest compact system and read it back exactly
small = compact_system(Params(1, 1))
print(dumps_lp(small))
buf = io.BytesIO()
emit(small, "mps", buf)
print(buf.getvalue().decode())
assert read_lp(dumps_lp(small)) == small
