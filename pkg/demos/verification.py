"""
Exact verification against brute force
=======================================

`verify` runs seeded suites that compare the optimizer, the LP systems, the
projection, the SCIs and the change of variables against enumeration. All
arithmetic is rational, so every comparison is an equality.
"""

from orbikit import Params
from orbikit.verify import verify

report = verify(Params(4, 3), "all", seed=7, trials=10)
for check in report.checks:
    status = "ok " if check.passed else "FAIL"
    print(f"{status} {check.suite:12s} {check.name:22s} {check.count:6d} checks {check.info or ''}")
print("all passed:", report.passed)
