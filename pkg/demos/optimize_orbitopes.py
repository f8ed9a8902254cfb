"""
Linear optimization over packing and partitioning orbitopes
===========================================================

The optimizer turns <d, x> into a longest-path problem on the acyclic
digraph D(p, q) and solves it in O(pq) time.
"""

import time

import numpy as np

from orbikit import OrbiMatrix, Params, optimize_packing, optimize_partitioning
from orbikit.lp_oracle import brute_force_max, enumerate_vertices

# a 3x2 objective; only the lower-triangular cells exist
P = Params(3, 2)
d = OrbiMatrix.from_rows([[2], [-1, 3], [4, -5]])
res = optimize_packing(P, d)
print("packing optimum:", res.value)
print("x support:", res.x.support())
print("s-t path:", res.path)

# partitioning forces exactly one 1 per row; here the packing optimum already has one
print("partitioning optimum:", optimize_partitioning(P, d).value)

# brute force over all vertices agrees
print("brute force:", brute_force_max(enumerate_vertices(P), d))

# the sweep is linear in p: one vectorized pass per column
rng = np.random.default_rng(0)
for p in (100_000, 200_000, 400_000):
    big = rng.integers(-9, 10, size=(p, 10))
    t = time.perf_counter()
    value = optimize_packing(Params(p, 10), big).value
    print(f"p={p}: value {value} in {time.perf_counter() - t:.3f}s")
