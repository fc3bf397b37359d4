"""
Cover sets and their chains
===========================

X(W, t) is the set of points where W is more than t-unstable.  At any point
the active W form a chain, so at most n - 1 cover sets meet.
"""

import numpy as np

from grayson_lab import active_sets, normalize_det
from grayson_lab.cover import cusp_height_probe, neighborhood_beta
from grayson_lab.sampling import random_point, rng_for
from grayson_lab.symspace import upper_half_plane_point

# a point far out in a corner activates a full flag
x = normalize_det(np.diag([1e-4, 1.0, 1e4]))
for W in active_sets(x, 1.0):
    print(W)

# %%
# Count how many sets are active at random points in rank 3.
rng = rng_for(0)
counts = [len(active_sets(random_point(rng, 3, spread=1.5), 1.0)) for _ in range(200)]
print("histogram of active set counts:", np.bincount(counts))

# %%
# The complement of the cover sets, seen in the upper half plane, stays below
# height t after reduction to the fundamental domain.
pts = [upper_half_plane_point(float(rng.uniform(-3, 3)), float(np.exp(rng.uniform(-3, 2))))
       for _ in range(200)]
for t in (1.0, 2.0, 4.0):
    r = cusp_height_probe(pts, t)
    print(t, r.samples, r.stats["max_height"], r.passed)

# %%
# How much room a ball of radius alpha needs.
for alpha in (0.1, 1.0, 6.0):
    print(alpha, neighborhood_beta(alpha, 1.0, 2))
