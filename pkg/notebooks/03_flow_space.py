"""
Generalized geodesics and longness
==================================

A generalized geodesic runs along a geodesic for a while and is constant
outside an interval.  The flow shifts the time parameter.
"""

import math

import numpy as np

from grayson_lab import flowspace as fs
from grayson_lab.cover import neighborhood_beta
from grayson_lab.lattice import Sublattice
from grayson_lab.symspace import distance, normalize_det

x = normalize_det(np.eye(2))
y = normalize_det(np.diag([math.e ** 2, 1.0]))
c = fs.through(x, y, clamp=(-1.0, 2.0))
for t in (-3, -1, 0, 1, 2, 5):
    print(t, distance(x, fs.evaluate(c, t)))

# %%
# Distance in the flow space versus distance at time zero.
d = fs.flow(c, 0.75)
print("fs distance", fs.fs_distance(c, d), "  d(0) distance", distance(fs.ev0(c), fs.ev0(d)))

# %%
# Longness for a geodesic high in the cusp: with the beta from the comparison
# bound every sampled neighbour stays in the cover set.
e1 = Sublattice(2, ((1, 0),))
beta = neighborhood_beta(6.0, 1.0, 2)
c = fs.cusp_geodesic(0.2, 3 * (1 + beta))
print(fs.verify_longness(c, e1, 1.0, beta, 1.0, 1.0, seed=0, samples=16).to_json()["stats"])

# %%
# Without the margin the same check fails near the boundary.
c = fs.cusp_geodesic(0.1, 1.005)
r = fs.verify_longness(c, e1, 1.0, 0.0, 1.0, 1.0, seed=0, samples=16)
print(r.summary())
