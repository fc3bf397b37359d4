"""
Canonical polygons and the instability function
===============================================

A lattice is a Gram matrix on Z^n.  For each rank we find the sublattice of
smallest volume, plot (rank, log volume) and take the lower convex hull.
"""

import math

import numpy as np

from grayson_lab import Sublattice, canonical_polygon, d_W, normalize_det
from grayson_lab.sampling import random_integer_gram, rng_for

# a lattice squeezed along e1
s = np.diag([0.25, 4.0])
P = canonical_polygon(s)
print("points  ", P.points)
print("slopes  ", P.slopes, "(expect -ln 2, ln 2 =", -math.log(2), math.log(2), ")")
print("flag    ", P.filtration)

# the first step of the flag is span e1, and it destabilizes the lattice
e1 = Sublattice(2, ((1, 0),))
print("d_W     ", d_W(normalize_det(s), e1))

# %%
# A random integral lattice in rank 3; the CSV is what one would plot.
g = random_integer_gram(rng_for(3), 3)
print(g.gram)
print(canonical_polygon(g).to_csv())

# %%
# Points of the upper half plane: the height of tau is d_W for W = span e1.
from grayson_lab.symspace import upper_half_plane_point

for y in (0.5, 1.0, 2.0, 8.0):
    x = upper_half_plane_point(0.1, y)
    print(f"y = {y:4}  d_W = {d_W(x, e1):.6f}")
