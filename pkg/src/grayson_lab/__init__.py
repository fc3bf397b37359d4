"""Inner-product spaces, lattice filtrations and the instability function ``d_W``.

Modules
-------
symspace
    Positive-definite forms, their Riemannian metric and the ``GL_n(Z)`` action.
exterior
    Gram-determinant volumes on exterior powers and their gradients.
lattice
    Saturated sublattices, canonical polygons, slopes and ``d_W``.
cover
    Cover sets ``X(W, t)``, active sets, stabilizers and the plane cusp probe.
flowspace
    Generalized geodesics, the flow and longness checks.
cli
    Command-line front end (``grayson-lab``).
"""

from .cover import CoverSet, StabilizerDecomposition, active_sets, in_cover_set, neighborhood_beta
from .enumeration import UncertifiedEnumeration
from .exterior import DecomposableFrame, MultiVector, gram_volume, grad_vol_squared, s_xi
from .flowspace import GeneralizedGeodesic, ev0, evaluate, flow, fs_distance
from .lattice import (CanonicalPolygon, Sublattice, c_inf, c_sup, canonical_polygon, d_W,
                      instability, saturate)
from .symspace import (InnerProduct, IntegerAutomorphism, NormalizedPoint, SymTangent, act,
                       distance, geodesic, metric_inner, normalize_det)

__all__ = [
    "CanonicalPolygon", "CoverSet", "DecomposableFrame", "GeneralizedGeodesic", "InnerProduct",
    "IntegerAutomorphism", "MultiVector", "NormalizedPoint", "StabilizerDecomposition",
    "Sublattice", "SymTangent", "UncertifiedEnumeration", "act", "active_sets", "c_inf", "c_sup",
    "canonical_polygon", "d_W", "distance", "ev0", "evaluate", "flow", "fs_distance", "geodesic",
    "grad_vol_squared", "gram_volume", "in_cover_set", "instability", "metric_inner",
    "neighborhood_beta", "normalize_det", "s_xi", "saturate",
]
