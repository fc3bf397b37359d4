"""Independent reference computations used to cross-check the main code paths.

These deliberately avoid the exterior-power enumeration and the canonical
polygon: slopes are recomputed from box enumeration of short vectors, and
geodesic distances from quadrature of the metric tensor.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import integrate

from .lattice import Sublattice, log_vol
from .symspace import _as_gram, geodesic, metric_norm


def geodesic_length_quadrature(s0, s1, h: float = 1e-6) -> float:
    """Length of ``t -> geodesic(s0, s1, t)`` on ``[0, 1]`` from the metric tensor.

    The velocity is taken by central differences, so nothing here relies on
    the closed-form distance.
    """
    a, b = _as_gram(s0), _as_gram(s1)

    def speed(t):
        lo, hi = max(t - h, 0.0), min(t + h, 1.0)
        vel = (geodesic(a, b, hi).gram - geodesic(a, b, lo).gram) / (hi - lo)
        return metric_norm(geodesic(a, b, t), 0.5 * (vel + vel.T))

    val, _ = integrate.quad(speed, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10, limit=100)
    return val


def box_short_vectors(G: np.ndarray, bound: float) -> list[np.ndarray]:
    """Nonzero integer ``x`` with ``sqrt(x^T G x) <= bound``, by scanning a box.

    A vector of ``G``-length ``r`` has ``|x_j| <= r sqrt((G^-1)_jj)``.
    """
    G = np.asarray(G, dtype=float)
    box = [int(math.floor(bound * math.sqrt(v) + 1e-9)) for v in np.diag(np.linalg.inv(G))]
    out = []
    for x in itertools.product(*(range(-r, r + 1) for r in box)):
        if any(x):
            v = np.array(x, dtype=float)
            if v @ G @ v <= bound * bound * (1 + 1e-9):
                out.append(v)
    return out


def _shortest_length(G: np.ndarray) -> float:
    bound = math.sqrt(float(np.min(np.diag(G))))
    return min(math.sqrt(float(v @ G @ v)) for v in box_short_vectors(G, bound))


def brute_force_slopes(s, W: Sublattice) -> tuple[float, float]:
    """``(c_inf, c_sup)`` as the literal inf/sup over chains, for ``n <= 3``.

    ``c_sup`` ranges over ``W0 ⊊ W`` and ``c_inf`` over ``W2 ⊋ W``; the
    candidates that can be extremal are found by box enumeration.
    """
    gram = _as_gram(s)
    n, m = gram.shape[0], W.rank
    if n > 3 or not 0 < m < n:
        raise ValueError("oracle covers proper W in dimension at most 3")
    B = W.array()
    lw = log_vol(gram, W)
    total = 0.5 * float(np.linalg.slogdet(gram)[1])

    sup = [lw / m]                                  # W0 = 0
    if m == 2:
        # W0 of rank 1: the shortest vector of W gives the largest slope
        GW = B.T @ gram @ B
        sup.append(lw - math.log(_shortest_length(GW)))

    inf = [(total - lw) / (n - m)]                  # W2 = Z^n
    if n == 3 and m == 1:
        # W2 of rank 2: vol_W2 = vol_W |v_perp|, minimized over v outside W
        w = B[:, 0]
        sw = gram @ w
        ww = float(w @ sw)

        def perp_sq(v):
            return float(v @ gram @ v) - float(v @ sw) ** 2 / ww

        r = min(math.sqrt(max(perp_sq(e), 0.0)) for e in np.eye(3) if perp_sq(e) > 1e-12 * ww)
        # representatives reduced mod w satisfy |v|^2 <= r^2 + |w|^2 / 4
        reach = math.sqrt(r * r + ww / 4)
        best = r
        for v in box_short_vectors(gram, reach):
            p = perp_sq(v)
            if p > 1e-12 * float(v @ gram @ v):
                best = min(best, math.sqrt(p))
        inf.append(math.log(best))
    return min(inf), max(sup)

