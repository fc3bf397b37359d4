"""Generalized geodesics, the flow on them and sampled longness checks.

A generalized geodesic is stored as

    c(t) = gamma(clamp(t + offset, a, b)),   gamma(u) = exp_anchor(u * direction),

with ``a <= 0 <= b`` so the anchor lies on the image.  The flow only shifts
``offset``, which is a :class:`fractions.Fraction`; flows therefore compose
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.stats import qmc

from .cover import CoverSet, in_cover_set, neighborhood_beta
from .lattice import Sublattice, d_W
from .report import Report
from .symspace import (IntegerAutomorphism, NormalizedPoint, SymTangent, act, act_tangent,
                       distance, exp_map, log_map, metric_norm, normalize_det,
                       det1_tolerance, parallel_transport, tangent_at_slice,
                       upper_half_plane_point)
from .sampling import random_unit_tangent, rng_for

UNIT_TOL = 1e-9
TAIL_TOL = 1e-9
INF = math.inf


class LongnessInputError(ValueError):
    """The geodesic handed to :func:`verify_longness` does not satisfy its precondition."""


def _exact(t) -> Fraction:
    return t if isinstance(t, Fraction) else Fraction(float(t))


@dataclass(frozen=True, eq=False)
class GeneralizedGeodesic:
    anchor: NormalizedPoint
    direction: SymTangent
    clamp: tuple[float, float] = (-INF, INF)
    offset: Fraction = Fraction(0)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        anchor = self.anchor if isinstance(self.anchor, NormalizedPoint) else normalize_det(self.anchor)
        direction = self.direction if isinstance(self.direction, SymTangent) else SymTangent(self.direction)
        a, b = (float(v) for v in self.clamp)
        if direction.dim != anchor.dim:
            raise ValueError("direction and anchor dimensions differ")
        if not (a <= 0.0 <= b):
            raise ValueError("clamp interval must contain 0")
        if a == b:
            direction = SymTangent(np.zeros_like(anchor.gram))
        else:
            tol = max(UNIT_TOL, det1_tolerance(anchor.gram))
            norm = metric_norm(anchor, direction)
            if abs(norm - 1.0) > tol:
                raise ValueError(f"direction must have unit length, got {norm!r}")
            tr = float(np.trace(np.linalg.solve(anchor.gram, direction.mat)))
            if abs(tr) > tol:
                raise ValueError("direction must be tangent to the determinant-one slice")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "clamp", (a, b))
        object.__setattr__(self, "offset", _exact(self.offset))

    @property
    def dim(self) -> int:
        return self.anchor.dim

    def is_constant(self) -> bool:
        return self.clamp[0] == self.clamp[1]

    def parameter(self, t) -> float:
        """Geodesic parameter ``clamp(t + offset)`` used at time ``t``."""
        u = _exact(t) + self.offset
        a, b = self.clamp
        if u < a:
            return a
        if u > b:
            return b
        return float(u)

    def kinks(self) -> list[float]:
        """Times at which ``c`` switches between moving and resting."""
        off = float(self.offset)
        return [v - off for v in self.clamp if math.isfinite(v)]

    def _spectral(self):
        if "spectral" not in self._cache:
            w, q = np.linalg.eigh(self.anchor.gram)
            half = (q * np.sqrt(w)) @ q.T
            invhalf = (q / np.sqrt(w)) @ q.T
            inner = invhalf @ self.direction.mat @ invhalf
            lam, Q = np.linalg.eigh(0.5 * (inner + inner.T))
            self._cache["spectral"] = (half @ Q, Q.T @ invhalf, lam)
        return self._cache["spectral"]

    def point(self, u: float) -> NormalizedPoint:
        """``gamma(u)`` without clamping."""
        if u == 0.0 or self.is_constant():
            return self.anchor
        hq, _, lam = self._spectral()
        out = (hq * np.exp(u * lam)) @ hq.T
        return normalize_det(0.5 * (out + out.T))

    def to_json(self) -> dict:
        return {
            "anchor": self.anchor.gram.tolist(),
            "direction": self.direction.mat.tolist(),
            "clamp": [None if not math.isfinite(v) else v for v in self.clamp],
            "offset": str(self.offset),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GeneralizedGeodesic":
        a, b = data.get("clamp", [None, None])
        return cls(NormalizedPoint(np.asarray(data["anchor"], dtype=float)),
                   SymTangent(np.asarray(data["direction"], dtype=float)),
                   (-INF if a is None else a, INF if b is None else b),
                   Fraction(data.get("offset", "0")))


def evaluate(c: GeneralizedGeodesic, t) -> NormalizedPoint:
    return c.point(c.parameter(t))


def flow(c: GeneralizedGeodesic, tau) -> GeneralizedGeodesic:
    """``Phi_tau(c)``, the path ``t -> c(t + tau)``."""
    out = GeneralizedGeodesic(c.anchor, c.direction, c.clamp, c.offset + _exact(tau))
    out._cache.update(c._cache)
    return out


def ev0(c: GeneralizedGeodesic) -> NormalizedPoint:
    return evaluate(c, 0)


def translate(g: IntegerAutomorphism, c: GeneralizedGeodesic) -> GeneralizedGeodesic:
    """Image of ``c`` under ``g``: pointwise ``act(g, c(t))``."""
    if not isinstance(g, IntegerAutomorphism):
        g = IntegerAutomorphism(g)
    anchor = act(g, c.anchor)
    if c.is_constant():
        return GeneralizedGeodesic(anchor, SymTangent(np.zeros_like(anchor.gram)), c.clamp, c.offset)
    return GeneralizedGeodesic(anchor, _unit_slice(anchor, act_tangent(g.array(), c.direction)),
                               c.clamp, c.offset)


def _unit_slice(x, u) -> SymTangent:
    # removes rounding drift off the slice and off unit length
    u = tangent_at_slice(x, u)
    norm = metric_norm(x, u)
    if norm == 0:
        raise ValueError("direction has no component along the slice")
    return SymTangent(u.mat / norm)


def constant(x) -> GeneralizedGeodesic:
    x = x if isinstance(x, NormalizedPoint) else normalize_det(x)
    return GeneralizedGeodesic(x, SymTangent(np.zeros_like(x.gram)), (0.0, 0.0))


def line(x, direction, clamp=(-INF, INF)) -> GeneralizedGeodesic:
    """Generalized geodesic through ``x`` along ``direction``, rescaled to unit slice speed."""
    x = x if isinstance(x, NormalizedPoint) else normalize_det(x)
    return GeneralizedGeodesic(x, _unit_slice(x, direction), clamp)


def through(x, y, clamp=(-INF, INF)) -> GeneralizedGeodesic:
    """Geodesic with ``c(0) = x`` heading toward ``y``."""
    return line(x, log_map(x, normalize_det(y)).mat, clamp)


# ---------------------------------------------------------------------------
# metric on generalized geodesics

def _tail_cutoff(d0: float) -> float:
    # pointwise distance grows at most like d0 + 2|t|, and the weighted tail
    # beyond T is then (d0 + 2T + 2) e^-T
    T = 1.0
    while (d0 + 2 * T + 2) * math.exp(-T) >= TAIL_TOL:
        T += 1.0
    return T


def _same_path(c: GeneralizedGeodesic, d: GeneralizedGeodesic) -> bool:
    # the quadrature leaves rounding noise, so identical data is decided exactly
    return (c.clamp == d.clamp and c.offset == d.offset
            and np.array_equal(c.anchor.gram, d.anchor.gram)
            and np.array_equal(c.direction.mat, d.direction.mat))


def fs_distance(c: GeneralizedGeodesic, d: GeneralizedGeodesic) -> float:
    """``int d_X(c(t), d(t)) exp(-|t|) / 2 dt`` by adaptive quadrature.

    The integrand is truncated to ``[-T, T]`` with a tail bound below
    ``1e-9`` and split at the kinks of both paths.
    """
    if c.dim != d.dim:
        raise ValueError("geodesics live in different dimensions")
    if _same_path(c, d):
        return 0.0
    d0 = distance(ev0(c), ev0(d))
    T = _tail_cutoff(d0)
    cuts = sorted({-T, 0.0, T, *(k for k in c.kinks() + d.kinks() if -T < k < T)})

    # c(t) = F F^T with F = hq diag(exp(u lam / 2)); the relative eigenvalues of
    # c(t) and d(t) are squared singular values of F_c^-1 F_d, which stays
    # accurate where the Gram matrices themselves are too ill-conditioned to form
    _, c_inv, c_lam = c._spectral()
    d_hq, _, d_lam = d._spectral()
    core = c_inv @ d_hq

    def f(t):
        left = np.exp(-0.5 * c.parameter(t) * c_lam)
        right = np.exp(0.5 * d.parameter(t) * d_lam)
        sv = np.linalg.svd(left[:, None] * core * right[None, :], compute_uv=False)
        return math.sqrt(float(np.sum((2.0 * np.log(sv)) ** 2))) * 0.5 * math.exp(-abs(t))

    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-11, epsrel=1e-9, limit=200)
        total += val
    return total


def in_Y(c: GeneralizedGeodesic, W: Sublattice, t: float, **enum) -> bool:
    return in_cover_set(ev0(c), CoverSet(W, t), **enum)


# ---------------------------------------------------------------------------
# longness

def _perturb(c: GeneralizedGeodesic, rng, rho: float, jitter: tuple[float, float]
             ) -> GeneralizedGeodesic:
    if rho == 0 and jitter == (0.0, 0.0):
        return c
    u = random_unit_tangent(rng, c.anchor)
    anchor = exp_map(c.anchor, u.mat * rho) if rho else c.anchor
    a, b = c.clamp
    a = a - jitter[0] if math.isfinite(a) else a
    b = b + jitter[1] if math.isfinite(b) else b
    if c.is_constant() and (a, b) == c.clamp:
        return GeneralizedGeodesic(anchor, c.direction, c.clamp, c.offset)
    if c.is_constant():
        direction = random_unit_tangent(rng, anchor)
    else:
        moved = parallel_transport(c.anchor, anchor, c.direction) if rho else c.direction
        direction = _unit_slice(anchor, moved)
    return GeneralizedGeodesic(anchor, direction, (a, b), c.offset)


def verify_longness(c: GeneralizedGeodesic, W: Sublattice, t: float, beta: float,
                    delta: float, tau: float, seed: int = 0, samples: int = 64,
                    **enum) -> Report:
    """Check ``B_delta(Phi_[-tau, tau](c)) ⊆ Y(W, t)`` on seeded samples.

    Perturbed geodesics ``d`` are built by moving the anchor a distance
    ``rho < delta`` (direction parallel-transported) and widening finite
    clamp ends, then flowing by ``s in [-tau, tau]``; those with
    ``fs_distance(d, Phi_s(c)) < delta`` are kept.  Each kept sample must
    satisfy ``d_X(d(0), c(0)) < 4 + delta + tau`` and ``d_W(d(0)) > t``.

    Raises
    ------
    LongnessInputError
        If ``c`` is not in ``Y(W, t + beta)``.
    """
    if delta < 0 or tau < 0:
        raise LongnessInputError("delta and tau must be nonnegative")
    if not in_Y(c, W, t + beta, **enum):
        raise LongnessInputError(f"c(0) is not in X(W, t + beta) for beta = {beta!r}")
    n = c.dim
    alpha = 4.0 + delta + tau
    beta_needed = neighborhood_beta(alpha, t, n)
    report = Report("covering_at_infinity_longness")
    rng = rng_for(seed)
    sobol = qmc.Sobol(d=4, scramble=True, seed=rng_for(seed + 1))
    pts = sobol.random_base2(max(samples - 1, 1).bit_length())
    pts[0] = [0.5, 0.0, 0.0, 0.0]          # the centre d = Phi_s(c) itself
    c0 = ev0(c)
    worst_dist = math.inf
    worst_dw = math.inf
    rejected = 0
    for i, (q_s, q_rho, q_a, q_b) in enumerate(pts[:samples]):
        s = (2.0 * q_s - 1.0) * tau
        rho = q_rho * delta
        jitter = (0.5 * delta * q_a, 0.5 * delta * q_b)
        base = flow(c, s)
        d = flow(_perturb(c, rng, rho, jitter), s)
        if rho + sum(jitter) > 0 and not fs_distance(d, base) < delta:
            rejected += 1
            continue
        report.samples += 1
        x = ev0(d)
        dist = distance(x, c0)
        dw = d_W(x, W, **enum)
        worst_dist = min(worst_dist, alpha - dist)
        worst_dw = min(worst_dw, dw - t)
        if not dist < alpha:
            report.add_violation(index=i, kind="distance", s=s, distance=dist, bound=alpha)
        if not dw > t:
            report.add_violation(index=i, kind="cover", s=s, d_W=dw, t=t, margin=dw - t)
    report.stats = {
        "t": t, "beta": beta, "delta": delta, "tau": tau, "alpha": alpha,
        "beta_required": beta_needed, "beta_sufficient": bool(beta >= beta_needed),
        "rejected": rejected,
        "min_distance_margin": None if report.samples == 0 else worst_dist,
        "min_cover_margin": None if report.samples == 0 else worst_dw,
    }
    return report


def cusp_geodesic(x: float, y: float, direction=None, clamp=(-INF, INF)) -> GeneralizedGeodesic:
    """Geodesic through the plane point ``x + iy``; vertical (toward the cusp) by default."""
    p = upper_half_plane_point(x, y)
    if direction is None:
        # d/dy of the Gram at x + iy, projected onto the slice
        direction = np.array([[-1.0, -x], [-x, y * y - x * x]]) / (y * y)
    return line(p, direction, clamp)
