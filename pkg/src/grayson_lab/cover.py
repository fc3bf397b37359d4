"""Cover sets ``X(W, t) = {x : d_W(x) > t}`` and their checkable properties."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import intlinalg
from .enumeration import DEFAULT_MAX_NODES
from .lattice import (Sublattice, contains, d_W, instability, split_basis,
                      sublattices_below, transform)
from .report import Report
from .symspace import (IntegerAutomorphism, NormalizedPoint, _as_gram, act,
                       normalize_det, to_upper_half_plane, upper_half_plane_point)


class NotStabilizing(ValueError):
    pass


class ChainViolation(AssertionError):
    pass


@dataclass(frozen=True)
class CoverSet:
    W: Sublattice
    t: float

    def __post_init__(self):
        if not self.t >= 1:
            raise ValueError("t must be at least 1")
        if not self.W.is_proper():
            raise ValueError("W must be neither 0 nor the whole lattice")


def in_cover_set(x, C: CoverSet, **enum) -> bool:
    return d_W(x, C.W, **enum) > C.t


def candidate_volume_bound(x, m: int, t: float) -> float:
    """Volume above which a rank-``m`` sublattice cannot have ``d_W(x) > t``.

    Comparing with the slopes to ``0`` and to ``Z^n`` gives
    ``ln vol_W < (m/n) ln vol(Z^n) - ln(t) m (n-m) / n``.
    """
    gram = _as_gram(x)
    n = gram.shape[0]
    log_total = 0.5 * float(np.linalg.slogdet(gram)[1])
    return math.exp(m / n * log_total - math.log(t) * m * (n - m) / n)


def active_sets(x, t: float, check: bool = True, max_nodes: int = DEFAULT_MAX_NODES
                ) -> list[Sublattice]:
    """All ``W`` (``0 < rk W < n``) with ``d_W(x) > t``, sorted by rank.

    Candidates come from a certified enumeration below
    :func:`candidate_volume_bound`.  With ``check`` the result is asserted to
    be a chain under inclusion.
    """
    if not t >= 1:
        raise ValueError("t must be at least 1")
    gram = _as_gram(x)
    n = gram.shape[0]
    out = []
    for m in range(1, n):
        bound = candidate_volume_bound(gram, m, t)
        for W, _ in sublattices_below(gram, m, bound, max_nodes=max_nodes):
            if d_W(gram, W, max_nodes=max_nodes) > t:
                out.append(W)
    out.sort(key=lambda W: (W.rank, W.sort_key()))
    if check:
        bad = first_incomparable(out)
        if bad is not None:
            raise ChainViolation(f"active sets {bad[0]} and {bad[1]} are not nested")
    return out


def first_incomparable(Ws: list[Sublattice]):
    for i, a in enumerate(Ws):
        for b in Ws[i + 1:]:
            if not (contains(a, b) or contains(b, a)):
                return a, b
    return None


def neighborhood_beta(alpha: float, t: float, n: int) -> float:
    """``(exp(2 sqrt(n) alpha) - 1) t``, inflated by ``1 + 1e-6`` to make it strict."""
    if alpha < 0 or t <= 0 or n < 1:
        raise ValueError("alpha must be >= 0, t > 0 and n >= 1")
    return math.expm1(2.0 * math.sqrt(n) * alpha) * t * (1.0 + 1e-6)


def verify_chain_condition(samples, t: float, max_nodes: int = DEFAULT_MAX_NODES) -> Report:
    report = Report("grayson_chain_condition", samples=len(samples))
    counts = []
    for i, x in enumerate(samples):
        Ws = active_sets(x, t, check=False, max_nodes=max_nodes)
        counts.append(len(Ws))
        bad = first_incomparable(Ws)
        n = _as_gram(x).shape[0]
        if bad is not None:
            report.add_violation(index=i, point=_as_gram(x).tolist(),
                                 pair=[bad[0].to_json(), bad[1].to_json()])
        elif len(Ws) > n - 1:
            report.add_violation(index=i, point=_as_gram(x).tolist(), active=len(Ws))
    report.stats = {
        "t": t,
        "max_active": max(counts, default=0),
        "points_with_activation": sum(1 for c in counts if c),
        "nerve_dimension": max(counts, default=0) - 1,
    }
    return report


# ---------------------------------------------------------------------------
# stabilizers

@dataclass(frozen=True)
class StabilizerDecomposition:
    phi_W: tuple
    phi_V: tuple
    phi_VW: tuple

    def block(self) -> list[list[int]]:
        m, k = len(self.phi_W), len(self.phi_V)
        top = [list(self.phi_W[i]) + list(self.phi_VW[i]) for i in range(m)]
        bottom = [[0] * m + list(self.phi_V[i]) for i in range(k)]
        return top + bottom

    def assemble(self, W: Sublattice) -> IntegerAutomorphism:
        """Rebuild ``g`` in standard coordinates from the blocks."""
        P = split_basis(W)
        return IntegerAutomorphism(
            intlinalg.matmul(intlinalg.matmul(P, self.block()), intlinalg.inverse(P)))

    def to_json(self) -> dict:
        return {"phi_W": [list(r) for r in self.phi_W],
                "phi_V": [list(r) for r in self.phi_V],
                "phi_VW": [list(r) for r in self.phi_VW]}


def stabilizer_decompose(g: IntegerAutomorphism, W: Sublattice) -> StabilizerDecomposition:
    """Blocks of ``g`` in the splitting ``Z^n = W + V`` (``V`` the canonical complement)."""
    if not isinstance(g, IntegerAutomorphism):
        g = IntegerAutomorphism(g)
    if transform(g, W) != W:
        raise NotStabilizing("g does not map W onto itself")
    P = split_basis(W)
    local = intlinalg.matmul(intlinalg.matmul(intlinalg.inverse(P), g.rows()), P)
    m = W.rank
    if any(local[i][j] for i in range(m, len(P)) for j in range(m)):
        raise NotStabilizing("lower-left block is nonzero")
    dec = StabilizerDecomposition(
        phi_W=tuple(tuple(r[:m]) for r in local[:m]),
        phi_V=tuple(tuple(r[m:]) for r in local[m:]),
        phi_VW=tuple(tuple(r[m:]) for r in local[:m]),
    )
    if dec.assemble(W) != g:
        raise AssertionError("block reassembly does not reproduce g")
    return dec


# ---------------------------------------------------------------------------
# cusp probe in the plane

def reduce_to_fundamental_domain(x, max_steps: int = 10_000
                                 ) -> tuple[IntegerAutomorphism, NormalizedPoint, complex]:
    """Move a plane point into ``|Re tau| <= 1/2, |tau| >= 1``.

    Returns ``(g, act(g, x), tau)``.  Translations ``tau -> tau - k`` and the
    inversion ``tau -> -1/tau`` are applied as basis changes of the lattice
    with basis ``1, tau``.
    """
    gram = normalize_det(x).gram
    if gram.shape != (2, 2):
        raise ValueError("the cusp probe is only defined for n = 2")
    M = [[1, 0], [0, 1]]                 # columns: current basis in old coordinates
    tau = to_upper_half_plane(gram)
    for _ in range(max_steps):
        k = math.floor(tau.real + 0.5)
        if k:
            M = intlinalg.matmul(M, [[1, -k], [0, 1]])
            tau -= k
        if abs(tau) < 1 - 1e-15:
            M = intlinalg.matmul(M, [[0, -1], [1, 0]])
            tau = -1 / tau
        else:
            break
    g = IntegerAutomorphism(intlinalg.inverse(M))
    y = act(g, NormalizedPoint(gram))
    return g, normalize_det(y), to_upper_half_plane(y)


def cusp_height_probe(samples, t: float, max_nodes: int = DEFAULT_MAX_NODES) -> Report:
    """Reduce complement points to the fundamental domain and bound their height by ``t``."""
    report = Report("grayson_cusp_height")
    e1 = Sublattice(2, ((1, 0),))
    heights = []
    excluded = 0
    for i, x in enumerate(samples):
        if _as_gram(x).shape != (2, 2):
            raise ValueError("the cusp probe is only defined for n = 2")
        if active_sets(x, t, max_nodes=max_nodes):
            excluded += 1
            continue
        report.samples += 1
        _, y, tau = reduce_to_fundamental_domain(x)
        h = d_W(y, e1, max_nodes=max_nodes)
        heights.append(h)
        if not h <= t + 1e-9:
            report.add_violation(index=i, height=h, tau=[tau.real, tau.imag])
        if abs(h - tau.imag) > 1e-9 * max(1.0, tau.imag):
            report.add_violation(index=i, height=h, imag_tau=tau.imag, kind="height identity")
    report.stats = {"t": t, "excluded": excluded, "max_height": max(heights, default=None)}
    return report


def plane_point(tau: complex) -> NormalizedPoint:
    return upper_half_plane_point(tau.real, tau.imag)


def instability_report(x, W: Sublattice, **enum) -> dict:
    return instability(x, W, **enum).to_json()
