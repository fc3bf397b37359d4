"""Seeded verification suites, one :class:`~grayson_lab.report.Report` per property.

Each suite takes a ``seed`` and a sample count and is deterministic for a
fixed pair.  Default sample counts are the desk-scale sizes of the
acceptance run.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import flowspace as fs
from . import intlinalg
from .cover import (CoverSet, cusp_height_probe, in_cover_set, neighborhood_beta,
                    stabilizer_decompose, verify_chain_condition)
from .exterior import central_difference, frame_gram, grad_vol_squared, s_xi_norm
from .lattice import (PolygonError, Sublattice, c_inf, c_sup, c_tilde, canonical_polygon,
                      contains, d_W, quotient_form, quotient_sublattice,
                      split_basis, sublattices_below, transform, vol_W)
from .oracles import brute_force_slopes, geodesic_length_quadrature
from .report import Report
from .sampling import (point_near, random_chain, random_frame, random_gl, random_integer_gram,
                       random_point, random_spd, random_sublattice, random_symmetric,
                       rng_for)
from .symspace import (IntegerAutomorphism, NormalizedPoint, act, det1_tolerance, distance,
                       metric_inner,
                       metric_norm, normalize_det, upper_half_plane_point)

SLACK = 1e-9


def _vol_sq(frame):
    def f(s):
        return float(np.linalg.det(frame_gram(s, frame)))
    return f


def gradient_suite(seed: int = 0, samples: int = 100, directions: int = 20) -> Report:
    """Closed-form gradient of ``vol^2`` against central finite differences."""
    rng = rng_for(seed)
    report = Report("volume_gradient", samples=samples)
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, n + 1))
        s = random_spd(rng, n)
        frame = random_frame(rng, n, m)
        grad = grad_vol_squared(s, frame)
        gnorm = metric_norm(s, grad)
        for k in range(directions):
            u = random_symmetric(rng, n)
            u /= metric_norm(s, u)
            fd = central_difference(_vol_sq(frame), s.gram, u)
            exact = metric_inner(s, grad, u)
            err = abs(fd - exact) / gnorm
            worst = max(worst, err)
            if not err <= 1e-6:
                report.add_violation(index=i, direction=k, n=n, m=m, finite_difference=fd,
                                     closed_form=exact, relative_error=err)
    report.stats = {"max_relative_error": worst, "directions": directions}
    return report


def norm_suite(seed: int = 0, samples: int = 100) -> Report:
    """``||s_xi|| = sqrt(m)`` on the instances of :func:`gradient_suite`."""
    rng = rng_for(seed)
    report = Report("log_volume_gradient_norm", samples=samples)
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, n + 1))
        s = random_spd(rng, n)
        frame = random_frame(rng, n, m)
        for _ in range(20):           # keep the stream aligned with gradient_suite
            random_symmetric(rng, n)
        err = abs(s_xi_norm(s, frame) - math.sqrt(m))
        worst = max(worst, err)
        if not err <= 1e-9:
            report.add_violation(index=i, n=n, m=m, error=err)
    report.stats = {"max_error": worst}
    return report


def metric_invariance_suite(seed: int = 0, samples: int = 50) -> Report:
    rng = rng_for(seed)
    report = Report("metric_invariance", samples=samples)
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(2, 6))
        s0, s1 = random_spd(rng, n), random_spd(rng, n)
        g = random_gl(rng, n)
        d = distance(s0, s1)
        dg = distance(act(g, s0), act(g, s1))
        err = abs(d - dg)
        worst = max(worst, err / (1 + d))
        if not err <= 1e-9 * (1 + d):
            report.add_violation(index=i, n=n, g=g.rows(), distance=d, translated=dg)
    report.stats = {"max_scaled_error": worst}
    return report


def distance_quadrature_suite(seed: int = 0, samples: int = 20) -> Report:
    rng = rng_for(seed)
    report = Report("distance_closed_form", samples=samples)
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(2, 5))
        s0, s1 = random_spd(rng, n), random_spd(rng, n)
        d = distance(s0, s1)
        q = geodesic_length_quadrature(s0, s1)
        err = abs(d - q) / max(1.0, d)
        worst = max(worst, err)
        if not err <= 1e-6:
            report.add_violation(index=i, closed_form=d, quadrature=q)
    report.stats = {"max_relative_error": worst}
    return report


def lipschitz_suite(seed: int = 0, samples: int = 200) -> Report:
    """``|c~(x) - c~(y)| <= sqrt(n) d(x, y)`` for chains ``W0 ⊊ W1``."""
    rng = rng_for(seed)
    report = Report("slope_lipschitz_bound", samples=samples)
    tightest = math.inf
    for i in range(samples):
        n = int(rng.integers(2, 5))
        x, y = random_point(rng, n), random_point(rng, n)
        W0, W1 = random_chain(rng, n)
        lhs = abs(c_tilde(x, W0, W1) - c_tilde(y, W0, W1))
        rhs = math.sqrt(n) * distance(x, y)
        tightest = min(tightest, rhs - lhs)
        if not lhs <= rhs + SLACK:
            report.add_violation(index=i, n=n, lhs=lhs, rhs=rhs, W0=W0.to_json(), W1=W1.to_json())
    report.stats = {"min_margin": tightest}
    return report


def _enumerated_proper(x, bound: float):
    n = x.gram.shape[0]
    for m in range(1, n):
        for W, _ in sublattices_below(x, m, bound):
            yield W


def sandwich_suite(seed: int = 0, samples: int = 200, vol_bound: float = 1.6) -> Report:
    """``d_W(y) / d_W(x)`` lies in ``[e^-2 sqrt(n) a, e^2 sqrt(n) a]`` with ``a = d(x, y)``.

    All proper ``W`` with ``vol_W(x) <= vol_bound`` (certified enumeration) are tested.
    """
    rng = rng_for(seed)
    report = Report("d_W_sandwich", samples=samples)
    checked = 0
    tightest = math.inf
    for i in range(samples):
        n = int(rng.integers(2, 4))
        x = random_point(rng, n)
        y = point_near(rng, x, float(rng.uniform(0.01, 1.0)))
        alpha = distance(x, y)
        band = 2 * math.sqrt(n) * alpha
        for W in _enumerated_proper(x, vol_bound):
            checked += 1
            lx, ly = math.log(d_W(x, W)), math.log(d_W(y, W))
            tightest = min(tightest, band - abs(lx - ly))
            if not abs(lx - ly) <= band + SLACK:
                report.add_violation(index=i, W=W.to_json(), log_ratio=ly - lx, band=band)
    report.stats = {"sublattices_checked": checked, "min_log_margin": tightest}
    return report


def _unstable_point(W: Sublattice, target: float) -> NormalizedPoint:
    """Point with ``d_W`` near ``target``: a split form, moved to ``W`` by a basis change."""
    n, m = W.ambient_dim, W.rank
    lam = target ** (-2.0)
    x0 = normalize_det(np.diag([lam] * m + [1.0] * (n - m)))
    P = split_basis(W)
    return act(P, x0)


def neighborhood_suite(seed: int = 0, samples: int = 100, t: float = 1.0,
                       alpha: float | None = None) -> Report:
    """Points within ``alpha`` of ``X(W, t + beta)`` stay in ``X(W, t)``.

    ``alpha`` is drawn from ``[0.02, 0.4]`` per sample unless given.
    """
    rng = rng_for(seed)
    report = Report("comparison_neighborhood", samples=samples)
    tightest = math.inf
    for i in range(samples):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(1, n))
        W = random_sublattice(rng, n, m)
        a = float(rng.uniform(0.02, 0.4)) if alpha is None else alpha
        beta = neighborhood_beta(a, t, n)
        x = _unstable_point(W, (t + beta) * float(rng.uniform(1.0001, 1.5)))
        dx = d_W(x, W)
        if not dx > t + beta:
            report.add_violation(index=i, kind="construction", d_W=dx, needed=t + beta)
            continue
        y = point_near(rng, x, a * float(rng.uniform(0.0, 0.999)))
        dy = d_W(y, W)
        tightest = min(tightest, dy - t)
        if not dy > t:
            report.add_violation(index=i, W=W.to_json(), alpha=a, beta=beta, d_W_x=dx, d_W_y=dy)
    report.stats = {"t": t, "min_margin": tightest}
    return report


def slope_identity_suite(seed: int = 0, samples: int = 100) -> Report:
    """Polygon-based ``c_inf``/``c_sup`` against the literal inf/sup over chains."""
    rng = rng_for(seed)
    report = Report("grayson_slope_identity", samples=samples)
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(1, n))
        s = random_integer_gram(rng, n)
        W = random_sublattice(rng, n, m)
        ci, cs = c_inf(s, W), c_sup(s, W)
        bi, bs = brute_force_slopes(s, W)
        err = max(abs(ci - bi) / (1 + abs(bi)), abs(cs - bs) / (1 + abs(bs)))
        worst = max(worst, err)
        if not err <= 1e-9:
            report.add_violation(index=i, gram=s.gram.tolist(), W=W.to_json(),
                                 polygon=[ci, cs], brute_force=[bi, bs])
    report.stats = {"max_error": worst}
    return report


def chain_suite(seed: int = 0, samples: int = 1000, t: float = 1.0, n: int = 3) -> Report:
    rng = rng_for(seed)
    points = [random_point(rng, n, spread=1.5) for _ in range(samples)]
    return verify_chain_condition(points, t)


def polygon_suite(seed: int = 0, samples: int = 20) -> Report:
    """Structure of the canonical polygon and its equivariance under ``GL_n(Z)``."""
    rng = rng_for(seed)
    report = Report("canonical_polygon_structure", samples=samples)
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(2, 5))
        x = random_point(rng, n, spread=1.2)
        g = random_gl(rng, n)
        try:
            P = canonical_polygon(x)
            Q = canonical_polygon(act(g, x))
        except PolygonError as exc:
            report.add_violation(index=i, kind="structure", error=str(exc))
            continue
        if any(b <= a for a, b in zip(P.slopes, P.slopes[1:])):
            report.add_violation(index=i, kind="slopes", slopes=P.slopes)
        if P.hull_vertices != Q.hull_vertices:
            report.add_violation(index=i, kind="vertices", before=P.hull_vertices,
                                 after=Q.hull_vertices)
            continue
        err = max(abs(a[1] - b[1]) for a, b in zip(P.points, Q.points)) / (
            1 + max(abs(a[1]) for a in P.points))
        worst = max(worst, err)
        # 1e-9, or the rounding floor of the transformed Gram if that is larger
        if not err <= det1_tolerance(act(g, x).gram):
            report.add_violation(index=i, kind="points", error=err)
        moved = [transform(g, W) for W in P.filtration]
        if moved != Q.filtration:
            report.add_violation(index=i, kind="filtration", g=g.rows(),
                                 expected=[W.to_json() for W in moved],
                                 got=[W.to_json() for W in Q.filtration])
        if [W.rank for W in P.filtration] != P.hull_vertices:
            report.add_violation(index=i, kind="filtration ranks")
    report.stats = {"max_relative_error": worst}
    return report


def multiplicativity_suite(seed: int = 0, samples: int = 20, vol_bound: float = 1.5) -> Report:
    """``vol_W2 = vol_W * vol_(W2/W)`` over all enumerated chains ``W ⊂ W2``."""
    rng = rng_for(seed)
    report = Report("volume_multiplicativity", samples=samples)
    chains = 0
    worst = 0.0
    for i in range(samples):
        n = int(rng.integers(2, 5))
        x = random_point(rng, n)
        Ws = list(_enumerated_proper(x, vol_bound)) + [Sublattice.full(n)]
        for W in Ws:
            if W.rank == n:
                continue
            Q = quotient_form(x, W)
            for W2 in Ws:
                if W2.rank <= W.rank or not contains(W2, W):
                    continue
                chains += 1
                lhs = vol_W(x, W2)
                rhs = vol_W(x, W) * vol_W(Q.form, quotient_sublattice(W, W2))
                err = abs(lhs - rhs) / lhs
                worst = max(worst, err)
                if not err <= 1e-9:
                    report.add_violation(index=i, W=W.to_json(), W2=W2.to_json(), error=err)
    report.stats = {"chains": chains, "max_relative_error": worst}
    return report


def descent_suite(seed: int = 0, samples: int = 50) -> Report:
    """Scale invariance and ``GL_n(Z)``-equivariance of ``d_W``."""
    rng = rng_for(seed)
    report = Report("d_W_descent_equivariance", samples=samples)
    worst_scale = worst_equi = 0.0
    for i in range(samples):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, n))
        s = random_spd(rng, n)
        W = random_sublattice(rng, n, m)
        g = random_gl(rng, n)
        base = d_W(s, W)
        k = int(rng.integers(-8, 9))
        if d_W(s.gram * 2.0 ** k, W) != base:
            report.add_violation(index=i, kind="power-of-two scaling", k=k)
        r = float(np.exp(rng.normal() * 3))
        e = abs(d_W(s.gram * r, W) - base) / base
        worst_scale = max(worst_scale, e)
        if not e <= 1e-12:
            report.add_violation(index=i, kind="scaling", r=r, error=e)
        e = abs(d_W(act(g, s), transform(g, W)) - base) / base
        worst_equi = max(worst_equi, e)
        if not e <= 1e-9:
            report.add_violation(index=i, kind="equivariance", g=g.rows(), error=e)
    report.stats = {"max_scaling_error": worst_scale, "max_equivariance_error": worst_equi}
    return report


def _random_geodesic(rng, n: int) -> fs.GeneralizedGeodesic:
    x = random_point(rng, n)
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return fs.constant(x)
    lo = -math.inf if kind == 1 else -float(rng.uniform(0, 3))
    hi = math.inf if kind == 2 else float(rng.uniform(0, 3))
    c = fs.line(x, random_symmetric(rng, n), (lo, hi))
    return fs.flow(c, float(rng.uniform(-2, 2)))


def flow_suite(seed: int = 0, samples: int = 100) -> Report:
    """Group law, ``ev0`` equivariance and the two inequalities used for ``d(0)``."""
    rng = rng_for(seed)
    report = Report("flow_space", samples=samples)
    worst = {"eval": 0.0, "equivariance": 0.0, "d0_margin": math.inf, "shift_excess": -math.inf}
    widened = 0
    for i in range(samples):
        n = int(rng.integers(2, 4))
        c, d = _random_geodesic(rng, n), _random_geodesic(rng, n)
        sig, tau = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
        twice = fs.flow(fs.flow(c, sig), tau)
        once = fs.flow(c, Fraction(sig) + Fraction(tau))
        if twice.offset != once.offset or fs.flow(c, 0).offset != c.offset:
            report.add_violation(index=i, kind="group law")
        t = float(rng.uniform(-4, 4))
        e = distance(fs.evaluate(fs.flow(c, tau), t), fs.evaluate(c, Fraction(tau) + Fraction(t)))
        worst["eval"] = max(worst["eval"], e)
        if not e <= 1e-9:
            report.add_violation(index=i, kind="evaluate-flow", error=e)
        g = random_gl(rng, n)
        target = act(g, fs.ev0(c))
        e = distance(fs.ev0(fs.translate(g, c)), target)
        worst["equivariance"] = max(worst["equivariance"], e)
        # 1e-9, widened to the rounding floor n * cond * eps of badly conditioned images
        tol = det1_tolerance(target.gram)
        widened += tol > 1e-9
        if not e <= tol:
            report.add_violation(index=i, kind="ev0 equivariance", error=e)
        f = fs.fs_distance(c, d)
        margin = f + 2 - distance(fs.ev0(c), fs.ev0(d))
        worst["d0_margin"] = min(worst["d0_margin"], margin)
        if not margin >= 0:
            report.add_violation(index=i, kind="d(0) bound", fs_distance=f, margin=margin)
        s = float(rng.uniform(-5, 5))
        shifted = fs.fs_distance(fs.flow(c, s), c)
        excess = shifted - abs(s)
        worst["shift_excess"] = max(worst["shift_excess"], excess)
        if not excess <= 1e-8 * (1 + abs(s)):
            report.add_violation(index=i, kind="flow shift", s=s, fs_distance=shifted)
    report.stats = {"max_eval_error": worst["eval"], "max_equivariance_error": worst["equivariance"],
                    "min_d0_margin": worst["d0_margin"], "max_shift_excess": worst["shift_excess"],
                    "equivariance_tolerance_widened": widened}
    return report


def longness_suite(seed: int = 0, samples: int = 50, per_geodesic: int = 8, t: float = 1.0,
                   delta: float = 1.0, tau: float = 1.0, boundary: int = 5) -> Report:
    """Longness on cusp geodesics with the comparison ``beta``; ``beta = 0`` must fail near the boundary."""
    rng = rng_for(seed)
    report = Report("covering_at_infinity_longness", samples=0)
    W = Sublattice(2, ((1, 0),))
    beta = neighborhood_beta(4 + delta + tau, t, 2)
    margins = []
    for i in range(samples):
        y = (t + beta) * float(rng.uniform(1.5, 10.0))
        x = float(rng.uniform(-0.5, 0.5))
        direction = None if i % 2 == 0 else random_symmetric(rng, 2)
        c = fs.cusp_geodesic(x, y, direction)
        r = fs.verify_longness(c, W, t, beta, delta, tau, seed=seed * 1000 + i, samples=per_geodesic)
        report.samples += r.samples
        margins.append(r.stats["min_cover_margin"])
        for v in r.violations:
            report.add_violation(geodesic=i, **v)
    detected = 0
    for j in range(boundary):
        y = t * (1 + float(rng.uniform(1e-3, 1e-2)))
        c = fs.cusp_geodesic(float(rng.uniform(-0.5, 0.5)), y)
        r = fs.verify_longness(c, W, t, 0.0, delta, tau, seed=seed * 1000 + samples + j,
                               samples=per_geodesic)
        if r.violations and min(v.get("margin", 0) for v in r.violations) < 0:
            detected += 1
        else:
            report.add_violation(boundary_case=j, kind="undetected", stats=r.stats)
    report.stats = {"t": t, "beta": beta, "delta": delta, "tau": tau, "geodesics": samples,
                    "min_cover_margin": min(margins, default=None),
                    "boundary_cases": boundary, "boundary_detected": detected}
    return report


def cusp_suite(seed: int = 0, samples: int = 200, ts=(1.0, 2.0, 4.0)) -> list[Report]:
    rng = rng_for(seed)
    out = []
    for t in ts:
        pts = [upper_half_plane_point(float(rng.uniform(-3, 3)), float(np.exp(rng.uniform(-3, 2))))
               for _ in range(samples)]
        out.append(cusp_height_probe(pts, t))
    return out


def cover_equivariance_suite(seed: int = 0, samples: int = 50, t: float = 1.0) -> Report:
    """``X(gW, t) = g X(W, t)`` and the block law of stabilizers."""
    rng = rng_for(seed)
    report = Report("cover_equivariance", samples=samples)
    for i in range(samples):
        n = int(rng.integers(2, 4))
        m = int(rng.integers(1, n))
        x = random_point(rng, n, spread=1.5)
        W = random_sublattice(rng, n, m)
        g = random_gl(rng, n)
        C, gC = CoverSet(W, t), CoverSet(transform(g, W), t)
        if in_cover_set(x, C) != in_cover_set(act(g, x), gC):
            report.add_violation(index=i, kind="cover equivariance", W=W.to_json(), g=g.rows())
        # stabilizers of W: conjugates of block upper-triangular matrices
        P = split_basis(W)
        h1, h2 = _stabilizer(rng, P, m), _stabilizer(rng, P, m)
        d1, d2, d12 = (stabilizer_decompose(h, W) for h in (h1, h2, h1 @ h2))
        mul = intlinalg.matmul
        if mul(d1.block(), d2.block()) != d12.block():
            report.add_violation(index=i, kind="stabilizer composition")
    return report


def _stabilizer(rng, P, m) -> IntegerAutomorphism:
    n = len(P)
    A = random_gl(rng, m).rows() if m else []
    D = random_gl(rng, n - m).rows()
    block = [[0] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            block[i][j] = A[i][j]
        for j in range(m, n):
            block[i][j] = int(rng.integers(-3, 4))
    for i in range(m, n):
        for j in range(m, n):
            block[i][j] = D[i - m][j - m]
    return IntegerAutomorphism(intlinalg.matmul(intlinalg.matmul(P, block), intlinalg.inverse(P)))


SUITES = {
    "grad-check": (gradient_suite, norm_suite),
    "geometry": (metric_invariance_suite, distance_quadrature_suite, lipschitz_suite),
    "cover-verify": (sandwich_suite, neighborhood_suite, slope_identity_suite, chain_suite,
                     polygon_suite, multiplicativity_suite, descent_suite,
                     cover_equivariance_suite),
    "flow-verify": (flow_suite, longness_suite),
}
