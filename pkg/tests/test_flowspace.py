import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grayson_lab import flowspace as fs
from grayson_lab.cover import neighborhood_beta
from grayson_lab.lattice import Sublattice
from grayson_lab.sampling import random_gl, random_point, random_symmetric, rng_for
from grayson_lab.symspace import act, det1_tolerance, distance, geodesic, normalize_det

E = math.e
E1 = Sublattice(2, ((1, 0),))
D = normalize_det(np.diag([0.25, 4.0]))


def test_constructor_checks():
    x = normalize_det(np.eye(2))
    with pytest.raises(ValueError):
        fs.GeneralizedGeodesic(x, np.diag([1.0, -1.0]), (0.5, 2.0))
    with pytest.raises(ValueError):
        fs.GeneralizedGeodesic(x, np.diag([2.0, -2.0]))
    with pytest.raises(ValueError):
        fs.GeneralizedGeodesic(x, np.eye(2) / math.sqrt(2))
    assert fs.GeneralizedGeodesic(x, np.diag([1.0, -1.0]) / math.sqrt(2)).dim == 2


def test_evaluate_examples():
    c = fs.constant(D)
    for t in (-7.0, 0.0, 3.5):
        assert np.array_equal(fs.evaluate(c, t).gram, D.gram)
    x = normalize_det(np.eye(2))
    y = normalize_det(np.diag([E ** 2, 1.0]))
    c = fs.through(x, y, (-1.0, 2.0))
    L = distance(x, y)
    for t in (0.25, 1.0, 1.5):
        assert np.allclose(fs.evaluate(c, t).gram, geodesic(x, y, t / L).gram, atol=1e-12)
    assert np.array_equal(fs.evaluate(c, 50.0).gram, fs.evaluate(c, 2.0).gram)
    assert np.array_equal(fs.evaluate(c, -50.0).gram, fs.evaluate(c, -1.0).gram)


def test_unit_speed_inside_clamp(rng):
    c = fs.line(random_point(rng, 3), random_symmetric(rng, 3), (-2.0, 3.0))
    assert distance(fs.evaluate(c, -1.5), fs.evaluate(c, 2.0)) == pytest.approx(3.5, rel=1e-10)
    assert np.array_equal(fs.evaluate(c, 3.0).gram, fs.evaluate(c, 9.0).gram)


def test_flow_examples():
    c = fs.line(normalize_det(np.eye(2)), np.diag([1.0, -1.0]), (-1.0, 1.0))
    assert fs.flow(c, 0).offset == c.offset
    k = fs.flow(fs.constant(D), 2.5)
    assert k.kinks() == [-2.5, -2.5] and np.array_equal(fs.ev0(k).gram, D.gram)
    assert fs.flow(fs.flow(c, 0.1), 0.2).offset == fs.flow(c, Fraction(0.1) + Fraction(0.2)).offset
    assert np.array_equal(fs.ev0(fs.flow(c, 0.7)).gram, fs.evaluate(c, 0.7).gram)


@given(st.integers(0, 2 ** 32), st.floats(-3, 3), st.floats(-3, 3), st.floats(-4, 4))
def test_flow_group_law(seed, sig, tau, t):
    rng = rng_for(seed)
    c = fs.line(random_point(rng, 2), random_symmetric(rng, 2),
                (-float(rng.uniform(0, 3)), float(rng.uniform(0, 3))))
    assert fs.flow(fs.flow(c, sig), tau).offset == fs.flow(c, Fraction(sig) + Fraction(tau)).offset
    e = distance(fs.evaluate(fs.flow(c, tau), t), fs.evaluate(c, Fraction(tau) + Fraction(t)))
    assert e <= 1e-9


@given(st.integers(0, 2 ** 32))
def test_ev0_equivariance(seed):
    rng = rng_for(seed)
    n = int(rng.integers(2, 4))
    c = fs.flow(fs.line(random_point(rng, n), random_symmetric(rng, n), (-2.0, 2.0)),
                float(rng.uniform(-3, 3)))
    g = random_gl(rng, n)
    target = act(g, fs.ev0(c))
    # 1e-9, or the rounding floor n * cond * eps when the image is badly conditioned
    assert distance(fs.ev0(fs.translate(g, c)), target) <= det1_tolerance(target.gram)


def test_in_Y_examples():
    c = fs.constant(D)
    assert fs.in_Y(c, E1, 2.0)
    assert not fs.in_Y(c, E1, 4.0)
    line = fs.line(normalize_det(np.eye(2)), np.diag([1.0, -1.0]))
    assert not fs.in_Y(line, E1, 1.0)


def test_fs_distance_examples(rng):
    c = fs.line(random_point(rng, 2), random_symmetric(rng, 2), (-1.0, 2.0))
    assert fs.fs_distance(c, c) == 0
    for s in np.linspace(-5, 5, 11):
        assert fs.fs_distance(fs.flow(c, s), c) <= abs(s) + 1e-8 * (1 + abs(s))
    # two constant paths: the integrand is constant, so the distance is d_X
    a, b = random_point(rng, 3), random_point(rng, 3)
    assert fs.fs_distance(fs.constant(a), fs.constant(b)) == pytest.approx(distance(a, b), rel=1e-8)
    with pytest.raises(ValueError):
        fs.fs_distance(fs.constant(a), c)


@given(st.integers(0, 2 ** 32))
def test_fs_distance_bounds_distance_at_zero(seed):
    rng = rng_for(seed)
    n = int(rng.integers(2, 4))
    c = fs.line(random_point(rng, n), random_symmetric(rng, n), (-float(rng.uniform(0, 3)), math.inf))
    d = fs.flow(fs.line(random_point(rng, n), random_symmetric(rng, n)), float(rng.uniform(-2, 2)))
    f = fs.fs_distance(c, d)
    assert distance(fs.ev0(c), fs.ev0(d)) <= f + 2
    assert f == pytest.approx(fs.fs_distance(d, c), rel=1e-8, abs=1e-10)


def test_tail_cutoff():
    for d0 in (0.0, 1.0, 40.0):
        T = fs._tail_cutoff(d0)
        assert (d0 + 2 * T + 2) * math.exp(-T) < 1e-9


def test_json_round_trip(rng):
    c = fs.flow(fs.line(random_point(rng, 3), random_symmetric(rng, 3), (-1.5, math.inf)), 0.3)
    doc = c.to_json()
    assert doc["clamp"][1] is None
    back = fs.GeneralizedGeodesic.from_json(doc)
    assert back.offset == c.offset and back.clamp == c.clamp
    assert np.array_equal(fs.ev0(back).gram, fs.ev0(c).gram)


def _long_case():
    beta = neighborhood_beta(6.0, 1.0, 2)
    return fs.cusp_geodesic(0.2, 3 * (1 + beta)), beta


def test_longness_passes_with_comparison_beta():
    c, beta = _long_case()
    r = fs.verify_longness(c, E1, 1.0, beta, 1.0, 1.0, seed=3, samples=16)
    assert r.passed and r.samples > 0
    assert r.stats["beta_sufficient"] and r.stats["min_cover_margin"] > 0
    assert r.stats["alpha"] == 6.0


def test_longness_is_deterministic():
    c, beta = _long_case()
    a = fs.verify_longness(c, E1, 1.0, beta, 1.0, 1.0, seed=5, samples=8).to_json()
    b = fs.verify_longness(c, E1, 1.0, beta, 1.0, 1.0, seed=5, samples=8).to_json()
    assert a == b


def test_longness_trivial_case():
    c = fs.constant(D)
    r = fs.verify_longness(c, E1, 1.0, 0.0, 0.0, 0.0, samples=4)
    assert r.passed and r.samples >= 1
    assert not r.stats["beta_sufficient"]


def test_longness_boundary_case_is_detected():
    c = fs.cusp_geodesic(0.1, 1.005)
    r = fs.verify_longness(c, E1, 1.0, 0.0, 1.0, 1.0, seed=1, samples=16)
    assert not r.passed
    assert min(v["margin"] for v in r.violations if v["kind"] == "cover") < 0


def test_longness_precondition():
    c = fs.constant(normalize_det(np.eye(2)))
    with pytest.raises(fs.LongnessInputError):
        fs.verify_longness(c, E1, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(fs.LongnessInputError):
        fs.verify_longness(fs.constant(D), E1, 1.0, 0.0, -1.0, 1.0)
