import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grayson_lab.sampling import random_gl, random_spd, rng_for
from grayson_lab.symspace import (InnerProduct, IntegerAutomorphism, NormalizedPoint,
                                  NotPositiveDefinite, SymTangent, act, distance, geodesic,
                                  is_det_one, log_map, exp_map, metric_inner, normalize_det,
                                  metric_norm, parallel_transport, to_upper_half_plane,
                                  upper_half_plane_point)
from grayson_lab.oracles import geodesic_length_quadrature

E = math.e


def test_metric_inner_examples():
    I2 = np.eye(2)
    assert metric_inner(I2, I2, I2) == pytest.approx(2)
    assert metric_inner(I2, np.diag([1, -1]), I2) == pytest.approx(0)
    # direct evaluation: s^-1 u = diag(1, 0), so the trace of its square is 1
    assert metric_inner(np.diag([2, 1]), np.diag([2, 0]), np.diag([2, 0])) == pytest.approx(1)


def test_metric_inner_errors():
    with pytest.raises(ValueError):
        metric_inner(np.eye(2), np.eye(3), np.eye(3))
    with pytest.raises(NotPositiveDefinite):
        metric_inner(np.diag([1, -1]), np.eye(2), np.eye(2))


def test_distance_examples():
    assert distance(np.eye(3), np.eye(3)) == 0
    assert distance(np.eye(2), np.diag([E ** 2, 1])) == pytest.approx(2, abs=1e-14)
    assert distance(np.eye(2), np.diag([E, 1 / E])) == pytest.approx(math.sqrt(2), abs=1e-14)


def test_distance_matches_quadrature_on_examples():
    assert geodesic_length_quadrature(np.eye(2), np.diag([E ** 2, 1])) == pytest.approx(2, rel=1e-8)
    assert geodesic_length_quadrature(np.eye(2), np.diag([E, 1 / E])) == pytest.approx(
        math.sqrt(2), rel=1e-8)


def test_geodesic_examples():
    s = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert np.allclose(geodesic(s, np.eye(2), 0).gram, s)
    assert np.allclose(geodesic(np.eye(2), np.diag([E ** 2, 1]), 0.5).gram, np.diag([E, 1]))
    for t in (0.0, 0.3, 2.5):
        assert np.allclose(geodesic(s, s, t).gram, s)


def test_act_examples():
    swap = IntegerAutomorphism([[0, 1], [1, 0]])
    assert np.allclose(act(swap, np.diag([2.0, 5.0])).gram, np.diag([5.0, 2.0]))
    g = IntegerAutomorphism([[1, 1], [0, 1]])
    assert np.allclose(act(g, np.eye(2)).gram, [[1, -1], [-1, 2]])
    assert np.allclose(act(IntegerAutomorphism.identity(2), np.diag([2.0, 5.0])).gram,
                       np.diag([2.0, 5.0]))
    with pytest.raises(ValueError):
        IntegerAutomorphism([[2, 0], [0, 1]])


def test_normalize_det_examples():
    assert np.allclose(normalize_det(np.diag([4.0, 1.0])).gram, np.diag([2, 0.5]))
    assert np.allclose(normalize_det(5 * np.eye(3)).gram, np.eye(3))
    y = normalize_det(np.array([[3.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(normalize_det(y).gram, y.gram, rtol=1e-15, atol=0)


def test_type_invariants():
    with pytest.raises(ValueError):
        InnerProduct([[1, 2], [0, 1]])
    with pytest.raises(NotPositiveDefinite):
        InnerProduct([[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        InnerProduct([[1, np.nan], [np.nan, 1]])
    with pytest.raises(ValueError):
        NormalizedPoint(np.diag([2.0, 1.0]))
    with pytest.raises(ValueError):
        SymTangent([[0, 1], [0, 0]])
    s = InnerProduct(np.eye(2))
    with pytest.raises(ValueError):
        s.gram[0, 0] = 3


def test_json_round_trip():
    s = InnerProduct([[2.0, 0.5], [0.5, 1.0]])
    assert np.array_equal(InnerProduct.from_json(s.to_json()).gram, s.gram)
    assert s.to_json()["dim"] == 2


seeds = st.integers(0, 2 ** 32)


@given(seeds)
def test_isometry_under_integer_action(seed):
    rng = rng_for(seed)
    n = int(rng.integers(2, 5))
    s0, s1 = random_spd(rng, n), random_spd(rng, n)
    g = random_gl(rng, n)
    d = distance(s0, s1)
    assert abs(distance(act(g, s0), act(g, s1)) - d) <= 1e-9 * (1 + d)


@given(seeds, st.floats(0, 1))
def test_geodesic_consistency(seed, t):
    rng = rng_for(seed)
    n = int(rng.integers(2, 5))
    s0, s1 = normalize_det(random_spd(rng, n)), normalize_det(random_spd(rng, n))
    mid = geodesic(s0, s1, t)
    assert abs(distance(s0, mid) - t * distance(s0, s1)) <= 1e-8
    assert is_det_one(mid)


@given(seeds)
def test_action_commutes_with_normalization(seed):
    rng = rng_for(seed)
    n = int(rng.integers(2, 5))
    s = random_spd(rng, n)
    g = random_gl(rng, n)
    a = normalize_det(act(g, s)).gram
    b = act(g, normalize_det(s)).gram
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(a)) * np.linalg.cond(a)


@given(seeds, st.integers(-20, 20))
def test_normalize_det_bitwise_under_powers_of_two(seed, k):
    s = random_spd(rng_for(seed), 3)
    assert np.array_equal(normalize_det(s.gram * 2.0 ** k).gram, normalize_det(s).gram)


@given(seeds)
def test_exp_log_and_transport(seed):
    rng = rng_for(seed)
    s0, s1 = random_spd(rng, 3), random_spd(rng, 3)
    u = log_map(s0, s1)
    assert np.allclose(exp_map(s0, u).gram, s1.gram, rtol=1e-9, atol=1e-9)
    assert metric_norm(s0, u) == pytest.approx(distance(s0, s1), rel=1e-9)
    a = rng.normal(size=(3, 3))
    v = SymTangent(a + a.T)
    pv = parallel_transport(s0, s1, v)
    assert metric_norm(s1, pv) == pytest.approx(metric_norm(s0, v), rel=1e-9)


def test_metric_positive_definite(rng):
    for _ in range(20):
        s = random_spd(rng, 4)
        u = rng.normal(size=(4, 4))
        assert metric_inner(s, u + u.T, u + u.T) > 0


def test_upper_half_plane_round_trip():
    tau = to_upper_half_plane(upper_half_plane_point(0.3, 1.7))
    assert tau == pytest.approx(complex(0.3, 1.7))
