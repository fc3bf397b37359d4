import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grayson_lab.exterior import (DecomposableFrame, DependentFrame, MultiVector,
                                  carried_subspace_dim, central_difference, compound_gram,
                                  frame_gram, grad_log_vol_squared, grad_vol_squared,
                                  gram_volume, is_decomposable, pairing, s_xi, s_xi_norm,
                                  subspace_membership, wedge_coords, wedge_vector)
from grayson_lab.sampling import random_frame, random_spd, random_symmetric, rng_for
from grayson_lab.symspace import metric_inner, metric_norm

e1, e2, e3 = np.eye(3)


def frame(*vs):
    return DecomposableFrame.of(*vs)


def test_gram_volume_examples():
    assert gram_volume(np.eye(2), np.zeros((2, 0))) == 1
    assert gram_volume(np.eye(2), frame([1, 0])) == pytest.approx(1)
    assert gram_volume(np.eye(2), frame([1, 0], [1, 1])) == pytest.approx(1)
    assert gram_volume(np.diag([4.0, 9.0]), frame([1, 0], [0, 1])) == pytest.approx(6)


def test_gram_volume_matches_wedge_coordinates():
    # at the identity, the volume is the Euclidean length of the Plucker vector
    f = frame([1, 2, 0], [0, 1, 3])
    assert gram_volume(np.eye(3), f) == pytest.approx(np.linalg.norm(wedge_coords(f).coords))


def test_wedge_coords_examples():
    assert np.allclose(wedge_coords(frame(e1, e2)).coords, [1, 0, 0])
    assert np.allclose(wedge_coords(frame([1, 1], [0, 1])).coords, [1])
    with pytest.raises(DependentFrame):
        frame([1, 2], [1, 2])


def test_subspace_membership_examples():
    assert subspace_membership([1, 0], wedge_coords(frame([1, 0], [0, 1])))
    assert not subspace_membership(e3, wedge_coords(frame(e1, e2)))
    xi = wedge_coords(frame([1, 1], [0, 1]))
    assert subspace_membership([1, 1], xi)
    with pytest.raises(ValueError):
        subspace_membership(e1, MultiVector(3, 2, [0, 0, 0]))


def test_decomposability_by_carried_dimension():
    assert is_decomposable(wedge_coords(frame(e1, e2)))
    # e1^e2 + e3^e4 in R^4 is the standard indecomposable 2-vector
    coords = np.zeros(6)
    coords[0] = coords[5] = 1
    xi = MultiVector(4, 2, coords)
    assert carried_subspace_dim(xi) == 0
    assert not is_decomposable(xi)


def test_wedge_vector_vanishes_on_span():
    xi = wedge_coords(frame(e1, e2))
    assert np.allclose(wedge_vector(e1 + 2 * e2, xi).coords, 0)
    assert not np.allclose(wedge_vector(e3, xi).coords, 0)


def test_s_xi_examples():
    assert np.allclose(s_xi(np.eye(2), frame([1, 0])).mat, np.diag([1, 0]))
    rho = 0.4
    s = np.array([[1, rho], [rho, 1]])
    assert np.allclose(s_xi(s, frame([1, 0])).mat, [[1, rho], [rho, rho ** 2]])
    full = random_spd(rng_for(3), 3)
    assert np.allclose(s_xi(full, np.eye(3)).mat, full.gram)


def test_s_xi_is_projection_form(rng):
    s = random_spd(rng, 4)
    f = random_frame(rng, 4, 2)
    S = s_xi(s, f).mat
    assert np.linalg.matrix_rank(S, tol=1e-9 * np.linalg.norm(S)) == 2
    # agrees with s on the span
    v = f.vectors
    assert np.allclose(v.T @ S @ v, v.T @ s.gram @ v)
    # vanishes on the s-orthogonal complement
    w = np.linalg.solve(s.gram, np.cross(v[:3, 0], v[:3, 1]).tolist() + [0])
    perp = w - v @ np.linalg.solve(v.T @ s.gram @ v, v.T @ s.gram @ w)
    assert np.allclose(S @ perp, 0, atol=1e-10)


def test_gradient_examples():
    assert np.allclose(grad_vol_squared(np.eye(2), frame([1, 0])).mat, np.diag([1, 0]))
    # vol^2 = 4 and s_xi = diag(4, 0); the Riemannian gradient is s E11 s, not the
    # Euclidean one, so the value is diag(16, 0)
    assert np.allclose(grad_vol_squared(np.diag([4.0, 9.0]), frame([1, 0])).mat, np.diag([16, 0]))
    s = random_spd(rng_for(5), 3)
    vol2 = np.linalg.det(s.gram)
    assert np.allclose(grad_vol_squared(s, np.eye(3)).mat, vol2 * s.gram)


def test_gradient_example_by_finite_differences():
    s = np.diag([4.0, 9.0])
    f = frame([1, 0])
    grad = grad_vol_squared(s, f)
    for u in (np.diag([1.0, 0.0]), np.array([[0.0, 1.0], [1.0, 0.0]]), np.diag([0.3, -2.0])):
        fd = central_difference(lambda m: np.linalg.det(frame_gram(m, f)), s, u)
        assert fd == pytest.approx(metric_inner(s, grad, u), rel=1e-8, abs=1e-12)


def test_log_gradient_norm_examples():
    s = random_spd(rng_for(11), 3)
    assert s_xi_norm(s, frame([1, 2, 3])) == pytest.approx(1, abs=1e-12)
    g = grad_log_vol_squared(np.eye(3), frame(e1, e2))
    assert np.allclose(g.mat, np.diag([1, 1, 0]))
    assert metric_norm(np.eye(3), g) == pytest.approx(math.sqrt(2))
    s4 = random_spd(rng_for(12), 4)
    f = random_frame(rng_for(13), 4, 2)
    assert metric_inner(s4, s_xi(s4, f), s_xi(s4, f)) == pytest.approx(2, abs=1e-9)


seeds = st.integers(0, 2 ** 32)


@given(seeds)
def test_gradient_matches_finite_differences(seed):
    rng = rng_for(seed)
    n = int(rng.integers(1, 6))
    m = int(rng.integers(1, n + 1))
    s, f = random_spd(rng, n), random_frame(rng, n, m)
    grad = grad_vol_squared(s, f)
    scale = metric_norm(s, grad)
    for _ in range(5):
        u = random_symmetric(rng, n)
        u /= metric_norm(s, u)
        fd = central_difference(lambda m_: np.linalg.det(frame_gram(m_, f)), s.gram, u)
        assert abs(fd - metric_inner(s, grad, u)) <= 1e-6 * scale


@given(seeds)
def test_norm_law(seed):
    rng = rng_for(seed)
    n = int(rng.integers(1, 6))
    m = int(rng.integers(1, n + 1))
    s, f = random_spd(rng, n), random_frame(rng, n, m)
    assert abs(s_xi_norm(s, f) - math.sqrt(m)) <= 1e-9


@given(seeds)
def test_frame_independence(seed):
    rng = rng_for(seed)
    n = int(rng.integers(2, 5))
    m = int(rng.integers(1, n + 1))
    s, f = random_spd(rng, n), random_frame(rng, n, m)
    U = np.eye(m)
    if m > 1:
        U[0, 1] = int(rng.integers(-3, 4))
        U = U[:, rng.permutation(m)]
    g = DecomposableFrame(f.vectors @ U)
    assert np.allclose(s_xi(s, g).mat, s_xi(s, f).mat, rtol=1e-10, atol=1e-10 * np.abs(s.gram).max())
    assert gram_volume(s, g) == pytest.approx(gram_volume(s, f), rel=1e-10)
    A = rng.normal(size=(m, m)) + 2 * np.eye(m)
    h = DecomposableFrame(f.vectors @ A)
    assert gram_volume(s, h) == pytest.approx(abs(np.linalg.det(A)) * gram_volume(s, f), rel=1e-9)


@given(seeds)
def test_determinant_identity(seed):
    rng = rng_for(seed)
    n = int(rng.integers(1, 6))
    m = int(rng.integers(0, n + 1))
    s, f = random_spd(rng, n), random_frame(rng, n, m)
    xi = wedge_coords(f)
    expanded = xi.coords @ compound_gram(s, m) @ xi.coords
    assert pairing(s, xi, xi) == pytest.approx(expanded, rel=1e-12)
    assert gram_volume(s, f) ** 2 == pytest.approx(expanded, rel=1e-9)
