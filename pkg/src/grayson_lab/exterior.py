"""Exterior powers, Gram-determinant volumes and their gradients.

Coordinates of a degree-``m`` multivector live on the basis
``e_I = e_{i1} ^ ... ^ e_{im}`` with ``I`` running over increasing index
tuples in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .symspace import SymTangent, _as_gram, metric_norm

DEPENDENCE_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


class DependentFrame(ValueError):
    pass


@lru_cache(maxsize=None)
def index_tuples(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(n), m))


@lru_cache(maxsize=None)
def _index_lookup(n: int, m: int) -> dict:
    return {I: k for k, I in enumerate(index_tuples(n, m))}


@dataclass(frozen=True, eq=False)
class MultiVector:
    dim: int
    degree: int
    coords: np.ndarray

    def __post_init__(self):
        if not 0 <= self.degree <= self.dim:
            raise ValueError("degree must lie in [0, dim]")
        c = np.atleast_1d(np.array(self.coords, dtype=float))
        if c.shape != (comb(self.dim, self.degree),):
            raise ValueError(
                f"expected {comb(self.dim, self.degree)} coordinates, got {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))


@dataclass(frozen=True, eq=False)
class DecomposableFrame:
    """Linearly independent vectors ``v_1 .. v_m``, stored as the columns of an ``n x m`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ValueError("frame must be an n x m array of column vectors")
        if v.shape[1] > v.shape[0]:
            raise DependentFrame("more vectors than dimensions")
        if v.shape[1]:
            gram = v.T @ v
            scale = np.prod(np.diag(gram))
            if not np.linalg.det(gram) > DEPENDENCE_TOL * scale:
                raise DependentFrame("frame vectors are linearly dependent")
        v.flags.writeable = False
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def of(cls, *vectors) -> "DecomposableFrame":
        return cls(np.column_stack([np.asarray(v, dtype=float) for v in vectors]))


def _frame(frame) -> DecomposableFrame:
    return frame if isinstance(frame, DecomposableFrame) else DecomposableFrame(frame)


def _check(s: np.ndarray, frame: DecomposableFrame) -> None:
    if frame.dim != s.shape[0]:
        raise ValueError(f"frame lives in R^{frame.dim} but s is {s.shape[0]}-dimensional")


def frame_gram(s, frame) -> np.ndarray:
    """The ``m x m`` matrix ``(s(v_i, v_j))``."""
    gram, frame = _as_gram(s), _frame(frame)
    _check(gram, frame)
    v = frame.vectors
    out = v.T @ gram @ v
    return 0.5 * (out + out.T)


def gram_volume(s, frame) -> float:
    """Length of ``v_1 ^ ... ^ v_m`` under ``s``: ``sqrt(det(s(v_i, v_j)))``."""
    frame = _frame(frame)
    if frame.rank == 0:
        return 1.0
    d = np.linalg.det(frame_gram(s, frame))
    if not d > 0:
        raise DependentFrame("Gram determinant is not positive")
    return float(np.sqrt(d))


def wedge_coords(frame) -> MultiVector:
    """Plucker coordinates: the ``m x m`` minors of the frame, lexicographic order."""
    frame = _frame(frame)
    n, m = frame.dim, frame.rank
    v = frame.vectors
    if m == 0:
        return MultiVector(n, 0, np.ones(1))
    coords = np.array([np.linalg.det(v[list(I), :]) for I in index_tuples(n, m)])
    return MultiVector(n, m, coords)


def wedge_vector(v, xi: MultiVector) -> MultiVector:
    """Coordinates of ``v ^ xi`` in degree ``m + 1``."""
    v = np.asarray(v, dtype=float)
    n, m = xi.dim, xi.degree
    if v.shape != (n,):
        raise ValueError("vector and multivector dimensions differ")
    if m == n:
        raise ValueError(f"cannot wedge a vector with a top-degree element of R^{n}")
    return MultiVector(n, m + 1, wedge_matrix(xi) @ v)


def wedge_matrix(xi: MultiVector) -> np.ndarray:
    """Matrix of ``v -> v ^ xi``, shape ``C(n, m+1) x n``."""
    return _wedge_matrix(xi.dim, xi.degree, xi.coords)


def _wedge_matrix(n: int, m: int, coords) -> np.ndarray:
    lookup = _index_lookup(n, m)
    rows = index_tuples(n, m + 1)
    M = np.zeros((len(rows), n), dtype=np.asarray(coords).dtype)
    for r, J in enumerate(rows):
        for pos, j in enumerate(J):
            rest = J[:pos] + J[pos + 1:]
            M[r, j] += (-1) ** pos * coords[lookup[rest]]
    return M


def subspace_membership(v, xi: MultiVector) -> bool:
    """True iff ``v ^ xi = 0``, i.e. ``v`` lies in the subspace carried by ``xi``."""
    v = np.asarray(v, dtype=float)
    xn = xi.norm()
    if xn == 0:
        raise ValueError("xi must be nonzero")
    if xi.degree == xi.dim:
        return True
    w = wedge_matrix(xi) @ v
    return bool(np.max(np.abs(w), initial=0.0) <= MEMBERSHIP_TOL * max(np.linalg.norm(v) * xn, 1e-300))


def carried_subspace_dim(xi: MultiVector) -> int:
    """Dimension of ``{v : v ^ xi = 0}``; equals the degree iff ``xi`` is decomposable."""
    if xi.degree == xi.dim:
        return xi.dim
    sv = np.linalg.svd(wedge_matrix(xi), compute_uv=False)
    tol = MEMBERSHIP_TOL * max(xi.norm(), 1e-300)
    return xi.dim - int(np.sum(sv > tol))


def is_decomposable(xi: MultiVector) -> bool:
    return xi.norm() > 0 and carried_subspace_dim(xi) == xi.degree


def compound_gram(s, m: int) -> np.ndarray:
    """Matrix of the induced inner product on degree ``m``: entries ``det(s[I, J])``."""
    gram = _as_gram(s)
    n = gram.shape[0]
    idx = index_tuples(n, m)
    if m == 0:
        return np.ones((1, 1))
    out = np.empty((len(idx), len(idx)))
    for a, I in enumerate(idx):
        for b in range(a, len(idx)):
            J = idx[b]
            out[a, b] = out[b, a] = np.linalg.det(gram[np.ix_(I, J)])
    return out


def pairing(s, xi: MultiVector, eta: MultiVector) -> float:
    """Induced inner product of two multivectors of the same degree."""
    if xi.degree != eta.degree or xi.dim != eta.dim:
        raise ValueError("multivectors must share dimension and degree")
    return float(xi.coords @ compound_gram(s, xi.degree) @ eta.coords)


def s_xi(s, frame) -> SymTangent:
    """Form agreeing with ``s`` on the span of the frame and vanishing on its ``s``-orthogonal complement.

    As a matrix this is ``s V (V^T s V)^-1 V^T s``; the small ``m x m``
    system is solved instead of inverting ``s``.
    """
    gram, frame = _as_gram(s), _frame(frame)
    _check(gram, frame)
    if frame.rank == 0:
        return SymTangent(np.zeros_like(gram))
    sv = gram @ frame.vectors
    g = frame_gram(gram, frame)
    out = sv @ np.linalg.solve(g, sv.T)
    return SymTangent(0.5 * (out + out.T))


def grad_vol_squared(s, frame) -> SymTangent:
    """Riemannian gradient of ``vol^2`` at ``s``: ``vol(s)^2 * s_xi``."""
    return SymTangent(gram_volume(s, frame) ** 2 * s_xi(s, frame).mat)


def grad_log_vol_squared(s, frame) -> SymTangent:
    """Riemannian gradient of ``log(vol^2)``; its norm is ``sqrt(m)`` at every ``s``."""
    return s_xi(s, frame)


def s_xi_norm(s, frame) -> float:
    return metric_norm(s, s_xi(s, frame))


def central_difference(f, s: np.ndarray, u: np.ndarray, h: float | None = None) -> float:
    """Directional derivative of ``f`` at ``s`` along ``u`` by central differences.

    The default step is ``1e-5 * (1 + ||s||)``.
    """
    s = np.asarray(s, dtype=float)
    if h is None:
        h = 1e-5 * (1.0 + np.linalg.norm(s))
    return (f(s + h * u) - f(s - h * u)) / (2.0 * h)
