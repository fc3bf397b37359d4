r"""The manifold of inner products on :math:`\mathbb{R}^n`.

A point is a positive-definite Gram matrix ``s``; tangent vectors are
symmetric matrices.  The Riemannian metric is

.. math::

    g_s(u, v) = \operatorname{tr}(s^{-1} v s^{-1} u),

which is invariant under congruence ``s -> A^T s A``.  The ray quotient
(forms up to positive scaling) is stored through its determinant-one
representatives.  ``GL_n(Z)`` acts on the left by
``s -> g^{-T} s g^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg

from . import intlinalg

SYM_RTOL = 1e-12
DET1_TOL = 1e-9


class NotPositiveDefinite(ValueError):
    pass


def _symmetrize(a, what: str) -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"{what} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} has non-finite entries")
    scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
    if np.max(np.abs(a - a.T)) > SYM_RTOL * scale:
        raise ValueError(f"{what} is not symmetric")
    a = 0.5 * (a + a.T)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class InnerProduct:
    """Positive-definite symmetric bilinear form given by its Gram matrix."""

    gram: np.ndarray

    def __post_init__(self):
        g = _symmetrize(self.gram, "gram")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite("gram is not positive definite") from exc
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def det(self) -> float:
        return float(np.linalg.det(self.gram))

    def to_json(self) -> dict:
        return {"dim": self.dim, "gram": self.gram.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "InnerProduct":
        ip = cls(np.asarray(data["gram"], dtype=float))
        if "dim" in data and int(data["dim"]) != ip.dim:
            raise ValueError("dim does not match gram")
        return ip

    def __repr__(self):
        return f"{type(self).__name__}({self.gram.tolist()!r})"


def det1_tolerance(gram: np.ndarray) -> float:
    """Tolerance for ``det = 1``: ``1e-9``, widened for badly conditioned Grams.

    A floating-point determinant of a matrix with condition number ``k`` is
    only accurate to about ``n k eps``, so far out in a cusp the fixed
    tolerance cannot be met by any representative.
    """
    w = np.linalg.eigvalsh(gram)
    cond = w[-1] / w[0] if w[0] > 0 else math.inf
    return max(DET1_TOL, 8 * gram.shape[0] * cond * np.finfo(float).eps)


@dataclass(frozen=True, eq=False, repr=False)
class NormalizedPoint(InnerProduct):
    """Determinant-one representative of a point of the ray quotient."""

    def __post_init__(self):
        super().__post_init__()
        d = self.det()
        if abs(d - 1.0) > det1_tolerance(self.gram):
            raise ValueError(f"determinant {d!r} is not 1")

    @property
    def rep(self) -> InnerProduct:
        return InnerProduct(self.gram)


@dataclass(frozen=True, eq=False)
class SymTangent:
    """Symmetric matrix viewed as a tangent vector."""

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _symmetrize(self.mat, "tangent"))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"SymTangent({self.mat.tolist()!r})"


@dataclass(frozen=True, eq=False)
class IntegerAutomorphism:
    """Element of ``GL_n(Z)``; entries are kept as Python ints."""

    mat: tuple

    def __post_init__(self):
        rows = intlinalg.as_int_matrix(self.mat)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("automorphism must be a non-empty square matrix")
        d = intlinalg.det(rows)
        if d not in (1, -1):
            raise ValueError(f"determinant {d} is not +-1")
        object.__setattr__(self, "mat", tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.mat)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.mat]

    def array(self) -> np.ndarray:
        return np.array(self.mat, dtype=float)

    def inverse(self) -> "IntegerAutomorphism":
        return IntegerAutomorphism(intlinalg.inverse(self.rows()))

    def __matmul__(self, other: "IntegerAutomorphism") -> "IntegerAutomorphism":
        return IntegerAutomorphism(intlinalg.matmul(self.rows(), other.rows()))

    def __eq__(self, other):
        return isinstance(other, IntegerAutomorphism) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def to_json(self) -> dict:
        return {"dim": self.dim, "mat": self.rows()}

    @classmethod
    def identity(cls, n: int) -> "IntegerAutomorphism":
        return cls(intlinalg.identity(n))


def _as_gram(s) -> np.ndarray:
    return s.gram if isinstance(s, InnerProduct) else InnerProduct(s).gram


def _as_mat(u) -> np.ndarray:
    return u.mat if isinstance(u, SymTangent) else SymTangent(u).mat


def _check_dims(*arrays: np.ndarray) -> None:
    if len({a.shape for a in arrays}) != 1:
        raise ValueError("dimension mismatch: " + ", ".join(str(a.shape) for a in arrays))


def metric_inner(s, u, v) -> float:
    """Riemannian inner product ``tr(s^-1 v s^-1 u)`` of tangent vectors at ``s``."""
    gram, umat, vmat = _as_gram(s), _as_mat(u), _as_mat(v)
    _check_dims(gram, umat, vmat)
    c = linalg.cho_factor(gram)
    a = linalg.cho_solve(c, umat)
    b = linalg.cho_solve(c, vmat)
    return float(np.einsum("ij,ji->", b, a))


def metric_norm(s, u) -> float:
    return math.sqrt(max(metric_inner(s, u, u), 0.0))


def _relative_eigvals(s0: np.ndarray, s1: np.ndarray) -> np.ndarray:
    # generalized problem s1 x = lam s0 x; eigenvalues of s0^-1 s1
    return linalg.eigh(s1, s0, eigvals_only=True)


def distance(s0, s1) -> float:
    """Geodesic distance ``sqrt(sum(log(lam_i)^2))``, ``lam`` the eigenvalues of ``s0^-1 s1``."""
    a, b = _as_gram(s0), _as_gram(s1)
    _check_dims(a, b)
    lam = _relative_eigvals(a, b)
    if np.any(lam <= 0):
        raise NotPositiveDefinite("relative eigenvalues must be positive")
    return float(math.sqrt(np.sum(np.log(lam) ** 2)))


def _sqrt_and_invsqrt(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, q = np.linalg.eigh(s)
    r = np.sqrt(w)
    return (q * r) @ q.T, (q / r) @ q.T


def _sym_fn(a: np.ndarray, fn) -> np.ndarray:
    w, q = np.linalg.eigh(0.5 * (a + a.T))
    out = (q * fn(w)) @ q.T
    return 0.5 * (out + out.T)


def geodesic(s0, s1, t: float) -> InnerProduct:
    """Point at parameter ``t`` on the geodesic from ``s0`` (t=0) to ``s1`` (t=1)."""
    a, b = _as_gram(s0), _as_gram(s1)
    _check_dims(a, b)
    if t == 0:
        return _like(s0, a)
    half, invhalf = _sqrt_and_invsqrt(a)
    inner = invhalf @ b @ invhalf
    out = half @ _sym_fn(inner, lambda w: w ** t) @ half
    return _like(s0, out)


def exp_map(s, u) -> InnerProduct:
    """Riemannian exponential ``s^(1/2) expm(s^(-1/2) u s^(-1/2)) s^(1/2)``."""
    a, umat = _as_gram(s), _as_mat(u)
    _check_dims(a, umat)
    half, invhalf = _sqrt_and_invsqrt(a)
    out = half @ _sym_fn(invhalf @ umat @ invhalf, np.exp) @ half
    return _like(s, out)


def log_map(s0, s1) -> SymTangent:
    """Inverse of :func:`exp_map` at ``s0``."""
    a, b = _as_gram(s0), _as_gram(s1)
    _check_dims(a, b)
    half, invhalf = _sqrt_and_invsqrt(a)
    return SymTangent(half @ _sym_fn(invhalf @ b @ invhalf, np.log) @ half)


def parallel_transport(s0, s1, u) -> SymTangent:
    """Transport ``u`` from ``s0`` to ``s1`` along the connecting geodesic.

    Uses ``E u E^T`` with ``E = (s1 s0^-1)^(1/2)``.
    """
    a, b, umat = _as_gram(s0), _as_gram(s1), _as_mat(u)
    half, invhalf = _sqrt_and_invsqrt(a)
    mid = _sym_fn(invhalf @ b @ invhalf, np.sqrt)
    e = half @ mid @ invhalf
    return SymTangent(e @ umat @ e.T)


def _like(template, gram: np.ndarray) -> InnerProduct:
    gram = 0.5 * (gram + gram.T)
    if isinstance(template, NormalizedPoint):
        # re-project: rounding drift in det would otherwise accumulate
        return normalize_det(gram)
    return InnerProduct(gram)


def congruence(s, a: np.ndarray) -> np.ndarray:
    """Gram matrix of ``s`` in the basis given by the columns of ``a``."""
    gram = _as_gram(s)
    out = a.T @ gram @ a
    return 0.5 * (out + out.T)


def act(g: IntegerAutomorphism, s) -> InnerProduct:
    """Left action ``s -> g^-T s g^-1``; preserves :class:`NormalizedPoint`."""
    if not isinstance(g, IntegerAutomorphism):
        g = IntegerAutomorphism(g)
    gram = _as_gram(s)
    if g.dim != gram.shape[0]:
        raise ValueError("dimension mismatch between g and s")
    ginv = np.array(intlinalg.inverse(g.rows()), dtype=float)
    return _like(s, congruence(gram, ginv))


def act_real(h: np.ndarray, s) -> InnerProduct:
    """Left action of a real matrix with ``det(h) = +-1``."""
    hinv = np.linalg.inv(h)
    return _like(s, congruence(s, hinv))


def act_tangent(h: np.ndarray, u) -> SymTangent:
    hinv = np.linalg.inv(h)
    return SymTangent(hinv.T @ _as_mat(u) @ hinv)


def normalize_det(s) -> NormalizedPoint:
    """Scale ``s`` to determinant one.

    The power-of-two part of the determinant is split off with ``frexp`` so
    that rescaling the input by ``2**k`` changes nothing in the output.
    """
    gram = _as_gram(s)
    n = gram.shape[0]
    lu, piv = linalg.lu_factor(gram)
    swaps = int(np.sum(piv != np.arange(n)))
    d = float(np.prod(np.diag(lu))) * (-1.0) ** swaps
    if d <= 0:
        raise NotPositiveDefinite("determinant must be positive")
    mant, expo = math.frexp(d)
    q, r = divmod(expo, n)
    factor = math.ldexp((mant * 2.0 ** r) ** (1.0 / n), q)
    return NormalizedPoint(gram / factor)


def is_det_one(s, tol: float = DET1_TOL) -> bool:
    return abs(float(np.linalg.det(_as_gram(s))) - 1.0) <= tol


def tangent_at_slice(s, u) -> SymTangent:
    """Project ``u`` onto the tangent space of the determinant-one slice at ``s``."""
    gram, umat = _as_gram(s), _as_mat(u)
    n = gram.shape[0]
    tr = float(np.trace(np.linalg.solve(gram, umat)))
    return SymTangent(umat - (tr / n) * gram)


def identity_point(n: int) -> NormalizedPoint:
    return NormalizedPoint(np.eye(n))


def upper_half_plane_point(x: float, y: float) -> NormalizedPoint:
    """Determinant-one Gram of the plane lattice with basis ``1, x + iy``."""
    if y <= 0:
        raise ValueError("y must be positive")
    return NormalizedPoint(np.array([[1.0, x], [x, x * x + y * y]]) / y)


def to_upper_half_plane(s) -> complex:
    """Inverse of :func:`upper_half_plane_point` for 2x2 forms (up to scaling)."""
    gram = normalize_det(s).gram
    if gram.shape != (2, 2):
        raise ValueError("only defined for n = 2")
    a, b = gram[0, 0], gram[0, 1]
    return complex(b / a, 1.0 / a)


def gl_from_rows(rows: Sequence[Sequence[int]]) -> IntegerAutomorphism:
    return IntegerAutomorphism(rows)
