"""Seeded random instances for the verification harness."""

from __future__ import annotations

import numpy as np

from . import intlinalg
from .exterior import DecomposableFrame
from .lattice import Sublattice, saturate
from .symspace import (IntegerAutomorphism, InnerProduct, NormalizedPoint, SymTangent,
                       exp_map, identity_point, metric_norm, tangent_at_slice)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.uint64(seed % 2 ** 64))


def random_symmetric(rng, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n))
    return 0.5 * (a + a.T)


def random_spd(rng, n: int, spread: float = 1.0) -> InnerProduct:
    """``expm`` of a random symmetric matrix times a random positive scale."""
    s = exp_map(np.eye(n), spread * random_symmetric(rng, n) / np.sqrt(n))
    return InnerProduct(s.gram * np.exp(rng.normal()))


def random_unit_tangent(rng, s) -> SymTangent:
    """Random tangent vector to the determinant-one slice, unit length."""
    n = s.gram.shape[0]
    u = tangent_at_slice(s, random_symmetric(rng, n) if n > 1 else np.zeros((1, 1)))
    norm = metric_norm(s, u)
    return SymTangent(u.mat / norm) if norm > 0 else u


def random_point(rng, n: int, spread: float = 1.0) -> NormalizedPoint:
    """Point at distance ``~spread * |N(0,1)|`` from the identity in a random direction."""
    base = identity_point(n)
    if n == 1:
        return base
    u = random_unit_tangent(rng, base)
    return exp_map(base, u.mat * spread * abs(rng.normal()) * 1.5)


def point_near(rng, x: NormalizedPoint, radius: float) -> NormalizedPoint:
    u = random_unit_tangent(rng, x)
    return exp_map(x, u.mat * radius)


def random_gl(rng, n: int, steps: int = 6, size: int = 2) -> IntegerAutomorphism:
    """Random product of elementary transvections, a permutation and sign flips."""
    g = intlinalg.identity(n)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.choice(n, size=2, replace=False)
        k = int(rng.integers(-size, size + 1))
        g = [row[:] for row in g]
        for row in g:
            row[i] += k * row[j]
    perm = rng.permutation(n)
    signs = rng.choice([-1, 1], size=n)
    g = [[int(signs[c]) * g[r][perm[c]] for c in range(n)] for r in range(n)]
    return IntegerAutomorphism(g)


def random_frame(rng, n: int, m: int) -> DecomposableFrame:
    while True:
        v = rng.normal(size=(n, m))
        if m == 0 or abs(np.linalg.det(v.T @ v)) > 1e-3:
            return DecomposableFrame(v)


def random_sublattice(rng, n: int, m: int, size: int = 2) -> Sublattice:
    if m == 0:
        return Sublattice.zero(n)
    while True:
        M = rng.integers(-size, size + 1, size=(n, m)).tolist()
        if intlinalg.rank(M) == m:
            return saturate(M)


def random_chain(rng, n: int, size: int = 2) -> tuple[Sublattice, Sublattice]:
    """Random ``W0 ⊊ W1`` (``W0`` may be zero, ``W1`` may be everything)."""
    while True:
        M = rng.integers(-size, size + 1, size=(n, n)).tolist()
        if intlinalg.rank(M) == n:
            break
    r0 = int(rng.integers(0, n))
    r1 = int(rng.integers(r0 + 1, n + 1))
    cols = intlinalg.transpose(M)
    W0 = saturate(intlinalg.transpose(cols[:r0])) if r0 else Sublattice.zero(n)
    W1 = saturate(intlinalg.transpose(cols[:r1]))
    return W0, W1


def random_integer_gram(rng, n: int, size: int = 2) -> InnerProduct:
    """``A^T A`` for a random nonsingular integer ``A``."""
    while True:
        A = rng.integers(-size, size + 1, size=(n, n))
        if round(abs(np.linalg.det(A))) >= 1:
            return InnerProduct((A.T @ A).astype(float))
