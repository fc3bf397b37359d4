"""Certified short-vector enumeration for positive-definite quadratic forms.

``short_vectors(G, bound_sq)`` returns every nonzero integer ``x`` (up to
sign) with ``x^T G x <= bound_sq``.  A Gram-matrix LLL pass is used only as a
preconditioner; completeness comes from the Fincke-Pohst search.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_MAX_NODES = 2_000_000
BOUND_SLACK = 1e-9


class UncertifiedEnumeration(RuntimeError):
    """The search could not certify its result within the node budget."""


def _gso(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = G.shape[0]
    mu = np.zeros((n, n))
    bstar = np.zeros(n)
    for i in range(n):
        for j in range(i):
            mu[i, j] = (G[i, j] - np.dot(mu[j, :j] * mu[i, :j], bstar[:j])) / bstar[j]
        bstar[i] = G[i, i] - np.dot(mu[i, :i] ** 2, bstar[:i])
    return mu, bstar


def lll_gram(G: np.ndarray, delta: float = 0.99, max_iter: int = 10_000) -> np.ndarray:
    """Integer unimodular ``T`` such that ``T^T G T`` is LLL-reduced."""
    n = G.shape[0]
    T = np.eye(n, dtype=np.int64)
    if n < 2:
        return T

    def reduced_gram():
        Tf = T.astype(float)
        out = Tf.T @ G @ Tf
        return 0.5 * (out + out.T)

    Gc = G.copy()
    k = 1
    for _ in range(max_iter):
        if k >= n:
            break
        mu, _ = _gso(Gc)
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                T[:, k] -= q * T[:, j]
                mu[k, : j + 1] -= q * np.append(mu[j, :j], 1.0)
        Gc = reduced_gram()
        mu, bstar = _gso(Gc)
        if bstar[k] >= (delta - mu[k, k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            T[:, [k - 1, k]] = T[:, [k, k - 1]]
            Gc = reduced_gram()
            k = max(k - 1, 1)
    if np.max(np.abs(T)) > 2 ** 40:
        raise UncertifiedEnumeration("reduction produced oversized coefficients")
    return T


def short_vectors(G, bound_sq: float, max_nodes: int = DEFAULT_MAX_NODES) -> list[tuple[int, ...]]:
    """All nonzero integer vectors with ``x^T G x <= bound_sq``, one per ``+-`` pair.

    Each returned vector has a positive first nonzero coordinate.  The bound is
    widened by a relative ``1e-9`` so that rounding never drops a boundary
    point; callers compare exact quantities themselves.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    if bound_sq <= 0:
        return []
    T = lll_gram(G)
    Tf = T.astype(float)
    Gr = Tf.T @ G @ Tf
    Gr = 0.5 * (Gr + Gr.T)
    R = np.linalg.cholesky(Gr).T          # upper triangular, Gr = R^T R
    diag = np.diag(R)
    Q = R / diag[:, None]
    qdiag = diag ** 2
    limit = bound_sq * (1.0 + BOUND_SLACK) + 1e-300

    found: list[np.ndarray] = []
    x = np.zeros(n, dtype=np.int64)
    nodes = 0

    def search(i: int, partial: float) -> None:
        nonlocal nodes
        center = -float(np.dot(Q[i, i + 1:], x[i + 1:]))
        rem = limit - partial
        if rem < 0:
            return
        width = math.sqrt(rem / qdiag[i])
        lo, hi = math.ceil(center - width), math.floor(center + width)
        for v in range(lo, hi + 1):
            nodes += 1
            if nodes > max_nodes:
                raise UncertifiedEnumeration(f"node budget {max_nodes} exhausted")
            val = partial + qdiag[i] * (v - center) ** 2
            if val > limit:
                continue
            x[i] = v
            if i == 0:
                if np.any(x):
                    found.append(x.copy())
            else:
                search(i - 1, val)
        x[i] = 0

    search(n - 1, 0.0)

    out = set()
    for y in found:
        v = T @ y
        nz = np.flatnonzero(v)
        if v[nz[0]] < 0:
            v = -v
        out.add(tuple(int(c) for c in v))
    return sorted(out)
