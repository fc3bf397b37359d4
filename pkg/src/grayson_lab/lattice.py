r"""Saturated sublattices of :math:`\mathbb{Z}^n`, canonical polygons and ``d_W``.

A :class:`Sublattice` is stored through its canonical column Hermite normal
form basis, so equal sublattices compare equal.  Volumes are square roots of
Gram determinants.  Minimal volumes per rank are certified by enumerating
short decomposable vectors in the exterior power (see
:mod:`grayson_lab.enumeration`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import intlinalg
from .enumeration import DEFAULT_MAX_NODES, UncertifiedEnumeration, short_vectors
from .exterior import MultiVector, _wedge_matrix, compound_gram, gram_volume
from .symspace import InnerProduct, IntegerAutomorphism, _as_gram, normalize_det

DESK_MAX_DIM = 4
TIE_RTOL = 1e-12
HULL_TOL = 1e-11


class NotSaturated(ValueError):
    pass


class PolygonError(RuntimeError):
    """A structural property of the canonical polygon failed to hold."""


@dataclass(frozen=True)
class Sublattice:
    """Saturated sublattice given by a Z-basis (tuple of integer columns)."""

    ambient_dim: int
    basis: tuple = ()

    def __post_init__(self):
        n = int(self.ambient_dim)
        cols = [tuple(int(v) for v in c) for c in self.basis]
        if any(len(c) != n for c in cols):
            raise ValueError("basis columns must have ambient_dim entries")
        if len(cols) > n:
            raise ValueError("too many basis vectors")
        if cols:
            M = intlinalg.transpose([list(c) for c in cols])
            if intlinalg.rank(M) != len(cols):
                raise ValueError("basis columns are linearly dependent")
            if intlinalg.content(intlinalg.maximal_minors(M)) != 1:
                raise NotSaturated("sublattice is not saturated")
            H = intlinalg.hnf_columns(M)
            cols = [tuple(c) for c in intlinalg.transpose(H)]
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "basis", tuple(cols))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> list[list[int]]:
        """Basis as an ``n x m`` list of rows."""
        if not self.basis:
            return [[] for _ in range(self.ambient_dim)]
        return intlinalg.transpose([list(c) for c in self.basis])

    def array(self) -> np.ndarray:
        return np.array(self.basis, dtype=float).reshape(self.rank, self.ambient_dim).T

    def sort_key(self) -> tuple:
        """Order used for tie-breaking: leading rows first, then the entries."""
        leads = tuple(next(i for i, v in enumerate(c) if v) for c in self.basis)
        return (leads, self.basis)

    def is_proper(self) -> bool:
        return 0 < self.rank < self.ambient_dim

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": [list(c) for c in self.basis]}

    @classmethod
    def from_json(cls, data: dict) -> "Sublattice":
        return cls(int(data["ambient_dim"]), tuple(tuple(c) for c in data["basis"]))

    @classmethod
    def zero(cls, n: int) -> "Sublattice":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, tuple(tuple(int(i == j) for i in range(n)) for j in range(n)))

    @classmethod
    def span(cls, n: int, *vectors: Sequence[int]) -> "Sublattice":
        """Saturation of the span of the given integer vectors."""
        if not vectors:
            return cls.zero(n)
        return saturate([[int(v[i]) for v in vectors] for i in range(n)])

    def __repr__(self):
        return f"Sublattice({self.ambient_dim}, {[list(c) for c in self.basis]})"


def saturate(M) -> Sublattice:
    """Smallest saturated sublattice containing the columns of the ``n x m`` integer matrix ``M``."""
    rows = intlinalg.as_int_matrix([list(r) for r in M])
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if m and intlinalg.rank(rows) != m:
        raise ValueError("columns are linearly dependent over Q")
    B = intlinalg.saturate_columns(rows, n)
    return Sublattice(n, tuple(tuple(c) for c in intlinalg.transpose(B)) if m else ())


def contains(big: Sublattice, small: Sublattice) -> bool:
    """Exact containment ``small ⊆ big`` (saturation makes the Q-span test sufficient)."""
    if big.ambient_dim != small.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if small.rank == 0:
        return True
    if small.rank > big.rank:
        return False
    if big.rank == big.ambient_dim:
        return True
    M = intlinalg.transpose([list(c) for c in big.basis + small.basis])
    return intlinalg.rank(M) == big.rank


def transform(g: IntegerAutomorphism, W: Sublattice) -> Sublattice:
    """Image ``g W`` of a sublattice under ``g`` acting on column vectors."""
    if not isinstance(g, IntegerAutomorphism):
        g = IntegerAutomorphism(g)
    if W.rank == 0:
        return W
    cols = intlinalg.transpose(intlinalg.matmul(g.rows(), W.matrix()))
    return Sublattice(W.ambient_dim, tuple(tuple(c) for c in cols))


def plucker_int(W: Sublattice) -> tuple[int, ...]:
    """Integer Plucker vector of ``W``, primitive, first nonzero coordinate positive."""
    if W.rank == 0:
        return (1,)
    minors = intlinalg.maximal_minors(W.matrix())
    g = intlinalg.content(minors)
    minors = [v // g for v in minors]
    first = next(v for v in minors if v)
    if first < 0:
        minors = [-v for v in minors]
    return tuple(minors)


def xi_of(W: Sublattice) -> MultiVector:
    """Generator of the top exterior power of ``W`` viewed in the exterior power of ``R^n``."""
    return MultiVector(W.ambient_dim, W.rank, np.array(plucker_int(W), dtype=float))


def sublattice_from_plucker(coords: Sequence[int], n: int, m: int) -> Sublattice | None:
    """Saturated sublattice whose Plucker vector is ``+-coords``; ``None`` if not decomposable."""
    coords = [int(c) for c in coords]
    if intlinalg.content(coords) != 1:
        return None
    if m == n:
        return Sublattice.full(n)
    if m == 1:
        return Sublattice(n, (tuple(coords),))
    M = _wedge_matrix(n, m, np.array(coords, dtype=object))
    K = intlinalg.kernel([[int(v) for v in row] for row in M], n)
    if not K or len(K[0]) != m:
        return None
    W = Sublattice(n, tuple(tuple(c) for c in intlinalg.transpose(K)))
    p = plucker_int(W)
    first = next(v for v in coords if v)
    if p != tuple(coords if first > 0 else [-v for v in coords]):
        return None
    return W


def vol_W(s, W: Sublattice) -> float:
    gram = _as_gram(s)
    if gram.shape[0] != W.ambient_dim:
        raise ValueError("dimension mismatch")
    if W.rank == 0:
        return 1.0
    return gram_volume(gram, W.array())


def log_vol(s, W: Sublattice) -> float:
    if W.rank == 0:
        return 0.0
    gram = _as_gram(s)
    v = W.array()
    sign, logdet = np.linalg.slogdet(v.T @ gram @ v)
    return 0.5 * float(logdet)


# ---------------------------------------------------------------------------
# splittings and quotients

def complement(W: Sublattice) -> list[list[int]]:
    """Canonical complement: integer ``n x (n-m)`` matrix ``C`` with ``[B | C]`` unimodular.

    The quotient map ``Z^n -> Z^(n-m)`` is put in row Hermite form, and each
    column of ``C`` is reduced modulo ``W`` against the HNF basis, so ``C``
    depends on ``W`` only.
    """
    n, m = W.ambient_dim, W.rank
    if m == n:
        return [[] for _ in range(n)]
    if m == 0:
        return intlinalg.identity(n)
    B = W.matrix()
    # unimodular V with B^T V = [H | 0]; P = V^-T has span(P[:, :m]) = W
    _, V = intlinalg.column_echelon(intlinalg.transpose(B), n)
    P = intlinalg.transpose(intlinalg.inverse(V))
    Pinv = intlinalg.inverse(P)
    q = Pinv[m:]
    C0 = [row[m:] for row in P]
    # canonical quotient map: row HNF of q = column HNF of q^T, transposed
    qc = intlinalg.transpose(intlinalg.hnf_columns(intlinalg.transpose(q)))
    A = intlinalg.matmul(qc, C0)                     # qc = A q, so qc C0 = A
    C = intlinalg.matmul(C0, intlinalg.inverse(A))   # qc C = I
    cols = intlinalg.transpose(C)
    reduced = [_reduce_mod(col, W.basis) for col in cols]
    return intlinalg.transpose(reduced)


def _reduce_mod(vec: list[int], basis: tuple) -> list[int]:
    v = list(vec)
    for col in basis:
        lead = next(i for i, x in enumerate(col) if x)
        f = v[lead] // col[lead]
        if f:
            v = [a - f * b for a, b in zip(v, col)]
    return v


def split_basis(W: Sublattice) -> list[list[int]]:
    """Unimodular ``P = [B | C]`` adapted to ``W``."""
    B, C = W.matrix(), complement(W)
    return [b + c for b, c in zip(B, C)]


def quotient_map(W: Sublattice) -> list[list[int]]:
    """``(n-m) x n`` integer matrix identifying ``Z^n / W`` with ``Z^(n-m)``."""
    return intlinalg.inverse(split_basis(W))[W.rank:]


@dataclass(frozen=True, eq=False)
class QuotientForm:
    form: InnerProduct
    complement: list
    projection: list


def quotient_form(s, W: Sublattice) -> QuotientForm:
    """Inner product on ``Z^n / W`` induced by orthogonal projection onto ``W^perp``.

    The basis of the quotient is the image of :func:`complement`.
    """
    gram = _as_gram(s)
    n, m = W.ambient_dim, W.rank
    if gram.shape[0] != n:
        raise ValueError("dimension mismatch")
    if m == n:
        raise ValueError("quotient by the full lattice is zero-dimensional")
    C = np.array(complement(W), dtype=float).reshape(n, n - m)
    q = quotient_map(W)
    if m == 0:
        return QuotientForm(InnerProduct(C.T @ gram @ C), complement(W), q)
    B = W.array()
    sb = gram @ B
    sc = gram @ C
    schur = C.T @ sc - sc.T @ B @ np.linalg.solve(B.T @ sb, sb.T @ C)
    return QuotientForm(InnerProduct(0.5 * (schur + schur.T)), complement(W), q)


def quotient_sublattice(W: Sublattice, W2: Sublattice) -> Sublattice:
    """Image of ``W2 ⊇ W`` in ``Z^n / W = Z^(n-m)``."""
    if not contains(W2, W):
        raise ValueError("W2 must contain W")
    q = quotient_map(W)
    k = W.ambient_dim - W.rank
    if W2.rank == W.rank:
        return Sublattice.zero(k)
    img = intlinalg.matmul(q, W2.matrix())
    return saturate(_independent_columns(img))


def _independent_columns(M: list[list[int]]) -> list[list[int]]:
    cols = intlinalg.transpose(M)
    keep: list[list[int]] = []
    for c in cols:
        trial = keep + [c]
        if intlinalg.rank(intlinalg.transpose(trial)) == len(trial):
            keep.append(c)
    return intlinalg.transpose(keep) if keep else [[] for _ in M]


def restricted_form(s, W: Sublattice) -> InnerProduct:
    """Gram matrix of ``s`` restricted to ``W`` in its HNF basis."""
    B = W.array()
    out = B.T @ _as_gram(s) @ B
    return InnerProduct(0.5 * (out + out.T))


def lift(W: Sublattice, U: Sublattice) -> Sublattice:
    """Sublattice of ``Z^n`` corresponding to ``U ⊆ Z^rank(W)`` through the basis of ``W``."""
    if U.rank == 0:
        return Sublattice.zero(W.ambient_dim)
    cols = intlinalg.transpose(intlinalg.matmul(W.matrix(), U.matrix()))
    return Sublattice(W.ambient_dim, tuple(tuple(c) for c in cols))


def lift_from_quotient(W: Sublattice, U: Sublattice) -> Sublattice:
    """Preimage in ``Z^n`` of ``U ⊆ Z^n / W``."""
    C = complement(W)
    cols = [list(c) for c in W.basis]
    if U.rank:
        cols += intlinalg.transpose(intlinalg.matmul(C, U.matrix()))
    return Sublattice(W.ambient_dim, tuple(tuple(c) for c in cols))


# ---------------------------------------------------------------------------
# enumeration

def sublattices_below(s, m: int, bound: float, max_nodes: int = DEFAULT_MAX_NODES
                      ) -> list[tuple[Sublattice, float]]:
    """Every saturated rank-``m`` sublattice with volume ``<= bound``, sorted by volume.

    Complete by construction: the Plucker vectors of such sublattices are
    exactly the primitive decomposable integer points of the ``bound``-ball of
    the exterior-power form.
    """
    gram = _as_gram(s)
    n = gram.shape[0]
    if not 0 <= m <= n:
        raise ValueError("rank out of range")
    if m == 0:
        return [(Sublattice.zero(n), 1.0)] if bound >= 1.0 else []
    if m == n:
        v = vol_W(gram, Sublattice.full(n))
        return [(Sublattice.full(n), v)] if v <= bound * (1 + 1e-12) else []
    G = compound_gram(gram, m)
    out = []
    for xi in short_vectors(G, bound * bound, max_nodes=max_nodes):
        W = sublattice_from_plucker(xi, n, m)
        if W is None:
            continue
        v = vol_W(gram, W)
        if v <= bound * (1 + 1e-12):
            out.append((W, v))
    out.sort(key=lambda p: (p[1], p[0].sort_key()))
    return out


def min_volume_sublattice(s, k: int, radius: float | None = None,
                          max_nodes: int = DEFAULT_MAX_NODES,
                          max_dim: int = DESK_MAX_DIM) -> tuple[Sublattice, float]:
    """Saturated rank-``k`` sublattice of minimal volume, with that volume.

    The coordinate sublattices give a finite search radius, so the result is
    certified.  A caller-supplied ``radius`` caps the search; if nothing lies
    inside it the minimum cannot be certified and
    :class:`UncertifiedEnumeration` is raised.  Ties within a relative
    ``1e-12`` are broken by :meth:`Sublattice.sort_key`.
    """
    gram = _as_gram(s)
    n = gram.shape[0]
    if not 0 <= k <= n:
        raise ValueError("rank out of range")
    if n > max_dim and radius is None:
        raise ValueError(f"n = {n} exceeds the desk-scale bound {max_dim}; pass a radius")
    if k == 0:
        return Sublattice.zero(n), 1.0
    if k == n:
        return Sublattice.full(n), vol_W(gram, Sublattice.full(n))
    G = compound_gram(gram, k)
    upper = math.sqrt(float(np.min(np.diag(G))))
    bound = upper if radius is None else min(radius, upper)
    cands = []
    for xi in short_vectors(G, bound * bound, max_nodes=max_nodes):
        x = np.array(xi, dtype=float)
        cands.append((float(x @ G @ x), xi))
    cands.sort()
    best = None
    ties: list[tuple[Sublattice, float]] = []
    for q, xi in cands:
        if best is not None and q > best * (1 + 2 * TIE_RTOL):
            break
        W = sublattice_from_plucker(xi, n, k)
        if W is None:
            continue
        v = vol_W(gram, W)
        if best is None:
            best = v * v
        ties.append((W, v))
    if not ties:
        raise UncertifiedEnumeration(
            f"no rank-{k} sublattice within radius {bound!r}; the minimum is not certified")
    vmin = min(v for _, v in ties)
    pool = [(W, v) for W, v in ties if v <= vmin * (1 + TIE_RTOL)]
    W, v = min(pool, key=lambda p: p[0].sort_key())
    return W, v


# ---------------------------------------------------------------------------
# canonical polygon

def lower_hull(points: Sequence[tuple[float, float]], tol: float = HULL_TOL) -> list[int]:
    """Indices of the strict vertices of the lower convex hull (points sorted by x)."""
    scale = 1.0 + max(abs(y) for _, y in points)
    hull: list[int] = []
    for i, (x2, y2) in enumerate(points):
        while len(hull) >= 2:
            x0, y0 = points[hull[-2]]
            x1, y1 = points[hull[-1]]
            cross = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
            if cross <= tol * scale * (x2 - x0):
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


@dataclass(frozen=True, eq=False)
class CanonicalPolygon:
    points: list            # (rank, log of minimal volume) for rank 0..n
    hull_vertices: list     # ranks
    filtration: list        # Sublattice per hull vertex
    slopes: list            # one per hull segment
    minimizers: list = field(default_factory=list)  # minimal sublattice per rank

    def slope_at(self, k: int) -> float:
        """Slope of the hull segment covering ranks ``(k-1, k)``."""
        for i in range(len(self.hull_vertices) - 1):
            if self.hull_vertices[i] < k <= self.hull_vertices[i + 1]:
                return self.slopes[i]
        raise ValueError("rank outside the polygon")

    def to_json(self) -> dict:
        return {
            "points": [[k, y] for k, y in self.points],
            "vertices": list(self.hull_vertices),
            "slopes": list(self.slopes),
            "filtration": [W.to_json() for W in self.filtration],
        }

    def to_csv(self) -> str:
        lines = ["rank,log_minvol,vertex"]
        verts = set(self.hull_vertices)
        for k, y in self.points:
            lines.append(f"{k},{y!r},{int(k in verts)}")
        return "\n".join(lines) + "\n"


def canonical_polygon(s, radius: float | None = None, max_nodes: int = DEFAULT_MAX_NODES,
                      max_dim: int = DESK_MAX_DIM) -> CanonicalPolygon:
    """Canonical plot, its lower convex hull and the induced filtration.

    Nestedness of the filtration and strict monotonicity of the slopes are
    checked, and :class:`PolygonError` is raised if either fails.
    """
    gram = _as_gram(s)
    n = gram.shape[0]
    mins = [min_volume_sublattice(gram, k, radius=radius, max_nodes=max_nodes, max_dim=max_dim)
            for k in range(n + 1)]
    points = [(k, 0.0 if k == 0 else math.log(v)) for k, (_, v) in enumerate(mins)]
    verts = lower_hull(points)
    slopes = [(points[b][1] - points[a][1]) / (b - a) for a, b in zip(verts, verts[1:])]
    filtration = [mins[k][0] for k in verts]
    for a, b in zip(slopes, slopes[1:]):
        if not b > a:
            raise PolygonError("slopes are not strictly increasing")
    for small, big in zip(filtration, filtration[1:]):
        if not contains(big, small):
            raise PolygonError("filtration is not nested")
    return CanonicalPolygon(points, verts, filtration, slopes, [W for W, _ in mins])


# ---------------------------------------------------------------------------
# slopes and d_W

def _check_chain(W0: Sublattice, W1: Sublattice) -> None:
    if W0.ambient_dim != W1.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if not (W0.rank < W1.rank and contains(W1, W0)):
        raise ValueError("W0 must be strictly contained in W1")


def c_tilde(s, W0: Sublattice, W1: Sublattice) -> float:
    """Slope ``(ln vol_W1 - ln vol_W0) / (rk W1 - rk W0)`` for ``W0 ⊊ W1``."""
    _check_chain(W0, W1)
    return (log_vol(s, W1) - log_vol(s, W0)) / (W1.rank - W0.rank)


def _check_proper(W: Sublattice, n: int) -> None:
    if W.ambient_dim != n:
        raise ValueError("dimension mismatch")
    if not W.is_proper():
        raise ValueError("W must be neither 0 nor the whole lattice")


def c_sup(s, W: Sublattice, **enum) -> float:
    """Largest slope into ``W``: last slope of the canonical polygon of ``W``."""
    gram = _as_gram(s)
    _check_proper(W, gram.shape[0])
    return canonical_polygon(restricted_form(gram, W), **enum).slopes[-1]


def c_inf(s, W: Sublattice, **enum) -> float:
    """Smallest slope out of ``W``: first slope of the canonical polygon of ``Z^n / W``."""
    gram = _as_gram(s)
    _check_proper(W, gram.shape[0])
    return canonical_polygon(quotient_form(gram, W).form, **enum).slopes[0]


@dataclass(frozen=True)
class Instability:
    d_W: float
    c_inf: float
    c_sup: float

    def to_json(self) -> dict:
        return {"d_W": self.d_W, "c_inf": self.c_inf, "c_sup": self.c_sup}


def instability(x, W: Sublattice, **enum) -> Instability:
    """``d_W`` with its two slopes, evaluated at the determinant-one representative of ``x``."""
    gram = normalize_det(x).gram
    ci = c_inf(gram, W, **enum)
    cs = c_sup(gram, W, **enum)
    return Instability(math.exp(ci - cs), ci, cs)


def d_W(x, W: Sublattice, **enum) -> float:
    """``exp(c_inf - c_sup)``; unchanged by rescaling ``x``."""
    return instability(x, W, **enum).d_W


def all_proper_below(s, bound_for_rank, max_nodes: int = DEFAULT_MAX_NODES
                     ) -> Iterable[tuple[Sublattice, float]]:
    """All ``W`` with ``0 < rk W < n`` and ``vol_W <= bound_for_rank(rank)``."""
    n = _as_gram(s).shape[0]
    for m in range(1, n):
        yield from sublattices_below(s, m, bound_for_rank(m), max_nodes=max_nodes)
