"""Exact integer linear algebra on lists of Python ints.

Matrices are lists of rows.  Everything here is exact; no floats are touched.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]


def as_int_matrix(rows: Sequence[Sequence]) -> IntMatrix:
    out = []
    for row in rows:
        new = []
        for v in row:
            iv = int(v)
            if iv != v:
                raise ValueError(f"non-integer entry {v!r}")
            new.append(iv)
        out.append(new)
    return out


def transpose(A: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*A)] if A else []


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def det(A: IntMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse(A: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix; raises if the inverse is not integral."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    out = []
    for row in M:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in vals])
    return out


def rank(A: IntMatrix) -> int:
    if not A or not A[0]:
        return 0
    M = [[Fraction(v) for v in row] for row in A]
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, rows):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def column_echelon(A: IntMatrix, ncols: int | None = None) -> tuple[IntMatrix, IntMatrix]:
    """Unimodular column reduction ``A @ U = H``.

    ``H`` is in column Hermite normal form: the nonzero columns come first,
    column ``j`` has its leading (topmost) nonzero entry strictly below that of
    column ``j - 1``, leading entries are positive, and the entries to the left
    of a leading entry are reduced into ``[0, lead)``.  Zero columns trail.

    Returns ``(H, U)``.
    """
    rows = len(A)
    cols = ncols if ncols is not None else (len(A[0]) if A else 0)
    H = [list(row) for row in A]
    U = identity(cols)

    def colop(j: int, k: int, a: int, b: int, c: int, d: int) -> None:
        # (col_j, col_k) <- (a col_j + b col_k, c col_j + d col_k)
        for M in (H, U):
            for row in M:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    piv = 0
    lead_rows = []
    for r in range(rows):
        if piv == cols:
            break
        for k in range(piv + 1, cols):
            if H[r][k] == 0:
                continue
            x, y = H[r][piv], H[r][k]
            g, p, q = _xgcd(x, y)
            # [x y] @ [[p, -y/g], [q, x/g]] = [g 0], determinant 1
            colop(piv, k, p, q, -y // g, x // g)
        if H[r][piv] == 0:
            continue
        if H[r][piv] < 0:
            for M in (H, U):
                for row in M:
                    row[piv] = -row[piv]
        lead = H[r][piv]
        for j in range(piv):
            f = H[r][j] // lead
            if f:
                for M in (H, U):
                    for row in M:
                        row[j] -= f * row[piv]
        lead_rows.append(r)
        piv += 1
    return H, U


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, p, q)`` with ``p*a + q*b = g = gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    aa, bb = a, b
    while bb:
        q = aa // bb
        aa, bb = bb, aa - q * bb
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if aa < 0:
        aa, x0, y0 = -aa, -x0, -y0
    return aa, x0, y0


def kernel(A: IntMatrix, ncols: int) -> IntMatrix:
    """Z-basis (as columns, shape ``ncols x r``) of ``{x in Z^ncols : A x = 0}``.

    The returned lattice is automatically saturated.
    """
    if not A:
        return identity(ncols)
    H, U = column_echelon(A, ncols)
    nz = sum(1 for j in range(ncols) if any(row[j] for row in H))
    return [row[nz:] for row in U]


def hnf_columns(B: IntMatrix) -> IntMatrix:
    """Canonical column HNF basis of the lattice spanned by the columns of ``B``.

    ``B`` is ``n x m`` with independent columns; returns ``n x m``.
    """
    H, _ = column_echelon(B)
    m = len(B[0]) if B else 0
    return [row[:m] for row in H]


def maximal_minors(B: IntMatrix) -> list[int]:
    """The ``m x m`` minors of the ``n x m`` matrix ``B`` in lexicographic row order."""
    n = len(B)
    m = len(B[0]) if B else 0
    return [det([B[i] for i in rows]) for rows in combinations(range(n), m)]


def content(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def saturate_columns(B: IntMatrix, n: int) -> IntMatrix:
    """Basis of ``span_Q(B) ∩ Z^n``.

    ``B`` is ``n x m`` with Q-independent columns.  The orthogonal lattice of
    the columns is computed first, then its own integer kernel.
    """
    m = len(B[0]) if B else 0
    if m == 0:
        return [[] for _ in range(n)]
    if rank(B) != m:
        raise ValueError("columns are linearly dependent")
    if m == n:
        return identity(n)
    orth = kernel(transpose(B), n)          # n x (n - m)
    return kernel(transpose(orth), n)       # n x m
