"""Small exact integer linear algebra for cocharacter lattices.

Matrices are lists of rows of Python ints. Everything here is tiny
(dimension of a torus), so clarity beats speed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def shape(A: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else (ncols or 0))


def transpose(A: Sequence[Sequence[int]], ncols: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    n = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(n)] for row in A]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_hnf(A: Sequence[Sequence[int]], ncols: int) -> tuple[Matrix, Matrix, int]:
    """Column-style Hermite normal form.

    Returns ``(H, U, r)`` with ``A U = H`` for unimodular ``U``; the first
    ``r`` columns of ``H`` are in reduced echelon form and the rest are zero.
    """
    H = [list(row) for row in A]
    m = len(H)
    n = ncols
    U = identity(n)

    def colop(p: int, j: int, a: int, b: int, c: int, d: int):
        # (col_p, col_j) <- (a col_p + b col_j, c col_p + d col_j)
        for M in (H, U):
            for row in M:
                x, y = row[p], row[j]
                row[p], row[j] = a * x + b * y, c * x + d * y

    r = 0
    pivots = []
    for i in range(m):
        if r == n:
            break
        for j in range(r + 1, n):
            if H[i][j]:
                a, b = H[i][r], H[i][j]
                g, x, y = _egcd(a, b)
                colop(r, j, x, y, -b // g, a // g)
        if H[i][r]:
            if H[i][r] < 0:
                for M in (H, U):
                    for row in M:
                        row[r] = -row[r]
            pivots.append((i, r))
            r += 1
    for i, p in pivots:
        piv = H[i][p]
        for j in range(p):
            q = H[i][j] // piv
            if q:
                for M in (H, U):
                    for row in M:
                        row[j] -= q * row[p]
    return H, U, r


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Saturated basis (as columns of a ``ncols x s`` matrix) of ker A over Z."""
    _, U, r = column_hnf(A, ncols)
    basis_cols = [[U[i][j] for i in range(ncols)] for j in range(r, ncols)]
    if not basis_cols:
        return [[] for _ in range(ncols)]
    return canonical_basis(transpose(basis_cols), ncols)


def canonical_basis(B: Sequence[Sequence[int]], nrows: int) -> Matrix:
    """Deterministic basis (columns) of the lattice spanned by the columns of B."""
    if not B or not B[0]:
        return [[] for _ in range(nrows)]
    H, _, r = column_hnf(B, len(B[0]))
    return [row[:r] for row in H]


def rank_q(A: Sequence[Sequence[int]], ncols: int) -> int:
    return column_hnf(A, ncols)[2]


def image_is_everything(A: Sequence[Sequence[int]], ncols: int) -> tuple[bool, bool]:
    """(surjective over Q, image lattice equal to Z^rows)."""
    m = len(A)
    H, _, r = column_hnf(A, ncols)
    if r < m:
        return False, False
    # echelon with full row rank: lattice is Z^m iff all pivots are 1
    piv_ok = True
    c = 0
    for i in range(m):
        if c < r and H[i][c] != 0:
            if abs(H[i][c]) != 1:
                piv_ok = False
            c += 1
    return True, piv_ok


def is_saturated(B: Sequence[Sequence[int]], nrows: int) -> bool:
    """Columns of B span a saturated sublattice of full column rank."""
    if not B or not B[0]:
        return True
    k = len(B[0])
    ok_q, ok_z = image_is_everything(transpose(B), nrows)
    return ok_q and ok_z and rank_q(B, k) == k


def inverse(A: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def unimodular_inverse(A: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def complete_to_basis(B: Sequence[Sequence[int]], n: int) -> Matrix:
    """Unimodular ``n x n`` matrix whose first columns are the columns of B.

    B must have saturated column span.
    """
    r = len(B[0]) if B and B[0] else 0
    if r == 0:
        return identity(n)
    Bt = transpose(B)
    _, U, rr = column_hnf(Bt, n)
    if rr != r:
        raise ValueError("columns are linearly dependent")
    V = unimodular_inverse(U)
    Vt = transpose(V)
    W = [list(B[i]) + Vt[i][r:] for i in range(n)]
    det = determinant(W)
    if abs(det) != 1:
        raise ValueError("columns do not span a saturated sublattice")
    return W


def quotient_projection(B: Sequence[Sequence[int]], n: int) -> Matrix:
    """Surjection Z^n -> Z^{n-r} with kernel the saturated span of B's columns."""
    W = complete_to_basis(B, n)
    r = len(B[0]) if B and B[0] else 0
    Winv = unimodular_inverse(W)
    return [list(row) for row in Winv[r:]]


def solve_integer(B: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coordinates of v in the basis formed by B's columns, or None."""
    n = len(B)
    r = len(B[0]) if B and B[0] else 0
    if r == 0:
        return [] if not any(v) else None
    # least squares via normal equations is exact for independent columns
    Bt = transpose(B)
    G = matmul(Bt, B)
    rhs = [sum(Bt[i][k] * v[k] for k in range(n)) for i in range(r)]
    Ginv = inverse(G)
    x = [sum(Ginv[i][j] * rhs[j] for j in range(r)) for i in range(r)]
    if any(xi.denominator != 1 for xi in x):
        return None
    xi = [int(t) for t in x]
    if any(sum(B[k][i] * xi[i] for i in range(r)) != v[k] for k in range(n)):
        return None
    return xi


def determinant(A: Sequence[Sequence[int]]):
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return int(det) if det.denominator == 1 else det


def minor(A: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]):
    return determinant([[A[i][j] for j in cols] for i in rows])


def maximal_minor_gcd(B: Sequence[Sequence[int]]) -> int:
    """gcd of the maximal minors of an ``n x r`` matrix with n >= r."""
    n = len(B)
    r = len(B[0]) if B and B[0] else 0
    g = 0
    for rows in combinations(range(n), r):
        g = gcd(g, int(minor(B, rows, range(r))))
    return g
