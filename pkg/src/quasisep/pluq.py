"""Rank-profile-revealing PLUQ decomposition and the rank profile matrix.

The pivoting strategy picks the nonzero entry of the trailing submatrix
with lexicographically minimal (row, column) and moves it into place with
cyclic row/column rotations, which preserves the relative order of the
remaining rows and columns.  A brute-force rank-table oracle double-checks
the revealed profile in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import OpCounter, Permutation, PrimeField, mat_mul


@dataclass
class RankProfileMatrix:
    """Pivot support of the rank profile matrix, 0-based, sorted by row."""

    m: int
    n: int
    pivots: list = dc_field(default_factory=list)

    def __post_init__(self):
        self.pivots = sorted((int(i), int(j)) for i, j in self.pivots)
        rows = [i for i, _ in self.pivots]
        cols = [j for _, j in self.pivots]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("pivots must sit on distinct rows and columns")
        for i, j in self.pivots:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise ValueError(f"pivot {(i, j)} out of range")

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivots_one_based(self) -> list:
        return [(i + 1, j + 1) for i, j in self.pivots]

    def to_dense(self) -> np.ndarray:
        R = np.zeros((self.m, self.n), dtype=np.int64)
        for i, j in self.pivots:
            R[i, j] = 1
        return R

    def left_part(self) -> "RankProfileMatrix":
        """Pivots with i + j <= n (1-based), the left triangular region."""
        keep = [(i, j) for i, j in self.pivots if i + j <= self.n - 2]
        return RankProfileMatrix(self.m, self.n, keep)


@dataclass
class PluqDecomposition:
    P: Permutation
    L: np.ndarray  # m x r, unit diagonal in its first r rows
    U: np.ndarray  # r x n, nonzero diagonal
    Q: Permutation
    r: int
    field: PrimeField

    @property
    def m(self) -> int:
        return self.L.shape[0]

    @property
    def n(self) -> int:
        return self.U.shape[1]

    def reconstruct(self, counter: OpCounter | None = None) -> np.ndarray:
        X = mat_mul(self.L, self.U, self.field, counter)
        return self.Q.apply_cols(self.P.apply_rows(X))


def pluq_rpm(A: np.ndarray, field: PrimeField,
             counter: OpCounter | None = None) -> PluqDecomposition:
    """PLUQ decomposition whose P [I_r; 0] Q equals the rank profile matrix."""
    p = field.p
    W = np.array(A, dtype=np.int64) % p
    m, n = W.shape
    rp = np.arange(m, dtype=np.int64)
    cp = np.arange(n, dtype=np.int64)
    k = 0
    while k < m and k < n:
        rows, cols = np.nonzero(W[k:, k:])
        if rows.size == 0:
            break
        # np.nonzero is row-major, so the first hit is the lexicographic min.
        i = k + int(rows[0])
        j = k + int(cols[0])
        if i > k:
            W[k:i + 1] = np.roll(W[k:i + 1], 1, axis=0)
            rp[k:i + 1] = np.roll(rp[k:i + 1], 1)
        if j > k:
            W[:, k:j + 1] = np.roll(W[:, k:j + 1], 1, axis=1)
            cp[k:j + 1] = np.roll(cp[k:j + 1], 1)
        inv = field.inv(int(W[k, k]))
        if counter is not None:
            counter.invs += 1
            counter.muls += (m - k - 1) + (m - k - 1) * (n - k - 1)
            counter.adds += (m - k - 1) * (n - k - 1)
        if k + 1 < m:
            W[k + 1:, k] = (W[k + 1:, k] * inv) % p
            if k + 1 < n:
                W[k + 1:, k + 1:] = (W[k + 1:, k + 1:]
                                     - np.outer(W[k + 1:, k], W[k, k + 1:])) % p
        k += 1
    r = k
    L = np.tril(W[:, :r], -1)
    if r:
        L[np.arange(r), np.arange(r)] = 1
    U = np.triu(W[:r, :])
    inv_cp = np.empty_like(cp)
    inv_cp[cp] = np.arange(n, dtype=np.int64)
    return PluqDecomposition(Permutation(rp), L, U, Permutation(inv_cp), r, field)


def rpm_from_pluq(d: PluqDecomposition) -> RankProfileMatrix:
    """Pivot set {(P(k), Q(k)) : k < r} of the decomposition."""
    rows = d.P.img[:d.r]
    cols = d.Q.inverse().img[:d.r]
    return RankProfileMatrix(d.m, d.n, list(zip(rows.tolist(), cols.tolist())))


def _rank_column_profile(A: np.ndarray, field: PrimeField) -> np.ndarray:
    """ranks[i] = rank(A[:i+1, :]) via row-by-row insertion into a basis."""
    p = field.p
    m = A.shape[0]
    basis = []  # (pivot col, row reduced against all earlier basis rows)
    ranks = np.zeros(m, dtype=np.int64)
    r = 0
    for i in range(m):
        v = A[i].copy() % p
        for c, row in basis:
            if v[c]:
                v = (v - v[c] * row) % p
        nz = np.nonzero(v)[0]
        if nz.size:
            c = int(nz[0])
            v = (v * field.inv(int(v[c]))) % p
            basis.append((c, v))
            r += 1
        ranks[i] = r
    return ranks


def rpm_bruteforce(A: np.ndarray, field: PrimeField) -> RankProfileMatrix:
    """Definition-level oracle: pivot at (i, j) iff the leading-rank table
    has a unit jump there, r[i][j] - r[i-1][j] - r[i][j-1] + r[i-1][j-1] = 1."""
    A = np.asarray(A, dtype=np.int64) % field.p
    m, n = A.shape
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    for j in range(1, n + 1):
        table[1:, j] = _rank_column_profile(A[:, :j], field)
    diff = table[1:, 1:] - table[:-1, 1:] - table[1:, :-1] + table[:-1, :-1]
    pivots = [(int(i), int(j)) for i, j in zip(*np.nonzero(diff == 1))]
    return RankProfileMatrix(m, n, pivots)


def check_pluq_structure(d: PluqDecomposition) -> bool:
    """P [L | 0] P^T lower triangular and Q^T [U ; 0] Q upper triangular."""
    m, n = d.m, d.n
    Lx = np.zeros((m, m), dtype=np.int64)
    Lx[:, :d.r] = d.L
    PLPt = d.P.apply_cols_inv(d.P.apply_rows(Lx))
    if np.triu(PLPt, 1).any():
        return False
    Ux = np.zeros((n, n), dtype=np.int64)
    Ux[:d.r, :] = d.U
    QtUQ = d.Q.apply_cols(d.Q.apply_rows_inv(Ux))
    return not np.tril(QtUQ, -1).any()
