"""Shared test helpers: independent dense oracles and instance builders."""

import numpy as np

from quasisep import PrimeField


def schoolbook_mul(A, B, field):
    """Triple-loop product, independent of the library kernels."""
    m, k = A.shape
    n = B.shape[1]
    C = np.zeros((m, n), dtype=np.int64)
    for i in range(m):
        for j in range(n):
            acc = 0
            for t in range(k):
                acc += int(A[i, t]) * int(B[t, j])
            C[i, j] = acc % field.p
    return C


def dense_matvec(A, x, field):
    y = np.zeros(A.shape[0], dtype=np.int64)
    for i in range(A.shape[0]):
        acc = 0
        for j in range(A.shape[1]):
            acc += int(A[i, j]) * int(x[j])
        y[i] = acc % field.p
    return y


def inv_matrix(A, field):
    """Gauss-Jordan inverse; raises ZeroDivisionError if singular."""
    p = field.p
    n = A.shape[0]
    W = np.hstack([A % p, np.eye(n, dtype=np.int64)])
    for j in range(n):
        nz = np.nonzero(W[j:, j])[0]
        if nz.size == 0:
            raise ZeroDivisionError("singular matrix")
        i = j + int(nz[0])
        if i != j:
            W[[j, i]] = W[[i, j]]
        W[j] = (W[j] * field.inv(int(W[j, j]))) % p
        for r in range(n):
            if r != j and W[r, j]:
                W[r] = (W[r] - W[r, j] * W[j]) % p
    return W[:, n:]


def random_invertible_tridiagonal(n, seed, field):
    """Irreducible tridiagonal (nonzero off-diagonals), retried until invertible."""
    rng = np.random.default_rng(seed)
    p = field.p
    while True:
        T = np.zeros((n, n), dtype=np.int64)
        T[np.arange(n), np.arange(n)] = rng.integers(0, p, n)
        T[np.arange(n - 1) + 1, np.arange(n - 1)] = rng.integers(1, p, n - 1)
        T[np.arange(n - 1), np.arange(n - 1) + 1] = rng.integers(1, p, n - 1)
        try:
            return T, inv_matrix(T, field)
        except ZeroDivisionError:
            continue


def superdiagonal_above_antidiagonal(n):
    """Ones at (i, n-i) 1-based: rank n-1 but quasiseparable order 1."""
    A = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        A[i, n - 2 - i] = 1
    return A


def high_rank_left_triangular(n, s0, band, seed, field):
    """Left triangular instance whose rank far exceeds its order.

    A masked rank-s0 product supplies long pivot segments near the top
    left; random bands just above the anti-diagonal add ~n pivots with
    short segments, driving the rank toward n while the order stays near
    s0 + band.  These are the instances whose echelon compression needs
    many block columns and chained column moves.
    """
    rng = np.random.default_rng(seed)
    p = field.p
    X = rng.integers(0, p, (n, s0), dtype=np.int64)
    Y = rng.integers(0, p, (s0, n), dtype=np.int64)
    A = (X @ Y) % p
    idx = np.arange(n)
    A = np.where(np.add.outer(idx, idx) <= n - 2, A, 0)
    for w in range(band):
        d = n - 2 - w
        for i in range(max(0, d - n + 1), min(n, d + 1)):
            j = d - i
            if 0 <= j < n:
                A[i, j] = rng.integers(0, p)
    return A % p


F65521 = PrimeField(65521)
F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)
