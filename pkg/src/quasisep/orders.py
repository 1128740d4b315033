"""Quasiseparable order computation.

`lt_rpm` is the divide-and-conquer elimination returning the left
triangular part of the rank profile matrix; `qs_order` turns its pivot
list into the order with a single linear sweep.  Both have brute-force
rank oracles next to them for testing.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .field import (OpCounter, PrimeField, mat_mul, next_pow2, pad_top_left,
                    rank, reverse_cols, reverse_rows, strict_lower,
                    strict_upper, trsm_unit_lower, trsm_upper_right)
from .pluq import RankProfileMatrix, pluq_rpm


class QsOrders(NamedTuple):
    r_l: int
    r_u: int


def qs_order(pivots: Iterable[tuple], n: int) -> int:
    """Largest rank of a leading k x (n-k) block, from left-region pivots.

    One pass over the pivot list to set row/column flags, one O(n) sweep:
    entering row i adds its pivot, leaving column n-1-i (0-based) removes it.
    """
    rows = bytearray(n)
    cols = bytearray(n)
    for i, j in pivots:
        rows[i] = 1
        cols[j] = 1
    best = 0
    cur = 0
    for i in range(n):
        cur += rows[i]
        cur -= cols[n - 1 - i]
        if cur > best:
            best = cur
    return best


def _lt_rec(A: np.ndarray, field: PrimeField, counter: OpCounter | None) -> list:
    """Pivots (0-based) of the left triangular part of the RPM of A.

    A is square with power-of-two size; the top-left quadrant is eliminated
    by a profile-revealing PLUQ while the top-right and bottom-left quadrants
    recurse on Schur-complement updates that preserve the profile.
    """
    n = A.shape[0]
    if n == 1:
        return []
    h = n // 2
    p = field.p
    d = pluq_rpm(A[:h, :h], field, counter)
    r1 = d.r
    rp = d.P.img
    cp = d.Q.inverse().img
    pivots = list(zip(rp[:r1].tolist(), cp[:r1].tolist()))

    B = A[:h, h:][rp]            # P1^T A2
    C = A[h:, :h][:, cp]         # A3 Q1^T
    L1 = d.L[:r1, :r1]
    M1 = d.L[r1:, :r1]
    U1 = d.U[:r1, :r1]
    V1 = d.U[:r1, r1:]
    D = trsm_unit_lower(L1, B[:r1], field, counter)
    E = trsm_upper_right(C[:, :r1], U1, field, counter)
    F = (B[r1:] - mat_mul(M1, D, field, counter)) % p
    G = (C[:, r1:] - mat_mul(E, V1, field, counter)) % p
    if counter is not None:
        counter.adds += F.size + G.size

    H = np.zeros((h, h), dtype=np.int64)
    H[r1:] = F
    H = d.P.apply_rows(H)
    I = np.zeros((h, h), dtype=np.int64)
    I[:, r1:] = G
    I = d.Q.apply_cols(I)

    pivots += [(i, j + h) for i, j in _lt_rec(H, field, counter)]
    pivots += [(i + h, j) for i, j in _lt_rec(I, field, counter)]
    return pivots


def lt_rpm(A: np.ndarray, field: PrimeField,
           counter: OpCounter | None = None) -> RankProfileMatrix:
    """Left triangular part of the rank profile matrix of a square A.

    The input is zero-padded to the next power of two before recursing;
    padding leaves the rank profile untouched, so restricting the result
    to the original left region {i + j <= n, 1-based} is exact.
    """
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("lt_rpm expects a square matrix")
    if n == 0:
        return RankProfileMatrix(0, 0, [])
    W = pad_top_left(np.asarray(A, dtype=np.int64) % field.p, next_pow2(n))
    pivots = [(i, j) for i, j in _lt_rec(W, field, counter) if i + j <= n - 2]
    return RankProfileMatrix(n, n, pivots)


def quasiseparable_orders(M: np.ndarray, field: PrimeField,
                          counter: OpCounter | None = None) -> QsOrders:
    """(r_L, r_U) of a square matrix via the two left triangular profiles."""
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("quasiseparable_orders expects a square matrix")
    low = reverse_rows(strict_lower(M))   # J_n @ lower part, left triangular
    up = reverse_cols(strict_upper(M))    # upper part @ J_n, left triangular
    r_l = qs_order(lt_rpm(low, field, counter).pivots, n)
    r_u = qs_order(lt_rpm(up, field, counter).pivots, n)
    return QsOrders(r_l, r_u)


def qs_order_bruteforce(A: np.ndarray, field: PrimeField) -> int:
    """max rank(A[:k, :n-k]) for k = 1..n-1, straight from the rank oracle."""
    n = A.shape[0]
    best = 0
    for k in range(1, n):
        best = max(best, rank(A[:k, :n - k], field))
    return best


def qs_orders_bruteforce(M: np.ndarray, field: PrimeField) -> QsOrders:
    """Rank sweep over the strictly lower/upper blocks of a full matrix."""
    n = M.shape[0]
    r_l = qs_order_bruteforce(reverse_rows(strict_lower(M)), field)
    r_u = qs_order_bruteforce(reverse_cols(strict_upper(M)), field)
    return QsOrders(r_l, r_u)
