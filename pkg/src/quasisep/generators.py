"""Rank-structured representations of left triangular matrices.

Three representations are built here:

* a binary tree of PLUQ decompositions (recurse on the top-right and
  bottom-left quadrants, factor the top-left one),
* the sparse (L, E, U) triple made of the left parts of the permuted
  PLUQ factors, stored as one column/row segment per pivot,
* its block compression into a block-diagonal D plus sub-diagonal S with
  a column-relocation map T and an echelon permutation.

`random_qs` fabricates quasiseparable test instances and `qs_from_dense`
splits a full matrix into diagonal plus two represented triangles.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import (OpCounter, Permutation, PrimeField, is_left_triangular,
                    left_part, mat_mul, next_pow2, pad_top_left, reverse_cols,
                    reverse_rows, strict_lower, strict_upper, trsm_unit_lower,
                    trsm_upper_right)
from .orders import qs_order
from .pluq import PluqDecomposition, pluq_rpm


class CompressionError(RuntimeError):
    """No free column available while packing the sub-diagonal blocks.

    Cannot happen when the block width is a true bound on the
    quasiseparable order; surfacing it beats silent corruption.
    """


# ---------------------------------------------------------------------------
# binary tree of PLUQ decompositions


@dataclass
class TreeLeaf:
    block: np.ndarray  # dense left triangular block


@dataclass
class TreeNode:
    pluq: PluqDecomposition          # of the top-left quadrant
    top_right: "TreeNode | TreeLeaf"
    bottom_left: "TreeNode | TreeLeaf"


def tree_size(node) -> int:
    if isinstance(node, TreeLeaf):
        return node.block.shape[0]
    return 2 * node.pluq.m


@dataclass
class TreeGenerator:
    n: int          # represented size
    size: int       # power-of-two size of the padded root
    root: "TreeNode | TreeLeaf"
    field: PrimeField
    leaf_size: int

    def stored_elements(self) -> int:
        """Field coefficients the representation needs.

        A node stores the nontrivial entries of its L and U factors
        (2*h*r - r**2 for quadrant size h and rank r); a leaf stores the
        m*(m-1)/2 slots of its left triangular region.
        """
        def walk(node) -> int:
            if isinstance(node, TreeLeaf):
                m = node.block.shape[0]
                return m * (m - 1) // 2
            h = node.pluq.m
            r = node.pluq.r
            return 2 * h * r - r * r + walk(node.top_right) + walk(node.bottom_left)
        return walk(self.root)


def tree_generator(A: np.ndarray, field: PrimeField,
                   counter: OpCounter | None = None,
                   leaf_size: int = 4) -> TreeGenerator:
    """Binary-tree PLUQ representation of a left triangular matrix."""
    n = A.shape[0]
    if not is_left_triangular(A):
        raise ValueError("tree_generator expects a left triangular matrix")
    N = next_pow2(max(n, 1))
    W = pad_top_left(np.asarray(A, dtype=np.int64) % field.p, N)

    def build(B: np.ndarray):
        m = B.shape[0]
        if m <= leaf_size:
            return TreeLeaf(B.copy())
        h = m // 2
        return TreeNode(pluq_rpm(B[:h, :h], field, counter),
                        build(B[:h, h:]), build(B[h:, :h]))

    return TreeGenerator(n, N, build(W), field, leaf_size)


def tree_dense(node, field: PrimeField,
               counter: OpCounter | None = None) -> np.ndarray:
    """Densify a tree node (padded coordinates)."""
    if isinstance(node, TreeLeaf):
        return node.block.copy()
    h = node.pluq.m
    out = np.zeros((2 * h, 2 * h), dtype=np.int64)
    out[:h, :h] = node.pluq.reconstruct(counter)
    out[:h, h:] = tree_dense(node.top_right, field, counter)
    out[h:, :h] = tree_dense(node.bottom_left, field, counter)
    return out


# ---------------------------------------------------------------------------
# Bruhat generator


@dataclass
class BruhatGenerator:
    """Sparse triple (L, E, U) of the left parts of a profile-revealing PLUQ.

    For the pivot at (i, j) (0-based), the lower segment holds column j of
    L on rows i .. n-j-2 and the upper segment holds row i of U on columns
    j .. n-i-2; both have length n - i - j - 1 and the lower one leads with 1.
    """

    n: int
    field: PrimeField
    pivots: list = dc_field(default_factory=list)       # 0-based, sorted by row
    lower_segs: list = dc_field(default_factory=list)
    upper_segs: list = dc_field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def seg_len(self, k: int) -> int:
        i, j = self.pivots[k]
        return self.n - i - j - 1

    def stored_elements(self) -> int:
        return 2 * sum(self.seg_len(k) for k in range(self.rank))

    def nnz_lower(self) -> int:
        return int(sum(np.count_nonzero(s) for s in self.lower_segs))

    def nnz_upper(self) -> int:
        return int(sum(np.count_nonzero(s) for s in self.upper_segs))

    def dense_l(self) -> np.ndarray:
        L = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), seg in zip(self.pivots, self.lower_segs):
            L[i:i + len(seg), j] = seg
        return L

    def dense_u(self) -> np.ndarray:
        U = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), seg in zip(self.pivots, self.upper_segs):
            U[i, j:j + len(seg)] = seg
        return U

    def dense_e(self) -> np.ndarray:
        E = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.pivots:
            E[i, j] = 1
        return E

    def validate(self) -> None:
        if sorted(self.pivots) != self.pivots:
            raise ValueError("pivots must be sorted by row")
        rows = {i for i, _ in self.pivots}
        cols = {j for _, j in self.pivots}
        if len(rows) != self.rank or len(cols) != self.rank:
            raise ValueError("pivot rows/columns must be distinct")
        for k, (i, j) in enumerate(self.pivots):
            if i + j > self.n - 2 or i < 0 or j < 0:
                raise ValueError(f"pivot {(i, j)} outside the left region")
            if len(self.lower_segs[k]) != self.seg_len(k) \
                    or len(self.upper_segs[k]) != self.seg_len(k):
                raise ValueError("segment length mismatch")
            if self.lower_segs[k][0] != 1:
                raise ValueError("lower segment must lead with 1")
            if self.upper_segs[k][0] == 0:
                raise ValueError("upper segment must lead with a nonzero")
            for seg in (self.lower_segs[k], self.upper_segs[k]):
                if (seg < 0).any() or (seg >= self.field.p).any():
                    raise ValueError("segment value out of range")


def _lt_bruhat_rec(A: np.ndarray, field: PrimeField, counter: OpCounter | None):
    """Returns (pivots, dense L, dense U) in the padded coordinates."""
    n = A.shape[0]
    if n == 1:
        z = np.zeros((1, 1), dtype=np.int64)
        return [], z, z.copy()
    h = n // 2
    p = field.p
    d = pluq_rpm(A[:h, :h], field, counter)
    r1 = d.r
    rp = d.P.img
    cp = d.Q.inverse().img
    pivots = list(zip(rp[:r1].tolist(), cp[:r1].tolist()))

    B = A[:h, h:][rp]
    C = A[h:, :h][:, cp]
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

    piv2, L2, U2 = _lt_bruhat_rec(H, field, counter)
    piv3, L3, U3 = _lt_bruhat_rec(I, field, counter)

    pivots += [(i, j + h) for i, j in piv2]
    pivots += [(i + h, j) for i, j in piv3]

    # L factor: top-left gets P1 [L1; M1 | 0] Q1 whole (the global left
    # region covers it), bottom-left gets Left([E | 0] Q1) plus the
    # recursive part; supports are disjoint.
    KL = np.zeros((h, h), dtype=np.int64)
    KL[:, :r1] = d.L
    KL = d.Q.apply_cols(d.P.apply_rows(KL))
    EL = np.zeros((h, h), dtype=np.int64)
    EL[:, :r1] = E
    EL = d.Q.apply_cols(EL)
    Lfull = np.zeros((n, n), dtype=np.int64)
    Lfull[:h, :h] = KL
    Lfull[:h, h:] = L2
    Lfull[h:, :h] = left_part(EL) + L3

    # U factor: top-left gets P1 [U1 V1; 0] Q1, top-right Left(P1 [D; 0])
    # plus the recursive part, bottom-left the recursive part.
    KU = np.zeros((h, h), dtype=np.int64)
    KU[:r1] = d.U
    KU = d.Q.apply_cols(d.P.apply_rows(KU))
    DU = np.zeros((h, h), dtype=np.int64)
    DU[:r1] = D
    DU = d.P.apply_rows(DU)
    Ufull = np.zeros((n, n), dtype=np.int64)
    Ufull[:h, :h] = KU
    Ufull[:h, h:] = left_part(DU) + U2
    Ufull[h:, :h] = U3

    return pivots, Lfull, Ufull


def lt_bruhat(A: np.ndarray, field: PrimeField,
              counter: OpCounter | None = None) -> BruhatGenerator:
    """Bruhat generator of the left triangular part of A.

    Pads to a power of two, runs the recursion, then keeps the pivots in
    the original left region and crops their segments; discarded pivots
    cannot contribute to any entry of the original region.
    """
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("lt_bruhat expects a square matrix")
    W = pad_top_left(np.asarray(A, dtype=np.int64) % field.p, next_pow2(max(n, 1)))
    pivots, Lfull, Ufull = _lt_bruhat_rec(W, field, counter)
    Lfull = Lfull[:n, :n]
    Ufull = Ufull[:n, :n]
    keep = sorted((i, j) for i, j in pivots if i + j <= n - 2)
    lower = [Lfull[i:n - j - 1, j].copy() for i, j in keep]
    upper = [Ufull[i, j:n - i - 1].copy() for i, j in keep]
    g = BruhatGenerator(n, field, keep, lower, upper)
    g.validate()
    return g


def bruhat_reconstruct(g: BruhatGenerator, counter: OpCounter | None = None) -> np.ndarray:
    """Left(L E^T U) as a dense matrix."""
    X = np.zeros((g.n, g.n), dtype=np.int64)
    U = g.dense_u()
    for i, j in g.pivots:
        X[j] = U[i]
    return left_part(mat_mul(g.dense_l(), X, g.field, counter))


# ---------------------------------------------------------------------------
# compact Bruhat generator


@dataclass
class CompactEchelon:
    """Block compression (D, S, T, perm) of one echelon side.

    `transposed` marks the upper side, whose data is stored for U^T so the
    same column-based layout serves both factors.  `moves` records the
    column relocations in application order; `src_map[a]` names the column
    whose overflow was parked at echelon column a (or a itself).
    """

    n: int
    s: int
    r: int
    t: int
    field: PrimeField
    transposed: bool
    ech_cols: np.ndarray          # original column of echelon column q
    perm: Permutation             # full n-permutation, echelon columns first
    block_rows: list              # k_i, i = 1..t
    diag_blocks: list             # D_i, k_i x w_i (w_t may be ragged)
    sub_blocks: list              # S_i, k_i x s, i = 2..t
    moves: list                   # ordered (target, source) pairs
    src_map: np.ndarray

    @property
    def widths(self) -> list:
        if self.t == 0:
            return []
        w = [self.s] * self.t
        w[-1] = self.r - (self.t - 1) * self.s
        return w

    def stored_elements(self) -> int:
        return int(sum(b.size for b in self.diag_blocks)
                   + sum(b.size for b in self.sub_blocks))

    def dense_cr(self) -> np.ndarray:
        """D + S T as an n x r matrix in echelon column order."""
        C = np.zeros((self.n, self.r), dtype=np.int64)
        starts = np.cumsum([0] + self.block_rows)
        col = 0
        for b, blk in enumerate(self.diag_blocks):
            C[starts[b]:starts[b + 1], col:col + blk.shape[1]] = blk
            col += blk.shape[1]
        S = np.zeros((self.n, self.r), dtype=np.int64)
        for b, blk in enumerate(self.sub_blocks, start=1):
            cj = (b - 1) * self.s
            S[starts[b]:starts[b + 1], cj:cj + blk.shape[1]] = blk
        for target, source in reversed(self.moves):
            S[:, source] = (S[:, source] + S[:, target]) % self.field.p
            S[:, target] = 0
        return (C + S) % self.field.p


def decompress_echelon(c: CompactEchelon) -> np.ndarray:
    """Exact inverse of the compression: the dense L (or U) factor."""
    C = c.dense_cr()
    out = np.zeros((c.n, c.n), dtype=np.int64)
    out[:, c.ech_cols] = C
    return out.T.copy() if c.transposed else out


def _compress_columns(n: int, field: PrimeField, leads: list, cols: list,
                      segs: list, s: int, transposed: bool) -> CompactEchelon:
    """Shared worker: columns (lead row, original col, segment) sorted by lead."""
    r = len(leads)
    order = np.argsort(np.array(leads, dtype=np.int64)) if r else np.array([], dtype=np.int64)
    ech_cols = np.array([cols[k] for k in order], dtype=np.int64)
    rest = np.setdiff1d(np.arange(n, dtype=np.int64), ech_cols)
    perm = Permutation(np.concatenate([ech_cols, rest]))
    if r == 0:
        return CompactEchelon(n, s, 0, 0, field, transposed, ech_cols, perm,
                              [], [], [], [], np.array([], dtype=np.int64))
    if s <= 0:
        raise ValueError("block width must be positive when pivots exist")

    C = np.zeros((n, r), dtype=np.int64)
    for q, k in enumerate(order):
        seg = segs[k]
        C[leads[k]:leads[k] + len(seg), q] = seg
    lead_sorted = [leads[k] for k in order]

    t = -(-r // s)
    starts = [0] + [lead_sorted[b * s] for b in range(1, t)] + [n]
    block_rows = [starts[b + 1] - starts[b] for b in range(t)]
    widths = [s] * t
    widths[-1] = r - (t - 1) * s

    diag_blocks = []
    for b in range(t):
        cj = b * s
        blk = C[starts[b]:starts[b + 1], cj:cj + widths[b]].copy()
        diag_blocks.append(blk)
        C[starts[b]:starts[b + 1], cj:cj + widths[b]] = 0

    moves = []
    src_map = np.arange(r, dtype=np.int64)
    for b in range(3, t + 1):          # 1-based block index, as in the loop i=3..t
        lo = starts[b - 1]
        src_cols = range((b - 3) * s, (b - 3) * s + widths[b - 3])
        tgt_cols = range((b - 2) * s, (b - 2) * s + s)
        for j in src_cols:
            if not C[lo:, j].any():
                continue
            free = [k for k in tgt_cols if not C[lo:, k].any()]
            if not free:
                raise CompressionError(
                    f"no zero column in block column {b - 1}; "
                    f"is s={s} really an order bound?")
            k = free[0]
            C[lo:, k] = C[lo:, j]
            C[lo:, j] = 0
            moves.append((k, j))
            src_map[k] = j

    sub_blocks = []
    for b in range(1, t):
        cj = (b - 1) * s
        sub_blocks.append(C[starts[b]:starts[b + 1], cj:cj + s].copy())
        C[starts[b]:starts[b + 1], cj:cj + s] = 0
    if C.any():
        raise CompressionError("content left outside the sub-diagonal blocks")

    return CompactEchelon(n, s, r, t, field, transposed, ech_cols, perm,
                          block_rows, diag_blocks, sub_blocks, moves, src_map)


def compress_echelon(g: BruhatGenerator, s: int) -> CompactEchelon:
    """Compress the lower factor of a Bruhat generator with block width s."""
    leads = [i for i, _ in g.pivots]
    cols = [j for _, j in g.pivots]
    return _compress_columns(g.n, g.field, leads, cols, g.lower_segs, s, False)


def compress_echelon_upper(g: BruhatGenerator, s: int) -> CompactEchelon:
    """Same compression run on U^T; the result is flagged transposed."""
    leads = [j for _, j in g.pivots]
    cols = [i for i, _ in g.pivots]
    return _compress_columns(g.n, g.field, leads, cols, g.upper_segs, s, True)


@dataclass
class CompactBruhatGenerator:
    n: int
    s: int
    field: PrimeField
    pivots: list
    lower: CompactEchelon
    upper: CompactEchelon
    R: Permutation    # leading r x r block of Q^T E^T P^T

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def stored_elements(self) -> int:
        return self.lower.stored_elements() + self.upper.stored_elements()


def compact_bruhat(g: BruhatGenerator, s: int) -> CompactBruhatGenerator:
    """Compact Bruhat generator: both compressed sides plus the pivot link R."""
    lower = compress_echelon(g, s)
    upper = compress_echelon_upper(g, s)
    r = g.rank
    by_col = sorted(range(r), key=lambda k: g.pivots[k][1])
    R = Permutation(np.array(by_col, dtype=np.int64))
    return CompactBruhatGenerator(g.n, s, g.field, list(g.pivots), lower, upper, R)


def compact_reconstruct(cb: CompactBruhatGenerator,
                        counter: OpCounter | None = None) -> np.ndarray:
    """Left((D_L + S_L T_L) R (D_U + T_U S_U)); the Left projection is the
    erratum fix to the plain three-factor product."""
    CL = cb.lower.dense_cr()
    CU = cb.upper.dense_cr().T.copy()
    return left_part(mat_mul(cb.R.apply_cols(CL), CU, cb.field, counter))


def compact_to_bruhat(cb: CompactBruhatGenerator) -> BruhatGenerator:
    """Re-extract per-pivot segments from the decompressed factors."""
    Ld = decompress_echelon(cb.lower)
    Ud = decompress_echelon(cb.upper)
    n = cb.n
    lower = [Ld[i:n - j - 1, j].copy() for i, j in cb.pivots]
    upper = [Ud[i, j:n - i - 1].copy() for i, j in cb.pivots]
    return BruhatGenerator(n, cb.field, list(cb.pivots), lower, upper)


# ---------------------------------------------------------------------------
# instance construction and full quasiseparable matrices


def random_qs(n: int, r_l: int, r_u: int, seed: int, field: PrimeField) -> np.ndarray:
    """Random matrix whose lower/upper orders are at most (r_l, r_u).

    Low-rank outer products are masked to the strict triangles, so the
    Definition-1 bounds hold by construction; equality with the targets is
    only a high-probability event and is never assumed by tests.
    """
    if not (0 <= r_l < max(n, 1) and 0 <= r_u < max(n, 1)):
        raise ValueError("target orders must be smaller than n")
    rng = np.random.default_rng(seed)
    p = field.p
    low = mat_mul(rng.integers(0, p, (n, r_l), dtype=np.int64),
                  rng.integers(0, p, (r_l, n), dtype=np.int64), field)
    up = mat_mul(rng.integers(0, p, (n, r_u), dtype=np.int64),
                 rng.integers(0, p, (r_u, n), dtype=np.int64), field)
    diag = rng.integers(0, p, n, dtype=np.int64)
    return (strict_lower(low) + np.diag(diag) + strict_upper(up)) % p


def random_left_triangular(n: int, s: int, seed: int, field: PrimeField) -> np.ndarray:
    """Left triangular matrix of quasiseparable order at most s."""
    rng = np.random.default_rng(seed)
    p = field.p
    X = rng.integers(0, p, (n, s), dtype=np.int64)
    Y = rng.integers(0, p, (s, n), dtype=np.int64)
    return left_part(mat_mul(X, Y, field))


REP_KINDS = ("tree", "bruhat", "compact")


@dataclass
class QsMatrix:
    """diag + two represented left triangular parts (J L and U J)."""

    n: int
    field: PrimeField
    rep_kind: str
    diag: np.ndarray
    lower: object   # representation of J_n @ strict_lower(M)
    upper: object   # representation of strict_upper(M) @ J_n


def _represent(A: np.ndarray, kind: str, field: PrimeField,
               counter: OpCounter | None):
    if kind == "tree":
        return tree_generator(A, field, counter)
    g = lt_bruhat(A, field, counter)
    if kind == "bruhat":
        return g
    s = qs_order(g.pivots, g.n)
    return compact_bruhat(g, s)


def qs_from_dense(M: np.ndarray, rep_kind: str, field: PrimeField,
                  counter: OpCounter | None = None) -> QsMatrix:
    """Split a square matrix into diagonal plus two represented triangles."""
    if rep_kind not in REP_KINDS:
        raise ValueError(f"rep_kind must be one of {REP_KINDS}")
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("qs_from_dense expects a square matrix")
    M = np.asarray(M, dtype=np.int64) % field.p
    low = reverse_rows(strict_lower(M))
    up = reverse_cols(strict_upper(M))
    return QsMatrix(n, field, rep_kind, M.diagonal().copy(),
                    _represent(low, rep_kind, field, counter),
                    _represent(up, rep_kind, field, counter))
