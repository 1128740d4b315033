"""Reconstruction, structured matrix-vector products and multiplication.

The Bruhat matvec uses one running prefix table per pivot row so that the
left-region truncation costs nothing beyond the stored coefficients.  The
left-triangular product recursion follows the quadrant scheme: two
recursive products plus PLUQ-against-subtree cross terms per level.
"""

from __future__ import annotations

import numpy as np

from .field import (OpCounter, PrimeField, mat_mul, mat_vec, reverse_cols,
                    reverse_rows)
from .generators import (BruhatGenerator, CompactBruhatGenerator, QsMatrix,
                         TreeGenerator, TreeLeaf, bruhat_reconstruct,
                         compact_reconstruct, compact_to_bruhat,
                         qs_from_dense, tree_dense, tree_generator)
from .pluq import PluqDecomposition


def reconstruct(g, counter: OpCounter | None = None) -> np.ndarray:
    """Densify any of the three left triangular representations."""
    if isinstance(g, TreeGenerator):
        return tree_dense(g.root, g.field, counter)[:g.n, :g.n]
    if isinstance(g, BruhatGenerator):
        return bruhat_reconstruct(g, counter)
    if isinstance(g, CompactBruhatGenerator):
        return compact_reconstruct(g, counter)
    raise TypeError(f"no reconstruction for {type(g).__name__}")


# ---------------------------------------------------------------------------
# matrix-vector products


def matvec_bruhat(g: BruhatGenerator, x: np.ndarray,
                  counter: OpCounter | None = None) -> np.ndarray:
    """y = Left(L E^T U) x without densifying.

    prefix_k(m) accumulates row r_k of U against x up to column m; entry
    y_i then needs one multiplication per stored nonzero of L, looked up
    at the truncation point m = n - i - 2 (0-based).
    """
    n = g.n
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (n,):
        raise ValueError("vector length mismatch")
    p = g.field.p
    y = [0] * n
    for k, (i, j) in enumerate(g.pivots):
        useg = g.upper_segs[k]
        lseg = g.lower_segs[k]
        prefix = np.zeros(len(useg), dtype=np.int64)
        acc = 0
        for t in range(len(useg)):
            u = int(useg[t])
            if u:
                acc = (acc + u * int(x[j + t])) % p
                if counter is not None:
                    counter.muls += 1
                    counter.adds += 1
            prefix[t] = acc
        for d in range(len(lseg)):
            lv = int(lseg[d])
            if lv == 0:
                continue
            row = i + d
            y[row] = (y[row] + lv * int(prefix[n - row - 2 - j])) % p
            if counter is not None:
                counter.muls += 1
                counter.adds += 1
    return np.array(y, dtype=np.int64)


def _tree_matvec(node, x: np.ndarray, field: PrimeField,
                 counter: OpCounter | None) -> np.ndarray:
    if isinstance(node, TreeLeaf):
        return mat_vec(node.block, x, field, counter)
    d = node.pluq
    h = d.m
    x1, x2 = x[:h], x[h:]
    t = d.Q.apply_vec(x1)
    t = mat_vec(d.U, t, field, counter)
    t = mat_vec(d.L, t, field, counter)
    y1 = (d.P.apply_vec(t) + _tree_matvec(node.top_right, x2, field, counter)) % field.p
    if counter is not None:
        counter.adds += h
    y2 = _tree_matvec(node.bottom_left, x1, field, counter)
    return np.concatenate([y1, y2])


def matvec_tree(g: TreeGenerator, x: np.ndarray,
                counter: OpCounter | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (g.n,):
        raise ValueError("vector length mismatch")
    xp = np.zeros(g.size, dtype=np.int64)
    xp[:g.n] = x
    return _tree_matvec(g.root, xp, g.field, counter)[:g.n]


def _matvec_rep(rep, x: np.ndarray, counter: OpCounter | None) -> np.ndarray:
    if isinstance(rep, TreeGenerator):
        return matvec_tree(rep, x, counter)
    if isinstance(rep, BruhatGenerator):
        return matvec_bruhat(rep, x, counter)
    if isinstance(rep, CompactBruhatGenerator):
        return matvec_bruhat(compact_to_bruhat(rep), x, counter)
    raise TypeError(f"no matvec for {type(rep).__name__}")


def matvec_qs(M: QsMatrix, x: np.ndarray,
              counter: OpCounter | None = None) -> np.ndarray:
    """y = M x via the split J (lower rep) x + diag * x + (upper rep) (J x)."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (M.n,):
        raise ValueError("vector length mismatch")
    p = M.field.p
    low = _matvec_rep(M.lower, x, counter)[::-1]
    up = _matvec_rep(M.upper, x[::-1].copy(), counter)
    if counter is not None:
        counter.muls += M.n
        counter.adds += 2 * M.n
    return (low + up + M.diag * x) % p


# ---------------------------------------------------------------------------
# products against tree generators


def _flat_times(node, F: np.ndarray, field: PrimeField,
                counter: OpCounter | None) -> np.ndarray:
    """F @ A for a node of the tree (F is k x m)."""
    if isinstance(node, TreeLeaf):
        return mat_mul(F, node.block, field, counter)
    d = node.pluq
    h = d.m
    Fl, Fr = F[:, :h], F[:, h:]
    X = d.P.apply_cols(Fl)
    X = mat_mul(X, d.L, field, counter)
    X = mat_mul(X, d.U, field, counter)
    X = d.Q.apply_cols(X)
    left = (X + _flat_times(node.bottom_left, Fr, field, counter)) % field.p
    if counter is not None:
        counter.adds += X.size
    right = _flat_times(node.top_right, Fl, field, counter)
    return np.hstack([left, right])


def _times_tall(node, F: np.ndarray, field: PrimeField,
                counter: OpCounter | None) -> np.ndarray:
    """A @ F for a node of the tree (F is m x k)."""
    if isinstance(node, TreeLeaf):
        return mat_mul(node.block, F, field, counter)
    d = node.pluq
    h = d.m
    Ft, Fb = F[:h], F[h:]
    X = d.Q.apply_rows(Ft)
    X = mat_mul(d.U, X, field, counter)
    X = mat_mul(d.L, X, field, counter)
    X = d.P.apply_rows(X)
    top = (X + _times_tall(node.top_right, Fb, field, counter)) % field.p
    if counter is not None:
        counter.adds += X.size
    bottom = _times_tall(node.bottom_left, Ft, field, counter)
    return np.vstack([top, bottom])


def mul_flat_by_lt(F: np.ndarray, g: TreeGenerator,
                   counter: OpCounter | None = None) -> np.ndarray:
    """F @ reconstruct(g) for a flat F, recursing column-split by quadrant."""
    if F.shape[1] != g.n:
        raise ValueError("dimension mismatch in mul_flat_by_lt")
    Fp = np.zeros((F.shape[0], g.size), dtype=np.int64)
    Fp[:, :g.n] = F
    return _flat_times(g.root, Fp, g.field, counter)[:, :g.n]


def mul_lt_by_flat(g: TreeGenerator, F: np.ndarray,
                   counter: OpCounter | None = None) -> np.ndarray:
    """reconstruct(g) @ F for a tall F."""
    if F.shape[0] != g.n:
        raise ValueError("dimension mismatch in mul_lt_by_flat")
    Fp = np.zeros((g.size, F.shape[1]), dtype=np.int64)
    Fp[:g.n] = F
    return _times_tall(g.root, Fp, g.field, counter)[:g.n]


def mul_pluq_by_lt(d: PluqDecomposition, g: TreeGenerator,
                   counter: OpCounter | None = None,
                   middle_reversed: bool = False) -> np.ndarray:
    """(P L U Q) @ A, or (P L U Q) @ J @ A when middle_reversed."""
    if d.n != g.n:
        raise ValueError("dimension mismatch in mul_pluq_by_lt")
    W = d.Q.apply_cols(d.U)
    if middle_reversed:
        W = W[:, ::-1].copy()
    X = mul_flat_by_lt(W, g, counter)
    X = mat_mul(d.L, X, d.field, counter)
    return d.P.apply_rows(X)


def mul_lt_by_pluq(g: TreeGenerator, d: PluqDecomposition,
                   counter: OpCounter | None = None,
                   middle_reversed: bool = False) -> np.ndarray:
    """A @ (P L U Q), or A @ J @ (P L U Q) when middle_reversed."""
    if g.n != d.m:
        raise ValueError("dimension mismatch in mul_lt_by_pluq")
    V = d.P.apply_rows(d.L)
    if middle_reversed:
        V = V[::-1].copy()
    X = mul_lt_by_flat(g, V, counter)
    X = mat_mul(X, d.U, d.field, counter)
    return d.Q.apply_cols(X)


def _pluq_times_pluq(da: PluqDecomposition, db: PluqDecomposition,
                     field: PrimeField, counter: OpCounter | None) -> np.ndarray:
    W = da.Q.apply_cols(da.U)
    V = db.P.apply_rows(db.L)
    M = mat_mul(W, V, field, counter)
    X = mat_mul(da.L, M, field, counter)
    X = mat_mul(X, db.U, field, counter)
    return db.Q.apply_cols(da.P.apply_rows(X))


def _pluq_times_node(d: PluqDecomposition, sub, field: PrimeField,
                     counter: OpCounter | None, rev: bool) -> np.ndarray:
    W = d.Q.apply_cols(d.U)
    if rev:
        W = W[:, ::-1].copy()
    X = _flat_times(sub, W, field, counter)
    X = mat_mul(d.L, X, field, counter)
    return d.P.apply_rows(X)


def _node_times_pluq(sub, d: PluqDecomposition, field: PrimeField,
                     counter: OpCounter | None, rev: bool) -> np.ndarray:
    V = d.P.apply_rows(d.L)
    if rev:
        V = V[::-1].copy()
    X = _times_tall(sub, V, field, counter)
    X = mat_mul(X, d.U, field, counter)
    return d.Q.apply_cols(X)


def _lt_times_lt(a, b, field: PrimeField, counter: OpCounter | None,
                 rev: bool) -> np.ndarray:
    """Dense A @ B (rev=False) or A @ J @ B (rev=True) on tree nodes."""
    if isinstance(a, TreeLeaf) or isinstance(b, TreeLeaf):
        Ad = a.block if isinstance(a, TreeLeaf) else tree_dense(a, field, counter)
        Bd = b.block if isinstance(b, TreeLeaf) else tree_dense(b, field, counter)
        if rev:
            Bd = Bd[::-1]
        return mat_mul(Ad, Bd, field, counter)
    da, db = a.pluq, b.pluq
    h = da.m
    p = field.p
    out = np.zeros((2 * h, 2 * h), dtype=np.int64)
    if not rev:
        tl = (_pluq_times_pluq(da, db, field, counter)
              + _lt_times_lt(a.top_right, b.bottom_left, field, counter, False)) % p
        out[:h, :h] = tl
        out[:h, h:] = _pluq_times_node(da, b.top_right, field, counter, False)
        out[h:, :h] = _node_times_pluq(a.bottom_left, db, field, counter, False)
        out[h:, h:] = _lt_times_lt(a.bottom_left, b.top_right, field, counter, False)
    else:
        # J @ B swaps B's quadrant roles: [[J B3, 0], [J B1, J B2]].
        tl = (_pluq_times_node(da, b.bottom_left, field, counter, True)
              + _node_times_pluq(a.top_right, db, field, counter, True)) % p
        out[:h, :h] = tl
        out[:h, h:] = _lt_times_lt(a.top_right, b.top_right, field, counter, True)
        out[h:, :h] = _lt_times_lt(a.bottom_left, b.bottom_left, field, counter, True)
    if counter is not None:
        counter.adds += h * h
    return out


def mul_lt_lt(gA: TreeGenerator, gB: TreeGenerator,
              counter: OpCounter | None = None,
              middle_reversed: bool = False) -> np.ndarray:
    """Dense product of two represented left triangular matrices.

    middle_reversed computes A @ J_n @ B.  When n is not a power of two
    the J_n of the represented size differs from the padded one, so B is
    re-embedded bottom-left (an uncounted conversion) before recursing.
    """
    if gA.n != gB.n:
        raise ValueError("size mismatch in mul_lt_lt")
    if gA.field != gB.field:
        raise ValueError("field mismatch in mul_lt_lt")
    n, N = gA.n, gA.size
    field = gA.field
    rootB = gB.root
    if middle_reversed and N != n:
        Bdense = reconstruct(gB)
        Bemb = np.zeros((N, N), dtype=np.int64)
        Bemb[N - n:, :n] = Bdense
        rootB = tree_generator(Bemb, field, None, gB.leaf_size).root
    return _lt_times_lt(gA.root, rootB, field, counter, middle_reversed)[:n, :n]


# ---------------------------------------------------------------------------
# full quasiseparable product


def qs_to_dense(M: QsMatrix, counter: OpCounter | None = None) -> np.ndarray:
    """Densify: J @ rep(lower) puts the strict lower part back in place,
    rep(upper) @ J the strict upper part."""
    low = reverse_rows(reconstruct(M.lower, counter))
    up = reverse_cols(reconstruct(M.upper, counter))
    if counter is not None:
        counter.adds += 2 * M.n * M.n
    return (low + up + np.diag(M.diag)) % M.field.p


def _as_tree(M: QsMatrix) -> QsMatrix:
    if M.rep_kind == "tree":
        return M
    return qs_from_dense(qs_to_dense(M), "tree", M.field)


def mul_qs_qs(A: QsMatrix, B: QsMatrix,
              counter: OpCounter | None = None) -> np.ndarray:
    """Exact dense product of two quasiseparable matrices.

    The four triangular cross products reduce to left triangular products
    with the outer J factors applied as row/column reversals of the dense
    results; the inner J factors either cancel or flip the recursion mode.
    Non-tree operands are converted first (conversion outside the counter).
    """
    if A.n != B.n:
        raise ValueError("size mismatch in mul_qs_qs")
    if A.field != B.field:
        raise ValueError("field mismatch in mul_qs_qs")
    field = A.field
    p = field.p
    n = A.n
    At, Bt = _as_tree(A), _as_tree(B)

    ll = reverse_rows(mul_lt_lt(At.lower, Bt.lower, counter, middle_reversed=True))
    lu = reverse_rows(reverse_cols(mul_lt_lt(At.lower, Bt.upper, counter)))
    ul = mul_lt_lt(At.upper, Bt.lower, counter)
    uu = reverse_cols(mul_lt_lt(At.upper, Bt.upper, counter, middle_reversed=True))

    Bd = qs_to_dense(Bt, counter)
    Ad = qs_to_dense(At, counter)
    diag_a = (At.diag[:, None] * Bd) % p
    off_a = (Ad - np.diag(At.diag)) % p
    diag_b = (off_a * Bt.diag[None, :]) % p
    if counter is not None:
        counter.muls += 2 * n * n
        counter.adds += 5 * n * n
    return (ll + lu + ul + uu + diag_a + diag_b) % p
