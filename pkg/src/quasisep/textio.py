"""Text formats for matrices and generators.

Matrix files: a `m n p` header line, then m rows of n base-10 residues
separated by single spaces, LF endings, no trailing whitespace.

Generator files start with a `BRUHAT n p r`, `COMPACT n p s r t` or
`TREE n p` header; indices inside are 0-based.  Loaders re-validate the
structural invariants so corrupted files are rejected or exposed.
"""

from __future__ import annotations

import numpy as np

from .field import Permutation, PrimeField
from .generators import (BruhatGenerator, CompactBruhatGenerator,
                         CompactEchelon, TreeGenerator, TreeLeaf, TreeNode,
                         tree_size)
from .pluq import PluqDecomposition


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(msg if line is None else f"line {line}: {msg}")


# ---------------------------------------------------------------------------
# matrices


def format_matrix(A: np.ndarray, field: PrimeField) -> str:
    m, n = A.shape
    lines = [f"{m} {n} {field.p}"]
    lines += [" ".join(str(int(v)) for v in row) for row in A]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str):
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty matrix file", 1)
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError("header must be 'm n p'", 1)
    try:
        m, n, p = (int(x) for x in head)
    except ValueError:
        raise ParseError("non-integer header", 1) from None
    field = PrimeField(p)
    if len(lines) < 1 + m:
        raise ParseError(f"expected {m} rows, found {len(lines) - 1}", len(lines))
    A = np.zeros((m, n), dtype=np.int64)
    for i in range(m):
        parts = lines[1 + i].split()
        if len(parts) != n:
            raise ParseError(f"expected {n} entries, found {len(parts)}", 2 + i)
        for j, tok in enumerate(parts):
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad residue {tok!r}", 2 + i) from None
            if not 0 <= v < p:
                raise ParseError(f"residue {v} out of range [0, {p})", 2 + i)
            A[i, j] = v
    return A, field


def write_matrix(path, A: np.ndarray, field: PrimeField) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(format_matrix(A, field))


def read_matrix(path):
    with open(path) as f:
        return parse_matrix(f.read())


# ---------------------------------------------------------------------------
# shared helpers


def _ints(line: str, line_no: int) -> list:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise ParseError("non-integer value", line_no) from None


class _Lines:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    def next(self) -> tuple:
        if self.pos >= len(self.lines):
            raise ParseError("unexpected end of file", self.pos + 1)
        self.pos += 1
        return self.lines[self.pos - 1], self.pos

    def next_ints(self, expect: int | None = None) -> list:
        line, no = self.next()
        vals = _ints(line, no)
        if expect is not None and len(vals) != expect:
            raise ParseError(f"expected {expect} integers, found {len(vals)}", no)
        return vals


def _check_residues(vals, p: int, line_no: int) -> None:
    for v in vals:
        if not 0 <= v < p:
            raise ParseError(f"residue {v} out of range [0, {p})", line_no)


# ---------------------------------------------------------------------------
# Bruhat generator


def format_bruhat(g: BruhatGenerator) -> str:
    lines = [f"BRUHAT {g.n} {g.field.p} {g.rank}"]
    for k, (i, j) in enumerate(g.pivots):
        lines.append(f"{i} {j}")
        lines.append(" ".join(str(int(v)) for v in g.lower_segs[k]))
        lines.append(" ".join(str(int(v)) for v in g.upper_segs[k]))
    return "\n".join(lines) + "\n"


def parse_bruhat(text: str) -> BruhatGenerator:
    src = _Lines(text)
    head, no = src.next()
    tok = head.split()
    if len(tok) != 4 or tok[0] != "BRUHAT":
        raise ParseError("expected 'BRUHAT n p r' header", no)
    n, p, r = (int(t) for t in tok[1:])
    field = PrimeField(p)
    pivots, lower, upper = [], [], []
    for _ in range(r):
        i, j = src.next_ints(2)
        seg_len = n - i - j - 1
        if seg_len <= 0:
            raise ParseError(f"pivot {(i, j)} outside the left region", src.pos)
        lo = src.next_ints(seg_len)
        _check_residues(lo, p, src.pos)
        up = src.next_ints(seg_len)
        _check_residues(up, p, src.pos)
        pivots.append((i, j))
        lower.append(np.array(lo, dtype=np.int64))
        upper.append(np.array(up, dtype=np.int64))
    order = sorted(range(r), key=lambda k: pivots[k])
    g = BruhatGenerator(n, field, [pivots[k] for k in order],
                        [lower[k] for k in order], [upper[k] for k in order])
    g.validate()
    return g


# ---------------------------------------------------------------------------
# compact Bruhat generator


def _format_echelon(c: CompactEchelon, out: list) -> None:
    out.append(" ".join(str(int(v)) for v in c.perm.img))
    out.append(" ".join(str(int(v)) for v in c.block_rows))
    for blk in c.diag_blocks:
        out.append(" ".join(str(int(v)) for v in blk.ravel()))
    for blk in c.sub_blocks:
        out.append(" ".join(str(int(v)) for v in blk.ravel()))
    out.append(" ".join(str(int(v)) for v in c.src_map))


def _parse_echelon(src: _Lines, n: int, s: int, r: int, t: int,
                   field: PrimeField, transposed: bool) -> CompactEchelon:
    img = src.next_ints(n)
    perm = Permutation(np.array(img, dtype=np.int64))
    block_rows = src.next_ints(t if t else None)
    if t == 0 and block_rows:
        raise ParseError("unexpected block rows for an empty generator", src.pos)
    if t and sum(block_rows) != n:
        raise ParseError("block rows must sum to n", src.pos)
    widths = [s] * t
    if t:
        widths[-1] = r - (t - 1) * s
    diag_blocks = []
    for b in range(t):
        k_b, w_b = block_rows[b], widths[b]
        if b < t - 1 and k_b < s:
            raise ParseError(f"block {b + 1} has {k_b} rows, needs >= {s}", src.pos)
        vals = src.next_ints(k_b * w_b)
        _check_residues(vals, field.p, src.pos)
        diag_blocks.append(np.array(vals, dtype=np.int64).reshape(k_b, w_b))
    sub_blocks = []
    for b in range(1, t):
        vals = src.next_ints(block_rows[b] * s)
        _check_residues(vals, field.p, src.pos)
        sub_blocks.append(np.array(vals, dtype=np.int64).reshape(block_rows[b], s))
    src_map = np.array(src.next_ints(r), dtype=np.int64)
    moves = _moves_from_src(src_map)
    ech_cols = np.array(img[:r], dtype=np.int64)
    return CompactEchelon(n, s, r, t, field, transposed, ech_cols, perm,
                          block_rows, diag_blocks, sub_blocks, moves, src_map)


def _moves_from_src(src_map: np.ndarray) -> list:
    """Rebuild a valid application order from the chain structure.

    Each parked column has one source; chains are independent, so sorting
    targets by chain depth reproduces an order equivalent to the original.
    """
    r = len(src_map)
    targets = [a for a in range(r) if src_map[a] != a]
    target_set = set(targets)
    depth = {}

    def chain_depth(a: int) -> int:
        if a in depth:
            return depth[a]
        s = int(src_map[a])
        d = chain_depth(s) + 1 if s in target_set else 1
        depth[a] = d
        return d

    return [(a, int(src_map[a])) for a in sorted(targets, key=chain_depth)]


def format_compact(cb: CompactBruhatGenerator) -> str:
    lines = [f"COMPACT {cb.n} {cb.field.p} {cb.s} {cb.rank} {cb.lower.t}"]
    _format_echelon(cb.lower, lines)
    _format_echelon(cb.upper, lines)
    lines.append(" ".join(str(int(v)) for v in cb.R.img))
    return "\n".join(lines) + "\n"


def parse_compact(text: str) -> CompactBruhatGenerator:
    src = _Lines(text)
    head, no = src.next()
    tok = head.split()
    if len(tok) != 6 or tok[0] != "COMPACT":
        raise ParseError("expected 'COMPACT n p s r t' header", no)
    n, p, s, r, t = (int(x) for x in tok[1:])
    field = PrimeField(p)
    lower = _parse_echelon(src, n, s, r, t, field, False)
    upper = _parse_echelon(src, n, s, r, t, field, True)
    rimg = src.next_ints(r)
    R = Permutation(np.array(rimg, dtype=np.int64))
    # Pivot (row, col) pairs follow from the two echelon orders and R:
    # the p-th column-ordered pivot has row upper.ech_cols[p] and sits at
    # row-order position R.img[p], whose column is lower.ech_cols there.
    pivots = sorted((int(upper.ech_cols[q]), int(lower.ech_cols[R.img[q]]))
                    for q in range(r))
    cb = CompactBruhatGenerator(n, s, field, pivots, lower, upper, R)
    for i, j in pivots:
        if i + j > n - 2:
            raise ParseError(f"pivot {(i, j)} outside the left region")
    return cb


# ---------------------------------------------------------------------------
# tree generator


def _format_tree_node(node, out: list) -> None:
    if isinstance(node, TreeLeaf):
        m = node.block.shape[0]
        out.append(f"LEAF {m}")
        out.append(" ".join(str(int(v)) for v in node.block.ravel()))
        return
    d = node.pluq
    out.append(f"NODE {d.m} {d.r}")
    out.append(" ".join(str(int(v)) for v in d.P.img))
    out.append(" ".join(str(int(v)) for v in d.Q.img))
    out.append(" ".join(str(int(v)) for v in d.L.ravel()))
    out.append(" ".join(str(int(v)) for v in d.U.ravel()))
    _format_tree_node(node.top_right, out)
    _format_tree_node(node.bottom_left, out)


def format_tree(g: TreeGenerator) -> str:
    lines = [f"TREE {g.n} {g.field.p} {g.leaf_size}"]
    _format_tree_node(g.root, lines)
    return "\n".join(lines) + "\n"


def _parse_tree_node(src: _Lines, field: PrimeField):
    head, no = src.next()
    tok = head.split()
    if tok[0] == "LEAF" and len(tok) == 2:
        m = int(tok[1])
        vals = src.next_ints(m * m)
        _check_residues(vals, field.p, src.pos)
        return TreeLeaf(np.array(vals, dtype=np.int64).reshape(m, m))
    if tok[0] == "NODE" and len(tok) == 3:
        h, r = int(tok[1]), int(tok[2])
        P = Permutation(np.array(src.next_ints(h), dtype=np.int64))
        Q = Permutation(np.array(src.next_ints(h), dtype=np.int64))
        lv = src.next_ints(h * r)
        _check_residues(lv, field.p, src.pos)
        uv = src.next_ints(r * h)
        _check_residues(uv, field.p, src.pos)
        L = np.array(lv, dtype=np.int64).reshape(h, r)
        U = np.array(uv, dtype=np.int64).reshape(r, h)
        d = PluqDecomposition(P, L, U, Q, r, field)
        top_right = _parse_tree_node(src, field)
        bottom_left = _parse_tree_node(src, field)
        return TreeNode(d, top_right, bottom_left)
    raise ParseError("expected 'LEAF m' or 'NODE h r'", no)


def parse_tree(text: str) -> TreeGenerator:
    src = _Lines(text)
    head, no = src.next()
    tok = head.split()
    if len(tok) != 4 or tok[0] != "TREE":
        raise ParseError("expected 'TREE n p leaf' header", no)
    n, p, leaf_size = int(tok[1]), int(tok[2]), int(tok[3])
    field = PrimeField(p)
    root = _parse_tree_node(src, field)
    return TreeGenerator(n, tree_size(root), root, field, leaf_size)


# ---------------------------------------------------------------------------
# dispatch


def format_generator(g) -> str:
    if isinstance(g, TreeGenerator):
        return format_tree(g)
    if isinstance(g, BruhatGenerator):
        return format_bruhat(g)
    if isinstance(g, CompactBruhatGenerator):
        return format_compact(g)
    raise TypeError(f"no serialization for {type(g).__name__}")


def parse_generator(text: str):
    head = text.split("\n", 1)[0].split()
    kind = head[0] if head else ""
    if kind == "BRUHAT":
        return parse_bruhat(text)
    if kind == "COMPACT":
        return parse_compact(text)
    if kind == "TREE":
        return parse_tree(text)
    raise ParseError(f"unknown generator header {kind!r}", 1)


def write_generator(path, g) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(format_generator(g))


def read_generator(path):
    with open(path) as f:
        return parse_generator(f.read())
