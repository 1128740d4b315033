"""Word-size prime fields, dense matrix kernels and permutations.

Matrices are numpy int64 arrays holding canonical residues in [0, p).
Every kernel reduces mod p eagerly so all intermediates stay below 2**63.
Row/column indices are 0-based throughout the code; the docstrings spell
out the 1-based convention where a definition is usually stated that way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WORD_BOUND = 1 << 31
_INT64_MAX = (1 << 63) - 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field Z/pZ for a prime p with 2 <= p < 2**31."""

    def __init__(self, p: int):
        p = int(p)
        if not 2 <= p < WORD_BOUND:
            raise ValueError(f"modulus must lie in [2, 2**31), got {p}")
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def reduce(self, A: np.ndarray) -> np.ndarray:
        return np.asarray(A, dtype=np.int64) % self.p


@dataclass
class OpCounter:
    """Explicit field-operation tally; passed by the caller, never global."""

    adds: int = 0
    muls: int = 0
    invs: int = 0

    def count_matmul(self, m: int, k: int, n: int) -> None:
        """Classical m*k*n product counts."""
        self.muls += m * k * n
        self.adds += m * n * max(k - 1, 0)

    def merge(self, other: "OpCounter") -> None:
        self.adds += other.adds
        self.muls += other.muls
        self.invs += other.invs

    def total(self) -> int:
        return self.adds + self.muls + self.invs


class Permutation:
    """Permutation of {0..n-1}, as the 0/1 matrix with a 1 at (img[j], j)."""

    def __init__(self, img):
        img = np.asarray(img, dtype=np.int64)
        if img.ndim != 1:
            raise ValueError("permutation image must be a 1-d array")
        n = img.shape[0]
        if n and (np.sort(img) != np.arange(n)).any():
            raise ValueError("permutation image is not a bijection")
        self.img = img

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(np.arange(n, dtype=np.int64))

    def __len__(self) -> int:
        return self.img.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.img, other.img)

    def __repr__(self) -> str:
        return f"Permutation({self.img.tolist()})"

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.img)
        inv[self.img] = np.arange(len(self), dtype=np.int64)
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """Matrix product self * other."""
        return Permutation(self.img[other.img])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.img, np.arange(len(self))))

    # In every helper below, self plays the role of its permutation matrix M.

    def apply_rows(self, A: np.ndarray) -> np.ndarray:
        """M @ A."""
        out = np.empty_like(A)
        out[self.img] = A
        return out

    def apply_rows_inv(self, A: np.ndarray) -> np.ndarray:
        """M.T @ A."""
        return A[self.img]

    def apply_cols(self, A: np.ndarray) -> np.ndarray:
        """A @ M."""
        return A[:, self.img]

    def apply_cols_inv(self, A: np.ndarray) -> np.ndarray:
        """A @ M.T."""
        out = np.empty_like(A)
        out[:, self.img] = A
        return out

    def apply_vec(self, x: np.ndarray) -> np.ndarray:
        """M @ x."""
        out = np.empty_like(x)
        out[self.img] = x
        return out

    def to_matrix(self) -> np.ndarray:
        n = len(self)
        M = np.zeros((n, n), dtype=np.int64)
        M[self.img, np.arange(n)] = 1
        return M


def mat(field: PrimeField, rows) -> np.ndarray:
    """Build a reduced int64 matrix from nested lists (test/CLI convenience)."""
    return field.reduce(np.array(rows, dtype=np.int64))


def random_matrix(rng: np.random.Generator, m: int, n: int, field: PrimeField) -> np.ndarray:
    return rng.integers(0, field.p, size=(m, n), dtype=np.int64)


def mat_mul(A: np.ndarray, B: np.ndarray, field: PrimeField,
            counter: OpCounter | None = None) -> np.ndarray:
    """Exact product with classical operation counts.

    Accumulation is chunked so that partial sums never exceed int64 range,
    which matters only for moduli close to the 2**31 bound.
    """
    if A.ndim != 2 or B.ndim != 2:
        raise ValueError("mat_mul expects 2-d operands")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} x {B.shape}")
    p = field.p
    m, k = A.shape
    n = B.shape[1]
    if counter is not None:
        counter.count_matmul(m, k, n)
    if k == 0 or m == 0 or n == 0:
        return np.zeros((m, n), dtype=np.int64)
    step = max(1, (_INT64_MAX - p) // ((p - 1) ** 2))
    if k <= step:
        return (A @ B) % p
    acc = np.zeros((m, n), dtype=np.int64)
    for lo in range(0, k, step):
        acc = (acc + A[:, lo:lo + step] @ B[lo:lo + step]) % p
    return acc


def mat_vec(A: np.ndarray, x: np.ndarray, field: PrimeField,
            counter: OpCounter | None = None) -> np.ndarray:
    return mat_mul(A, np.asarray(x, dtype=np.int64).reshape(-1, 1), field, counter).ravel()


def trsm_unit_lower(L: np.ndarray, B: np.ndarray, field: PrimeField,
                    counter: OpCounter | None = None) -> np.ndarray:
    """Solve L @ X = B for unit lower triangular L (forward substitution)."""
    r = L.shape[0]
    if L.shape != (r, r):
        raise ValueError("L must be square")
    if B.shape[0] != r:
        raise ValueError("dimension mismatch in trsm_unit_lower")
    if r and ((L.diagonal() != 1).any() or np.triu(L, 1).any()):
        raise ValueError("L is not unit lower triangular")
    p = field.p
    k = B.shape[1]
    X = np.zeros_like(B)
    for i in range(r):
        X[i] = (B[i] - mat_mul(L[i:i + 1, :i], X[:i], field, counter).ravel()) % p
        if counter is not None:
            counter.adds += k
    return X


def trsm_upper_right(B: np.ndarray, U: np.ndarray, field: PrimeField,
                     counter: OpCounter | None = None) -> np.ndarray:
    """Solve X @ U = B for invertible upper triangular U (back substitution)."""
    r = U.shape[0]
    if U.shape != (r, r):
        raise ValueError("U must be square")
    if B.shape[1] != r:
        raise ValueError("dimension mismatch in trsm_upper_right")
    if r and np.tril(U, -1).any():
        raise ValueError("U is not upper triangular")
    if (U.diagonal() == 0).any():
        raise ZeroDivisionError("U has a zero diagonal entry")
    p = field.p
    k = B.shape[0]
    inv_diag = [field.inv(int(d)) for d in U.diagonal()]
    if counter is not None:
        counter.invs += r
    X = np.zeros_like(B)
    for j in range(r):
        col = (B[:, j] - mat_mul(X[:, :j], U[:j, j:j + 1], field, counter).ravel()) % p
        X[:, j] = (col * inv_diag[j]) % p
        if counter is not None:
            counter.adds += k
            counter.muls += k
    return X


def left_part(A: np.ndarray) -> np.ndarray:
    """Keep entries with i + j <= n (1-based), i.e. i + j <= n - 2 0-based."""
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("left_part expects a square matrix")
    idx = np.arange(n)
    mask = np.add.outer(idx, idx) <= n - 2
    return np.where(mask, A, 0)


def is_left_triangular(A: np.ndarray) -> bool:
    n = A.shape[0]
    if A.shape != (n, n):
        return False
    idx = np.arange(n)
    mask = np.add.outer(idx, idx) <= n - 2
    return bool((A[~mask] == 0).all())


def reverse_rows(A: np.ndarray) -> np.ndarray:
    """J_n @ A."""
    return A[::-1].copy()


def reverse_cols(A: np.ndarray) -> np.ndarray:
    """A @ J_n."""
    return A[:, ::-1].copy()


def strict_lower(A: np.ndarray) -> np.ndarray:
    return np.tril(A, -1)


def strict_upper(A: np.ndarray) -> np.ndarray:
    return np.triu(A, 1)


def rank(A: np.ndarray, field: PrimeField) -> int:
    """Exact rank by plain Gaussian elimination; oracle-grade, no pivoting tricks."""
    p = field.p
    W = np.array(A, dtype=np.int64) % p
    m, n = W.shape
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.nonzero(W[r:, j])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            W[[r, i]] = W[[i, r]]
        inv = field.inv(int(W[r, j]))
        if r + 1 < m:
            factors = (W[r + 1:, j] * inv) % p
            W[r + 1:, j:] = (W[r + 1:, j:] - np.outer(factors, W[r, j:])) % p
        r += 1
    return r


def next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m *= 2
    return m


def pad_top_left(A: np.ndarray, size: int) -> np.ndarray:
    m, n = A.shape
    if (m, n) == (size, size):
        return A.copy()
    out = np.zeros((size, size), dtype=np.int64)
    out[:m, :n] = A
    return out
