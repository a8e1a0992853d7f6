"""Exact linear algebra over the prime field F_p.

Matrices are numpy integer arrays with entries in ``range(p)``.  Every
routine reduces mod p after each arithmetic step, so results are exact.
"""
from __future__ import annotations

import numpy as np

# Above this prime, dot products can overflow int64 and we fall back to
# Python integers.
_INT64_SAFE_PRIME = 1 << 20


def _dtype(p: int):
    return np.int64 if p < _INT64_SAFE_PRIME else object


def asmat(a, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    m = np.array(a, dtype=_dtype(p))
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m % p


def zeros(r: int, c: int, p: int) -> np.ndarray:
    return np.zeros((r, c), dtype=_dtype(p))


def eye(n: int, p: int) -> np.ndarray:
    return np.eye(n, dtype=_dtype(p))


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1], p)
    return (a @ b) % p


def inverse_scalar(x: int, p: int) -> int:
    return pow(int(x), -1, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen as the first nonzero entry scanning rows top to bottom,
    so the output is a deterministic function of the input.
    """
    m = np.array(a, dtype=_dtype(p)) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * inverse_scalar(m[r, c], p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : a x = 0} as the columns of the returned matrix."""
    rows, cols = a.shape
    if rows == 0:
        return eye(cols, p)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free), p)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b (free variables set to 0), or None."""
    rows, cols = a.shape
    b = np.asarray(b, dtype=_dtype(p))
    b = b.reshape(rows, b.shape[1] if b.ndim == 2 else 1) % p
    aug = np.concatenate([np.asarray(a, dtype=_dtype(p)) % p, b], axis=1)
    r, pivots = rref(aug, p)
    if pivots and pivots[-1] >= cols:
        return None
    x = zeros(cols, b.shape[1], p)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x


def inverse(a: np.ndarray, p: int) -> np.ndarray | None:
    n, m = a.shape
    if n != m:
        return None
    x = solve(a, eye(n, p), p)
    if x is None or rank(a, p) != n:
        return None
    return x


def column_space_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``a`` at the pivot positions: a basis of its image."""
    if a.size == 0:
        return zeros(a.shape[0], 0, p)
    _, pivots = rref(a, p)
    return a[:, pivots] % p


class IncrementalSystem:
    """Linear system in ``n`` unknowns that accepts equations one batch at a
    time and reports inconsistency as soon as it appears.

    Rows are kept reduced against earlier pivots, which is all that is needed
    for forward reduction of new rows.
    """

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self.consistent = True

    def copy(self) -> "IncrementalSystem":
        other = IncrementalSystem.__new__(IncrementalSystem)
        other.n, other.p = self.n, self.p
        other.rows = list(self.rows)
        other.pivots = list(self.pivots)
        other.consistent = self.consistent
        return other

    def add(self, coeffs: np.ndarray, rhs: np.ndarray) -> bool:
        """Add equations ``coeffs @ x = rhs``; return False once inconsistent."""
        if not self.consistent:
            return False
        p = self.p
        rhs = np.asarray(rhs).reshape(-1, 1)
        coeffs = np.asarray(coeffs).reshape(rhs.shape[0], self.n)
        aug = np.concatenate([coeffs, rhs], axis=1).astype(_dtype(p)) % p
        for row in aug:
            row = row.copy()
            for prow, pc in zip(self.rows, self.pivots):
                if row[pc]:
                    row = (row - row[pc] * prow) % p
            nz = np.nonzero(row[: self.n])[0]
            if nz.size == 0:
                if row[self.n]:
                    self.consistent = False
                    return False
                continue
            pc = int(nz[0])
            row = (row * inverse_scalar(row[pc], p)) % p
            self.rows.append(row)
            self.pivots.append(pc)
        return True

    def solution(self) -> np.ndarray | None:
        if not self.consistent:
            return None
        p = self.p
        x = np.zeros(self.n, dtype=_dtype(p))
        # back-substitute in reverse insertion order; free variables are 0
        for row, pc in reversed(list(zip(self.rows, self.pivots))):
            val = (row[self.n] - (row[: self.n] @ x)) % p
            x[pc] = val
        return x % p
