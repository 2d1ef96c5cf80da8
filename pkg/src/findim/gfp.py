"""Dense exact linear algebra over a prime field F_p.

All matrices are numpy int64 arrays with entries reduced into [0, p).
Entries stay below p < 2**31, so products fit comfortably in int64 and a
single ``% p`` after each arithmetic step keeps everything exact.
"""

from __future__ import annotations

import numpy as np


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def asmod(a, p: int) -> np.ndarray:
    """Coerce to an int64 array reduced mod p."""
    return np.asarray(a, dtype=np.int64) % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def inv_scalar(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns (R, pivot_columns).  Pivots are chosen left to right, which
    makes every downstream basis choice deterministic.
    """
    r = asmod(a, p).copy()
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            r[[row, i]] = r[[i, row]]
        r[row] = (r[row] * inv_scalar(int(r[row, col]), p)) % p
        f = r[:, col].copy()
        f[row] = 0
        if np.any(f):
            r -= np.outer(f, r[row])
            r %= p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, as columns, in deterministic order."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return eye(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros(cols, len(free))
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, fc]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution X of A X = B (free variables set to 0), or None."""
    rows, cols = a.shape
    b = asmod(b, p)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
        squeeze = True
    else:
        squeeze = False
    if b.shape[0] != rows:
        raise ValueError("shape mismatch in solve")
    aug = np.concatenate([asmod(a, p), b], axis=1)
    r, pivots = rref(aug, p)
    if any(c >= cols for c in pivots):
        return None
    x = zeros(cols, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if squeeze else x


def inv(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    x = solve(a, eye(n), p)
    if x is None:
        return None
    if not np.array_equal(matmul(a, x, p), eye(n)):
        return None
    return x


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def column_space(a: np.ndarray, p: int) -> np.ndarray:
    """Deterministic basis of the column space (original columns)."""
    _, pivots = rref(a, p)
    return a[:, pivots] % p


def pivot_coords(a: np.ndarray, p: int) -> list[int]:
    """Coordinates where the column space of ``a`` has its echelon pivots.

    The standard basis vectors at the *complementary* coordinates extend
    any basis of the column space to a basis of the ambient space.
    """
    _, pivots = rref(a.T, p)
    return pivots


def complement_coords(a: np.ndarray, p: int) -> list[int]:
    piv = set(pivot_coords(a, p))
    return [i for i in range(a.shape[0]) if i not in piv]


def rank_int(a) -> int:
    """Exact rank of an integer matrix over Q (fraction-free Gauss)."""
    m = [[int(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rk = 0
    for col in range(cols):
        piv = None
        for i in range(rk, rows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, rows):
            if m[i][col]:
                a_, b_ = m[rk][col], m[i][col]
                m[i] = [a_ * y - b_ * x for x, y in zip(m[rk], m[i])]
        rk += 1
        if rk == rows:
            break
    return rk
