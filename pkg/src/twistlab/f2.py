"""Dense linear algebra over F_2 on numpy uint8 arrays."""

import numpy as np


def as_f2(rows, ncols: int | None = None) -> np.ndarray:
    A = np.asarray(rows, dtype=np.int64) % 2
    if A.ndim == 1:
        A = A.reshape(0, ncols or 0) if A.size == 0 else A.reshape(1, -1)
    return A.astype(np.uint8)


def row_reduce(M) -> tuple:
    """Reduced row echelon form; pivots chosen at the lowest index."""
    A = as_f2(M).copy()
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        mask = A[:, c].astype(bool)
        mask[r] = False
        A[mask] ^= A[r]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M) -> int:
    A = as_f2(M)
    if A.size == 0:
        return 0
    return len(row_reduce(A)[1])


def nullspace(M, ncols: int | None = None) -> np.ndarray:
    """Rows spanning {x : M x = 0}."""
    A = as_f2(M, ncols)
    n = A.shape[1] if ncols is None else ncols
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    R, pivots = row_reduce(A)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = R[i, f]
    return basis


def span_basis(rows, ncols: int) -> np.ndarray:
    A = as_f2(rows, ncols)
    if A.shape[0] == 0:
        return np.zeros((0, ncols), dtype=np.uint8)
    return row_reduce(A)[0]


def in_span(basis, v) -> bool:
    B = as_f2(basis, len(v))
    return rank(np.vstack([B, as_f2(v)])) == rank(B)


def matmul(A, B) -> np.ndarray:
    return ((np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % 2).astype(np.uint8)


def matpow(A, k: int) -> np.ndarray:
    n = np.asarray(A).shape[0]
    result = np.eye(n, dtype=np.uint8)
    base = as_f2(A)
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def inverse(A) -> np.ndarray:
    A = as_f2(A)
    n = A.shape[0]
    R, pivots = row_reduce(np.hstack([A, np.eye(n, dtype=np.uint8)]))
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular over F_2")
    return R[:, n:]
