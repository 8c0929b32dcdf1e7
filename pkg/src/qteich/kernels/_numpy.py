"""Pure-numpy modular linear algebra kernels."""

import numpy as np


def matmul_mod(a, b, p):
    """Exact (a @ b) mod p via float64 BLAS when safe, else object fallback."""
    n = a.shape[1]
    if p * p * n < 2 ** 52:
        prod = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.mod(np.rint(prod), p).astype(np.int64)
    out = np.matmul(a.astype(object), b.astype(object))
    return np.mod(out, p).astype(np.int64)


def inv_mod(a, p):
    """Inverse of a mod p by Gauss-Jordan; returns None when singular."""
    n = a.shape[0]
    work = np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if work[r, col] % p:
                piv = r
                break
        if piv is None:
            return None
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        inv = pow(int(work[col, col]), p - 2, p)
        work[col] = (work[col] * inv) % p
        for r in range(n):
            if r != col and work[r, col]:
                work[r] = (work[r] - work[r, col] * work[col]) % p
    return work[:, n:]


def matpow_mod(a, k, p):
    n = a.shape[0]
    if k < 0:
        a = inv_mod(a, p)
        if a is None:
            raise ZeroDivisionError("singular matrix power")
        k = -k
    out = np.eye(n, dtype=np.int64)
    base = a % p
    while k:
        if k & 1:
            out = matmul_mod(out, base, p)
        base = matmul_mod(base, base, p)
        k >>= 1
    return out
