"""Numba-compiled modular linear algebra kernels."""

import numpy as np
from numba import njit


@njit(cache=True)
def _matmul_mod_jit(a, b, p):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            v = a[i, t] % p
            if v == 0:
                continue
            for j in range(m):
                out[i, j] = (out[i, j] + v * (b[t, j] % p)) % p
    return out


@njit(cache=True)
def _powmod(base, exp, p):
    result = 1
    base %= p
    while exp:
        if exp & 1:
            result = (result * base) % p
        base = (base * base) % p
        exp >>= 1
    return result


@njit(cache=True)
def _inv_mod_jit(a, p):
    n = a.shape[0]
    work = np.zeros((n, 2 * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            work[i, j] = a[i, j] % p
        work[i, n + i] = 1
    for col in range(n):
        piv = -1
        for r in range(col, n):
            if work[r, col] % p != 0:
                piv = r
                break
        if piv < 0:
            return np.zeros((0, 0), dtype=np.int64)
        if piv != col:
            for j in range(2 * n):
                tmp = work[col, j]
                work[col, j] = work[piv, j]
                work[piv, j] = tmp
        inv = _powmod(work[col, col], p - 2, p)
        for j in range(2 * n):
            work[col, j] = (work[col, j] * inv) % p
        for r in range(n):
            if r != col and work[r, col] != 0:
                f = work[r, col]
                for j in range(2 * n):
                    work[r, j] = (work[r, j] - f * work[col, j]) % p
    return work[:, n:] % p


def matmul_mod(a, b, p):
    return _matmul_mod_jit(np.ascontiguousarray(a, dtype=np.int64),
                           np.ascontiguousarray(b, dtype=np.int64), p)


def inv_mod(a, p):
    out = _inv_mod_jit(np.ascontiguousarray(a, dtype=np.int64), p)
    if out.shape[0] == 0:
        return None
    return out


def matpow_mod(a, k, p):
    n = a.shape[0]
    if k < 0:
        a = inv_mod(a, p)
        if a is None:
            raise ZeroDivisionError("singular matrix power")
        k = -k
    out = np.eye(n, dtype=np.int64)
    base = np.ascontiguousarray(a, dtype=np.int64) % p
    while k:
        if k & 1:
            out = matmul_mod(out, base, p)
        base = matmul_mod(base, base, p)
        k >>= 1
    return out
