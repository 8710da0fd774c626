"""Numba-compiled kernels for arithmetic mod p.

Same API as kernels_numpy, restricted to int64 arrays with p < 2**31 so that
a product of two residues fits in int64. Backend dispatch enforces the bound.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _inv_mod(a, p):
    # extended Euclid; a must be nonzero mod p
    t = np.int64(0)
    newt = np.int64(1)
    r = p
    newr = a
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def mat_mul(a, b, p):
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        for k in range(inner):
            aik = a[i, k]
            if aik == 0:
                continue
            for j in range(cols):
                out[i, j] = (out[i, j] + aik * b[k, j]) % p
    return out


@njit(cache=True)
def rref(m, p):
    r = m.copy()
    rows, cols = r.shape
    cap = rows if rows < cols else cols
    pivots = np.empty(cap, dtype=np.int64)
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if r[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(cols):
                tmp = r[rank, j]
                r[rank, j] = r[piv, j]
                r[piv, j] = tmp
        inv = _inv_mod(r[rank, col], p)
        for j in range(cols):
            r[rank, j] = (r[rank, j] * inv) % p
        for i in range(rows):
            if i != rank and r[i, col] != 0:
                f = r[i, col]
                for j in range(cols):
                    r[i, j] = (r[i, j] - f * r[rank, j]) % p
        pivots[rank] = col
        rank += 1
    return r, rank, pivots[:rank]


@njit(cache=True)
def _nonsingular_inplace(a, p):
    # fraction-free elimination, clobbers a
    n = a.shape[0]
    for k in range(n):
        piv = -1
        for i in range(k, n):
            if a[i, k] != 0:
                piv = i
                break
        if piv < 0:
            return False
        if piv != k:
            for j in range(k, n):
                tmp = a[k, j]
                a[k, j] = a[piv, j]
                a[piv, j] = tmp
        pv = a[k, k]
        for i in range(k + 1, n):
            f = a[i, k]
            if f != 0:
                for j in range(k, n):
                    a[i, j] = (a[i, j] * pv - a[k, j] * f) % p
    return True


@njit(cache=True)
def all_minors_nonsingular(m, p):
    rows, cols = m.shape
    if rows == 0:
        return True
    comb = np.arange(rows)
    scratch = np.empty((rows, rows), dtype=np.int64)
    while True:
        for j in range(rows):
            cj = comb[j]
            for i in range(rows):
                scratch[i, j] = m[i, cj]
        if not _nonsingular_inplace(scratch, p):
            return False
        i = rows - 1
        while i >= 0 and comb[i] == cols - rows + i:
            i -= 1
        if i < 0:
            return True
        comb[i] += 1
        for j in range(i + 1, rows):
            comb[j] = comb[j - 1] + 1
