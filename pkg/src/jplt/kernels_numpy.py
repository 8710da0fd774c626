"""Vectorized numpy kernels for arithmetic mod p.

Reference implementation of the backend API (``mat_mul``, ``rref``,
``all_minors_nonsingular``). Works on int64 arrays for small moduli and on
object-dtype arrays of Python ints for large ones; every operation reduces
before values can exceed one product of two residues, so int64 inputs stay
within int64 as long as p < 2**31.
"""

import itertools

import numpy as np

# Cap on the broadcast temporary in mat_mul and on minor batches, in elements.
_CHUNK_ELEMS = 1 << 21


def mat_mul(a, b, p):
    """(a @ b) mod p without intermediate overflow."""
    rows, inner = a.shape
    cols = b.shape[1]
    if rows * inner * cols <= _CHUNK_ELEMS:
        t = (a[:, :, None] * b[None, :, :]) % p
        return t.sum(axis=1) % p
    out = np.empty((rows, cols), dtype=a.dtype)
    for i in range(rows):
        out[i] = ((a[i, :, None] * b) % p).sum(axis=0) % p
    return out


def rref(m, p):
    """Reduced row echelon form mod p.

    Returns (reduced, rank, pivot_cols); reduced has the input's shape with
    zero rows at the bottom, pivot columns hold unit vectors.
    """
    r = m.copy()
    rows, cols = r.shape
    pivots = []
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        hits = np.nonzero(r[rank:, col])[0]
        if hits.size == 0:
            continue
        piv = rank + int(hits[0])
        if piv != rank:
            r[[rank, piv]] = r[[piv, rank]]
        inv = pow(int(r[rank, col]), -1, p)
        r[rank] = (r[rank] * inv) % p
        others = np.nonzero(r[:, col])[0]
        others = others[others != rank]
        if others.size:
            r[others] = (r[others] - np.outer(r[others, col], r[rank])) % p
        pivots.append(col)
        rank += 1
    return r, rank, np.asarray(pivots, dtype=np.int64)


def _batch_nonsingular(batch, p):
    """True iff every square matrix in batch (n, r, r) is invertible mod p.

    Fraction-free elimination: rows are cross-multiplied against the pivot
    row instead of scaled by its inverse, which keeps everything in plain
    modular products. Invertibility is unaffected.
    """
    r = batch.shape[1]
    for k in range(r):
        colk = batch[:, k:, k]
        nz = colk != 0
        if not nz.any(axis=1).all():
            return False
        off = np.argmax(nz, axis=1)
        moved = np.nonzero(off > 0)[0]
        if moved.size:
            src = k + off[moved]
            tmp = batch[moved, k].copy()
            batch[moved, k] = batch[moved, src]
            batch[moved, src] = tmp
        if k + 1 == r:
            continue
        piv = batch[:, k, k]
        mults = batch[:, k + 1:, k]
        batch[:, k + 1:, k:] = (
            batch[:, k + 1:, k:] * piv[:, None, None]
            - batch[:, k:k + 1, k:] * mults[:, :, None]
        ) % p
    return True


def all_minors_nonsingular(m, p):
    """True iff every rows x rows column submatrix of m is invertible mod p."""
    rows, cols = m.shape
    if rows == 0:
        return True
    mt = m.T.copy()  # transposing a minor does not change invertibility
    per_chunk = max(1, _CHUNK_ELEMS // (rows * rows))
    combos = itertools.combinations(range(cols), rows)
    while True:
        chunk = list(itertools.islice(combos, per_chunk))
        if not chunk:
            return True
        batch = mt[np.asarray(chunk, dtype=np.int64)]
        if not _batch_nonsingular(batch, p):
            return False
