"""Dense linear algebra over GF(p).

Elimination, solving, null spaces, MDS certification, and shortened-subcode
extraction. Dispatches the inner loops to the active kernel backend; all
public functions accept and return canonical-residue arrays.
"""

import math

import numpy as np

from .backend import kernels_for, work_dtype
from .errors import (
    DimensionMismatch,
    Inconsistent,
    RowsExceedCols,
    WorkLimitExceeded,
)

DEFAULT_WORK_LIMIT = 10**6


def _as_work(m, p):
    m = np.asarray(m)
    want = work_dtype(p)
    if m.dtype != want:
        m = m.astype(want)
    return np.ascontiguousarray(m)


def mat_mul(a, b, p):
    """(a @ b) mod p."""
    a = _as_work(a, p)
    b = _as_work(b, p)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return kernels_for(p).mat_mul(a, b, p)


def rref(m, p):
    """Reduced row echelon form mod p -> (reduced, rank, pivot_cols).

    reduced keeps the input shape with zero rows at the bottom; pivot_cols
    are 0-based column indices, one per nonzero row.
    """
    m = _as_work(m, p)
    red, rank, piv = kernels_for(p).rref(m, p)
    return red, int(rank), tuple(int(c) for c in piv)


def rank(m, p):
    return rref(m, p)[1]


def solve_right(a, b, p):
    """One solution x of a @ x = b mod p (free variables set to 0).

    Raises Inconsistent when no solution exists.
    """
    a = _as_work(a, p)
    b = _as_work(b, p)
    if b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"solve_right: a is {a.shape}, b is {b.shape}")
    cols = a.shape[1]
    aug = np.concatenate([a, b[:, None]], axis=1)
    red, rk, piv = rref(aug, p)
    if cols in piv:
        raise Inconsistent("right-hand side is outside the column space")
    x = np.zeros(cols, dtype=work_dtype(p))
    for i, pc in enumerate(piv):
        x[pc] = red[i, cols]
    return x


def null_space_basis(m, p):
    """RREF basis of the right null space of m, one row per free column."""
    m = _as_work(m, p)
    cols = m.shape[1]
    red, rk, piv = rref(m, p)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=work_dtype(p))
    for r, fc in enumerate(free):
        basis[r, fc] = 1
        for i, pc in enumerate(piv):
            basis[r, pc] = (-red[i, fc]) % p
    if basis.shape[0] == 0:
        return basis
    # rows are independent by the identity pattern on free columns, so the
    # canonical form has the same row count
    return rref(basis, p)[0]


def is_mds(m, p, work_limit=DEFAULT_WORK_LIMIT):
    """True iff every rows x rows column submatrix of m is invertible mod p.

    Raises RowsExceedCols for r > n and WorkLimitExceeded when the number of
    submatrices passes work_limit.
    """
    m = _as_work(m, p)
    rows, cols = m.shape
    if rows > cols:
        raise RowsExceedCols(f"{rows} rows exceed {cols} columns")
    n_minors = math.comb(cols, rows)
    if n_minors > work_limit:
        raise WorkLimitExceeded(f"{n_minors} submatrices exceed limit {work_limit}")
    return bool(kernels_for(p).all_minors_nonsingular(m, p))


def shortened_subcode(m, support, p):
    """Basis of the rows of m's row space that vanish off the given columns.

    support is a collection of 0-based column indices; the result is in RREF,
    restricted to the support columns in ascending order. For a k x n MDS
    input with |support| >= n - k + 1 the result has |support| - n + k rows.
    """
    m = _as_work(m, p)
    cols = m.shape[1]
    support = sorted(set(int(c) for c in support))
    if support and not (0 <= support[0] and support[-1] < cols):
        raise DimensionMismatch(f"support {support} out of range for {cols} columns")
    complement = [c for c in range(cols) if c not in support]
    order = complement + support
    red, rk, piv = rref(m[:, order], p)
    keep = [i for i, pc in enumerate(piv) if pc >= len(complement)]
    return red[keep][:, len(complement):]
