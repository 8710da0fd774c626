"""Generalized Reed-Solomon code machinery.

A code here is described by per-column (multiplier, evaluation point) pairs:
row i of the generator holds multiplier * point**i. These codes are MDS, their
duals are again of the same shape, and both facts drive the private-query
construction: the demand's coefficient matrix is dualized on its support,
extended with fresh random columns to full length, and dualized back to give
the query generator. Recovery vectors come from polynomials that vanish on
the complement evaluation points.

Everything in this module is pure and deterministic given the caller's rng.
"""

from dataclasses import dataclass

import numpy as np

from .backend import work_dtype
from .errors import (
    DimensionMismatch,
    ExtensionFailed,
    FieldTooSmall,
    NotGrs,
    NotMds,
    ParamInvalid,
    SpecInvalid,
)
from .field import inv_mod
from .linalg import DEFAULT_WORK_LIMIT, is_mds

# Rejection draws per slot in extend_dual before giving up; each draw accepts
# with probability >= 1/p, so this never triggers for healthy parameters.
_DRAW_CAP = 4096


@dataclass(frozen=True)
class GrsSpec:
    """Column data (multipliers, eval_points) and dimension of a GRS code."""

    p: int
    multipliers: tuple
    eval_points: tuple
    dim: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2:
            raise SpecInvalid(f"field size must be an int >= 2, got {self.p}")
        mults = tuple(int(v) % self.p for v in self.multipliers)
        points = tuple(int(v) % self.p for v in self.eval_points)
        object.__setattr__(self, "multipliers", mults)
        object.__setattr__(self, "eval_points", points)
        n = len(mults)
        if len(points) != n:
            raise SpecInvalid(
                f"{n} multipliers but {len(points)} evaluation points"
            )
        if n > self.p:
            raise SpecInvalid(f"length {n} exceeds field size {self.p}")
        if not 0 <= self.dim <= n:
            raise SpecInvalid(f"dimension {self.dim} outside [0, {n}]")
        if any(v == 0 for v in mults):
            raise SpecInvalid("multipliers must be nonzero")
        if len(set(points)) != n:
            raise SpecInvalid("evaluation points must be distinct")

    @property
    def length(self):
        return len(self.multipliers)


@dataclass(frozen=True)
class ColumnAssignment:
    """Where each column of an extended code lands in position order.

    Columns are built demand-support first, then complement; perm[j] is the
    final position of built column j. Support positions are filled in
    ascending order, complement positions likewise.
    """

    perm: tuple
    num_demand: int

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        object.__setattr__(self, "perm", perm)
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise SpecInvalid(f"perm {perm} is not a permutation of 0..{n - 1}")
        if not 0 <= self.num_demand <= n:
            raise SpecInvalid(f"num_demand {self.num_demand} outside [0, {n}]")
        head = perm[:self.num_demand]
        tail = perm[self.num_demand:]
        if list(head) != sorted(head) or list(tail) != sorted(tail):
            raise SpecInvalid("support and complement positions must ascend")

    @property
    def demand_positions(self):
        return self.perm[:self.num_demand]

    @property
    def complement_positions(self):
        return self.perm[self.num_demand:]

    @classmethod
    def from_support(cls, support, total):
        """Assignment sending built columns to the given 0-based support."""
        support = sorted(int(c) for c in support)
        if support and not (0 <= support[0] and support[-1] < total):
            raise SpecInvalid(f"support {support} out of range for {total}")
        if len(set(support)) != len(support):
            raise SpecInvalid("support indices must be distinct")
        rest = [c for c in range(total) if c not in set(support)]
        return cls(tuple(support + rest), len(support))


def grs_generator(spec):
    """dim x length generator matrix: entry (i, j) = mult[j] * point[j]**i."""
    n = spec.length
    out = np.zeros((spec.dim, n), dtype=work_dtype(spec.p))
    if spec.dim == 0:
        return out
    cur = list(spec.multipliers)
    for i in range(spec.dim):
        if i:
            cur = [(c * w) % spec.p for c, w in zip(cur, spec.eval_points)]
        out[i] = cur
    return out


def _prod_excluding(points, j, p):
    acc = 1
    wj = points[j]
    for k, wk in enumerate(points):
        if k != j:
            acc = acc * (wj - wk) % p
    return acc


def grs_dual_multipliers(spec):
    """Column multipliers of the dual code on the same evaluation points.

    With these multipliers and dimension length-dim, the generated matrix is
    a parity check of the input code. Applying this twice returns the
    original multipliers exactly.
    """
    if spec.length < 1:
        raise SpecInvalid("dual multipliers need at least one column")
    p = spec.p
    out = []
    for j in range(spec.length):
        base = spec.multipliers[j] * _prod_excluding(spec.eval_points, j, p) % p
        out.append(inv_mod(base, p))
    return tuple(out)


def grs_from_matrix(m, p, work_limit=DEFAULT_WORK_LIMIT):
    """Recover (multipliers, eval points) from a generator matrix.

    The input must be MDS (NotMds otherwise). For a single row any distinct
    points reproduce it, so the canonical choice is 0..cols-1. For two or
    more rows the representation is forced by the first two rows and then
    verified against the rest; NotGrs if verification fails.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] < 1:
        raise DimensionMismatch(f"need a 2-D matrix with rows, got {m.shape}")
    if not is_mds(m, p, work_limit):
        raise NotMds("matrix is not MDS")
    rows, cols = m.shape
    if rows == 1:
        if cols > p:
            raise NotGrs(f"{cols} columns need {cols} distinct points, field has {p}")
        return GrsSpec(p, tuple(int(v) for v in m[0]), tuple(range(cols)), 1)
    mults = []
    points = []
    for j in range(cols):
        top = int(m[0, j])
        if top == 0:
            raise NotGrs("first-row entry is zero")
        mults.append(top)
        points.append(int(m[1, j]) * inv_mod(top, p) % p)
    if len(set(points)) != cols:
        raise NotGrs("derived evaluation points collide")
    spec = GrsSpec(p, tuple(mults), tuple(points), rows)
    if not np.array_equal(grs_generator(spec), m.astype(work_dtype(p), copy=False)):
        raise NotGrs("rows beyond the second are inconsistent")
    return spec


def draw_nonzero(p, count, rng):
    """count uniform nonzero field elements, each by draw-and-reject-zero."""
    out = []
    for _ in range(count):
        for _ in range(_DRAW_CAP):
            v = int(rng.integers(p))
            if v != 0:
                out.append(v)
                break
        else:
            raise ExtensionFailed("multiplier draw cap exhausted")
    return tuple(out)


def draw_distinct_points(p, count, rng, avoid=()):
    """count distinct field elements outside avoid, each by draw-and-reject."""
    seen = set(int(v) for v in avoid)
    out = []
    for _ in range(count):
        for _ in range(_DRAW_CAP):
            v = int(rng.integers(p))
            if v not in seen:
                seen.add(v)
                out.append(v)
                break
        else:
            raise ExtensionFailed("evaluation point draw cap exhausted")
    return tuple(out)


def extend_dual(p, mult_head, point_head, total_len, rng, dim):
    """Append random columns to a dual-code head, reaching total_len.

    New multipliers are uniform nonzero (draw, reject zero); new points are
    uniform among unused field elements (draw, reject seen). Draw order is
    fixed: all multiplier draws first, then all point draws, each via
    rng.integers(p). dim is the dimension recorded on the result.
    """
    mult_head = tuple(int(v) for v in mult_head)
    point_head = tuple(int(v) for v in point_head)
    if total_len > p:
        raise FieldTooSmall(f"length {total_len} exceeds field size {p}")
    need = total_len - len(mult_head)
    if need < 0 or len(mult_head) != len(point_head):
        raise DimensionMismatch(
            f"head of {len(mult_head)}/{len(point_head)} columns "
            f"cannot extend to {total_len}"
        )
    new_mults = draw_nonzero(p, need, rng)
    new_points = draw_distinct_points(p, need, rng, avoid=point_head)
    return GrsSpec(p, mult_head + new_mults, point_head + new_points, dim)


def assemble_columns(spec, assignment):
    """Reorder columns so built column j lands at position perm[j]."""
    n = spec.length
    if len(assignment.perm) != n:
        raise DimensionMismatch(
            f"assignment covers {len(assignment.perm)} columns, spec has {n}"
        )
    mults = [0] * n
    points = [0] * n
    for j, pos in enumerate(assignment.perm):
        mults[pos] = spec.multipliers[j]
        points[pos] = spec.eval_points[j]
    return GrsSpec(spec.p, tuple(mults), tuple(points), spec.dim)


def generator_from_parity(parity_spec):
    """Generator of the code whose parity check the given spec generates.

    Returns (matrix, spec); the matrix has length - dim rows and annihilates
    the parity generator.
    """
    gen = GrsSpec(
        parity_spec.p,
        grs_dual_multipliers(parity_spec),
        parity_spec.eval_points,
        parity_spec.length - parity_spec.dim,
    )
    return grs_generator(gen), gen


def recovery_polynomials(gen_spec, complement_points, num_rows):
    """Coefficient rows of f_l(x) = x**(l-1) * prod(x - w) over complement w.

    Row l holds ascending-degree coefficients, length gen_spec.dim; applying
    row l to the rows of the generator matrix evaluates multiplier-weighted
    f_l at every column's point, which vanishes exactly on the complement.
    """
    if num_rows < 1:
        raise ParamInvalid(f"need at least one row, got {num_rows}")
    p = gen_spec.p
    width = gen_spec.dim
    complement_points = [int(w) % p for w in complement_points]
    if len(complement_points) + num_rows != width:
        raise DimensionMismatch(
            f"{len(complement_points)} complement points and {num_rows} rows "
            f"do not fit width {width}"
        )
    poly = [1]
    for w in complement_points:
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] - c * w) % p
        poly = nxt
    rows = np.zeros((num_rows, width), dtype=work_dtype(p))
    for r in range(num_rows):
        for i, c in enumerate(poly):
            rows[r, r + i] = c
    return rows
