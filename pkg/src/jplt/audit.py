"""Privacy auditing for query matrices.

Two independent instruments:

* Structural certification: for every possible support set W* of size D, the
  subcode of the query's row space supported on W* must look the same. The
  necessary condition is that some L-row MDS demand on W* is recoverable;
  the strict condition is that the supported subcode has dimension exactly L
  and is MDS, which forces equal counts across supports and hence a uniform
  posterior.
* Exact posterior oracle: at tiny parameters, enumerate every (support,
  coefficient matrix, key) tuple the sampler can produce, group by the
  realized query matrix, and compute the conditional distribution of the
  support given the query in exact rational arithmetic. A private scheme
  shows total-variation distance exactly 0 from the uniform prior.

Counts and probabilities are Fractions throughout; no floats.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotGrs, ParamInvalid, WorkLimitExceeded
from .field import PrimeField
from .linalg import is_mds, mat_mul, shortened_subcode
from .protocol import MODES, DemandSpec, QueryKey, build_query, dual_head
from .grs import ColumnAssignment, grs_from_matrix

DEFAULT_SUBSET_LIMIT = 10**6
DEFAULT_TUPLE_LIMIT = 10**8


@dataclass(frozen=True)
class SubsetRecord:
    """Shortening outcome for one candidate support (0-based indices)."""

    support: tuple
    dimension: int
    mds: bool
    ok: bool


@dataclass(frozen=True)
class StructuralReport:
    """Per-support shortening records plus the overall verdict."""

    num_messages: int
    support_size: int
    demand_dim: int
    strict: bool
    records: tuple
    verdict: bool


@dataclass(frozen=True, eq=False)
class PosteriorGroup:
    """One realized query matrix: occurrence count and support posterior."""

    matrix: np.ndarray
    count: int
    posterior: dict
    tv: Fraction


@dataclass(frozen=True, eq=False)
class PosteriorTable:
    """Exact posterior of the support given the query, per realized query."""

    prior: Fraction
    total_tuples: int
    groups: tuple
    tv_max: Fraction


def gaussian_binomial(n, k, p):
    """Number of k-dimensional subspaces of an n-dimensional space over GF(p)."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _iter_rref_coeffs(dim, ell, p):
    # canonical bases of all ell-dim subspaces of GF(p)^dim: reduced
    # echelon rows, one matrix per subspace
    for pivots in itertools.combinations(range(dim), ell):
        free = [
            (i, j)
            for i in range(ell)
            for j in range(dim)
            if j > pivots[i] and j not in pivots
        ]
        for values in itertools.product(range(p), repeat=len(free)):
            c = np.zeros((ell, dim), dtype=np.int64)
            for i, pc in enumerate(pivots):
                c[i, pc] = 1
            for (i, j), v in zip(free, values):
                c[i, j] = v
            yield c


def _has_mds_subcode(basis, ell, p, work_limit):
    # does the row space of basis contain an ell-dim subcode that is MDS?
    dim = basis.shape[0]
    if ell > dim:
        return False
    if ell == dim:
        return is_mds(basis, p, work_limit)
    n_subspaces = gaussian_binomial(dim, ell, p)
    if n_subspaces > work_limit:
        raise WorkLimitExceeded(
            f"{n_subspaces} candidate subspaces exceed limit {work_limit}"
        )
    for c in _iter_rref_coeffs(dim, ell, p):
        cand = mat_mul(c.astype(basis.dtype, copy=False), basis, p)
        if is_mds(cand, p, work_limit):
            return True
    return False


def verify_structural(g, p, support_size, demand_dim, strict=False,
                      work_limit=DEFAULT_SUBSET_LIMIT):
    """Certify the shortening structure of a query matrix on every support.

    For each of the C(K, D) supports, records the dimension of the subcode
    of rowspace(g) supported there (restricted to the support columns) and
    whether that restricted basis is MDS. A support passes when an L-row MDS
    demand on it is recoverable; strict additionally demands the dimension
    be exactly L (the uniqueness property behind uniform posteriors).
    """
    g = np.asarray(g)
    k = g.shape[1]
    d, ell = support_size, demand_dim
    if not (1 <= ell <= d <= k):
        raise ParamInvalid(f"need 1 <= L <= D <= K, got L={ell} D={d} K={k}")
    n_subsets = math.comb(k, d)
    if n_subsets > work_limit:
        raise WorkLimitExceeded(f"{n_subsets} supports exceed limit {work_limit}")
    records = []
    verdict = True
    for support in itertools.combinations(range(k), d):
        sub = shortened_subcode(g, support, p)
        dim = sub.shape[0]
        mds = dim > 0 and is_mds(sub, p, work_limit)
        if strict:
            ok = dim == ell and mds
        elif dim == ell:
            ok = mds
        elif dim < ell:
            ok = False
        else:
            ok = _has_mds_subcode(sub, ell, p, work_limit)
        verdict = verdict and ok
        records.append(SubsetRecord(support=support, dimension=dim, mds=mds, ok=ok))
    return StructuralReport(
        num_messages=k,
        support_size=d,
        demand_dim=ell,
        strict=strict,
        records=tuple(records),
        verdict=verdict,
    )


def necessary_condition_check(g, p, support_size, demand_dim,
                              work_limit=DEFAULT_SUBSET_LIMIT):
    """True iff every support of size D can host some recoverable MDS demand."""
    report = verify_structural(g, p, support_size, demand_dim, strict=False,
                               work_limit=work_limit)
    return report.verdict


def _iter_mds_coeffs(p, d, ell):
    # all ell x d MDS coefficient matrices over GF(p), as int tuples
    if ell == 1:
        for row in itertools.product(range(1, p), repeat=d):
            yield np.asarray([row], dtype=np.int64)
        return
    for flat in itertools.product(range(p), repeat=ell * d):
        cand = np.asarray(flat, dtype=np.int64).reshape(ell, d)
        if is_mds(cand, p):
            yield cand


def _count_mds_coeffs(p, d, ell):
    if ell == 1:
        return (p - 1) ** d
    return sum(1 for _ in _iter_mds_coeffs(p, d, ell))


def _matrix_key(m):
    return (m.shape, tuple(int(v) for v in m.flat))


def posterior_oracle(field, num_messages, support_size, demand_dim,
                     scheme="grs", work_limit=DEFAULT_TUPLE_LIMIT):
    """Exhaustively enumerate the scheme and measure support leakage.

    scheme is a builder mode name, or a callable (demand, key) -> matrix for
    auditing nonstandard constructions. Every (support, MDS coefficients,
    key) tuple is enumerated with its exact sampling weight: for single-row
    demands the demand-row points range over ordered choices of D distinct
    values, extension multipliers over nonzero values with replacement, and
    extension points over unused values without replacement, matching the
    sampler draw for draw. For the grs scheme with two or more demand rows,
    coefficient matrices without a multiplier/point form are left out: that
    builder refuses them, so the audit conditions on the demands it serves.
    Returns the per-query posterior over supports and the worst
    total-variation distance from the uniform prior.
    """
    if callable(scheme):
        build = scheme
    elif scheme in MODES:
        def build(demand, key, _mode=scheme):
            return build_query(demand, key, mode=_mode)[0].matrix
    else:
        raise ParamInvalid(f"scheme must be callable or one of {MODES}")
    p = field.p
    k, d, ell = num_messages, support_size, demand_dim
    if not (1 <= ell <= d <= k):
        raise ParamInvalid(f"need 1 <= L <= D <= K, got L={ell} D={d} K={k}")
    if p < k:
        raise ParamInvalid(f"field size {p} below message count {k}")
    n_supports = math.comb(k, d)
    n_coeffs = _count_mds_coeffs(p, d, ell)
    n_rep = math.perm(p, d) if ell == 1 else 1
    n_mults = (p - 1) ** (k - d)
    n_points = math.perm(p - d, k - d)
    bound = n_supports * n_coeffs * n_rep * n_mults * n_points
    if bound > work_limit:
        raise WorkLimitExceeded(f"{bound} tuples exceed limit {work_limit}")

    total = 0
    group_counts = {}
    group_by_support = {}
    group_matrix = {}
    for support in itertools.combinations(range(k), d):
        assignment = ColumnAssignment.from_support(support, k)
        for coeffs in _iter_mds_coeffs(p, d, ell):
            if scheme == "grs" and ell > 1:
                try:
                    grs_from_matrix(coeffs, p)
                except NotGrs:
                    continue
            demand = DemandSpec(field=field, num_messages=k,
                                support=support, coeffs=coeffs)
            if ell == 1:
                rep_choices = itertools.permutations(range(p), d)
            else:
                rep_choices = (None,)
            for rep in rep_choices:
                _, point_head = dual_head(demand, rep)
                unused = [w for w in range(p) if w not in set(point_head)]
                for mults in itertools.product(range(1, p), repeat=k - d):
                    for points in itertools.permutations(unused, k - d):
                        key = QueryKey(ext_multipliers=mults,
                                       ext_points=points,
                                       assignment=assignment,
                                       rep_points=rep)
                        mat = np.asarray(build(demand, key))
                        mkey = _matrix_key(mat)
                        if mkey not in group_counts:
                            group_counts[mkey] = 0
                            group_by_support[mkey] = {}
                            group_matrix[mkey] = mat
                        total += 1
                        group_counts[mkey] += 1
                        per = group_by_support[mkey]
                        per[support] = per.get(support, 0) + 1

    prior = Fraction(1, n_supports)
    groups = []
    tv_max = Fraction(0)
    all_supports = list(itertools.combinations(range(k), d))
    for mkey, count in group_counts.items():
        per = group_by_support[mkey]
        posterior = {w: Fraction(c, count) for w, c in per.items()}
        tv = sum(
            abs(posterior.get(w, Fraction(0)) - prior) for w in all_supports
        ) / 2
        tv_max = max(tv_max, tv)
        groups.append(PosteriorGroup(
            matrix=group_matrix[mkey],
            count=count,
            posterior=posterior,
            tv=tv,
        ))
    groups.sort(key=lambda gr: -gr.count)
    return PosteriorTable(
        prior=prior,
        total_tuples=total,
        groups=tuple(groups),
        tv_max=tv_max,
    )
