"""Single-server private linear transformation: the three protocol roles.

The user wants L linear combinations (coefficient matrix V, one row per
combination) of the D messages indexed by a support set W, out of K messages
total, without the server learning anything about W. The user sends a single
matrix G; the server returns G times the dataset; the user combines the
answer rows to read off the L wanted values. The answer has K - D + L rows,
which is optimal, against K for downloading everything and L * (K - D + 1)
for fetching each combination separately.

Two query builders share the same recovery interface:

* "grs" mode follows the multiplier/evaluation-point construction when the
  coefficient matrix has that shape: dualize on the support, extend with the
  key's random columns, dualize back.
* "generic" mode works for any MDS coefficient matrix: place a parity basis
  of it on the support columns, draw the complement columns of the parity
  matrix from key-derived randomness until the result is MDS, and take the
  query as a canonical basis of its null space.

Both are deterministic given (demand, key, mode).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import log2

import numpy as np

from .errors import (
    DimensionMismatch,
    ExtensionFailed,
    FieldTooSmall,
    NotGrs,
    ParamInvalid,
    ParamMismatch,
    RecoveryCheckFailed,
    SpecInvalid,
)
from .field import PrimeField, inv_mod
from .grs import (
    ColumnAssignment,
    GrsSpec,
    assemble_columns,
    draw_distinct_points,
    extend_dual,
    generator_from_parity,
    grs_dual_multipliers,
    grs_from_matrix,
    grs_generator,
    recovery_polynomials,
)
from .linalg import is_mds, mat_mul, null_space_basis, rank, solve_right

MODES = ("grs", "generic")

# Resample attempts for the generic-mode complement columns.
_RESAMPLE_CAP = 100


@dataclass(frozen=True, eq=False)
class DemandSpec:
    """What the user wants: L combinations of the messages indexed by support.

    support holds 0-based message indices, sorted; coeffs is L x D and must
    be MDS, which is exactly the class of demands the protocol serves.
    """

    field: PrimeField
    num_messages: int
    support: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        support = tuple(sorted(int(c) for c in self.support))
        object.__setattr__(self, "support", support)
        coeffs = self.field.residues(np.atleast_2d(self.coeffs))
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        d = len(support)
        ell = coeffs.shape[0]
        if len(set(support)) != d:
            raise SpecInvalid("support indices must be distinct")
        if not (1 <= ell <= d <= self.num_messages):
            raise SpecInvalid(
                f"need 1 <= {ell} combinations <= {d} supported messages "
                f"<= {self.num_messages} total"
            )
        if coeffs.shape[1] != d:
            raise DimensionMismatch(
                f"coeffs is {coeffs.shape}, support has {d} indices"
            )
        if support[0] < 0 or support[-1] >= self.num_messages:
            raise SpecInvalid(f"support {support} out of range")
        if not is_mds(coeffs, self.field.p):
            raise SpecInvalid("coefficient matrix must be MDS")

    @property
    def support_size(self):
        return len(self.support)

    @property
    def demand_dim(self):
        return self.coeffs.shape[0]


@dataclass(frozen=True)
class QueryKey:
    """The user's private randomness: extension columns plus the placement.

    ext_multipliers are nonzero; ext_points are distinct among themselves
    (disjointness from the demand-derived head points is enforced when the
    query is built). assignment fixes where support and complement columns
    land.

    rep_points carries the demand-row evaluation points when the demand has a
    single row. A single row fits a degree-0 evaluation code at any point set,
    so the points are free randomness; fixing them publicly would let a server
    read the support off the query. With two or more rows the points are
    determined by the demand itself and rep_points stays None.
    """

    ext_multipliers: tuple
    ext_points: tuple
    assignment: ColumnAssignment
    rep_points: tuple = None

    def __post_init__(self):
        mults = tuple(int(v) for v in self.ext_multipliers)
        points = tuple(int(v) for v in self.ext_points)
        object.__setattr__(self, "ext_multipliers", mults)
        object.__setattr__(self, "ext_points", points)
        if len(mults) != len(points):
            raise SpecInvalid(
                f"{len(mults)} multipliers but {len(points)} points"
            )
        total = len(self.assignment.perm)
        if total - self.assignment.num_demand != len(points):
            raise SpecInvalid(
                f"{len(points)} extension columns do not fill "
                f"{total - self.assignment.num_demand} complement positions"
            )
        if any(v == 0 for v in mults):
            raise SpecInvalid("extension multipliers must be nonzero")
        if len(set(points)) != len(points):
            raise SpecInvalid("extension points must be distinct")
        if self.rep_points is not None:
            rep = tuple(int(v) for v in self.rep_points)
            object.__setattr__(self, "rep_points", rep)
            if len(set(rep)) != len(rep):
                raise SpecInvalid("demand-row points must be distinct")
            if set(rep) & set(points):
                raise SpecInvalid(
                    "demand-row points collide with extension points"
                )


@dataclass(frozen=True, eq=False)
class Query:
    """What crosses the wire: the matrix G plus public dimensions."""

    field: PrimeField
    support_size: int
    demand_dim: int
    msg_len: int
    matrix: np.ndarray

    def __post_init__(self):
        m = self.field.residues(np.atleast_2d(self.matrix))
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        k = m.shape[1]
        if not (1 <= self.demand_dim <= self.support_size <= k):
            raise ParamInvalid(
                f"bad dims: L={self.demand_dim} D={self.support_size} K={k}"
            )
        if self.msg_len < 1:
            raise ParamInvalid(f"msg_len must be >= 1, got {self.msg_len}")
        if m.shape[0] != k - self.support_size + self.demand_dim:
            raise DimensionMismatch(
                f"query has {m.shape[0]} rows, dims require "
                f"{k - self.support_size + self.demand_dim}"
            )

    @property
    def num_messages(self):
        return self.matrix.shape[1]

    @property
    def answer_len(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Answer:
    """The server's reply: one combined message per query row."""

    field: PrimeField
    entries: np.ndarray

    def __post_init__(self):
        e = self.field.residues(np.atleast_2d(self.entries))
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def length(self):
        return self.entries.shape[0]

    @property
    def msg_len(self):
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class RecoveryPlan:
    """Per-combination vectors applied to the answer to read off the result."""

    mode: str
    combiners: np.ndarray

    def __post_init__(self):
        if self.mode not in MODES:
            raise ParamInvalid(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class RateReport:
    """Exact download rates: this protocol against the two baselines."""

    num_messages: int
    support_size: int
    demand_dim: int
    jplt_rate: Fraction
    pir_baseline: Fraction
    plc_baseline: Fraction
    answer_bits: float = None  # None when no field size was given


def rate_report(num_messages, support_size, demand_dim, p=None, msg_len=1):
    """Exact rational rate summary for the given dimensions.

    The protocol rate is L / (K - D + L); downloading everything costs L / K;
    fetching the L combinations one at a time costs 1 / (K - D + 1) per
    combination. answer_bits is the answer size in bits when p is given.
    """
    k, d, ell = num_messages, support_size, demand_dim
    if not (1 <= ell <= d <= k):
        raise ParamInvalid(f"need 1 <= L <= D <= K, got L={ell} D={d} K={k}")
    bits = float((k - d + ell) * msg_len * log2(p)) if p is not None else None
    return RateReport(
        num_messages=k,
        support_size=d,
        demand_dim=ell,
        jplt_rate=Fraction(ell, k - d + ell),
        pir_baseline=Fraction(ell, k),
        plc_baseline=Fraction(1, k - d + 1),
        answer_bits=bits,
    )


def embedded_demand(demand):
    """L x K matrix with the coefficients at the support columns, 0 elsewhere."""
    u = np.zeros((demand.demand_dim, demand.num_messages), dtype=demand.field.dtype)
    u[:, list(demand.support)] = demand.coeffs
    return u


def _rep_spec(demand, rep_points=None):
    # multiplier/point form of the demand rows; NotGrs when none exists
    p = demand.field.p
    if rep_points is not None:
        if demand.demand_dim != 1:
            raise ParamInvalid(
                "demand-row points are free only for single-row demands"
            )
        return GrsSpec(p, tuple(int(v) for v in demand.coeffs[0]),
                       rep_points, 1)
    return grs_from_matrix(demand.coeffs, p)


def dual_head(demand, rep_points=None):
    """(multipliers, points) of the support-length dual used to seed a query.

    For a coefficient matrix in multiplier/point form these are its dual
    multipliers on its own points; otherwise the points default to the first
    D field elements and the multipliers to ones (the generic builder uses
    the key only as an entropy source, so placeholders are fine). rep_points,
    allowed for single-row demands only, overrides the canonical point choice
    by reading the row as multipliers at those points.
    """
    try:
        spec = _rep_spec(demand, rep_points)
    except NotGrs:
        d = demand.support_size
        return (1,) * d, tuple(range(d))
    return grs_dual_multipliers(spec), spec.eval_points


def sample_query_key(demand, rng):
    """Draw a fresh QueryKey for the demand from rng.

    A single-row demand first draws its D distinct demand-row points. Those
    points pick which evaluation code carries the row, so they must be part
    of the key: any fixed public choice would hand the server the support.
    Extension multiplier draws follow, then extension point draws, so a fixed
    draw stream reproduces a key exactly.
    """
    k = demand.num_messages
    d = demand.support_size
    p = demand.field.p
    if p < k:
        raise FieldTooSmall(
            f"{k} messages need at least {k} distinct evaluation points"
        )
    rep = None
    if demand.demand_dim == 1:
        rep = draw_distinct_points(p, d, rng)
    mult_head, point_head = dual_head(demand, rep)
    ext = extend_dual(p, mult_head, point_head, k, rng,
                      d - demand.demand_dim)
    return QueryKey(
        ext_multipliers=ext.multipliers[d:],
        ext_points=ext.eval_points[d:],
        assignment=ColumnAssignment.from_support(demand.support, k),
        rep_points=rep,
    )


def _generic_rng(field, demand, key):
    # all inputs that define the query feed the stream, so the builder stays
    # a deterministic function of (demand, key)
    entropy = [field.p, demand.num_messages, demand.support_size,
               demand.demand_dim]
    entropy.extend(key.ext_multipliers)
    entropy.extend(key.ext_points)
    entropy.extend(key.assignment.perm)
    if key.rep_points is not None:
        entropy.extend(key.rep_points)
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _build_grs(demand, key):
    p = demand.field.p
    spec = _rep_spec(demand, key.rep_points)  # NotGrs for non-GRS rows
    mult_head = grs_dual_multipliers(spec)
    point_head = spec.eval_points
    full = GrsSpec(
        p,
        mult_head + key.ext_multipliers,
        point_head + key.ext_points,
        demand.support_size - demand.demand_dim,
    )
    parity = assemble_columns(full, key.assignment)
    g, gen_spec = generator_from_parity(parity)
    complement = [gen_spec.eval_points[c]
                  for c in key.assignment.complement_positions]
    plan = recovery_polynomials(gen_spec, complement, demand.demand_dim)
    return g, plan


def _build_generic(demand, key):
    p = demand.field.p
    k = demand.num_messages
    d = demand.support_size
    ell = demand.demand_dim
    parity_rows = d - ell
    head = null_space_basis(demand.coeffs, p)
    rng = _generic_rng(demand.field, demand, key)
    complement = [c for c in range(k) if c not in set(demand.support)]
    h = np.zeros((parity_rows, k), dtype=demand.field.dtype)
    h[:, list(demand.support)] = head
    for _ in range(_RESAMPLE_CAP):
        if parity_rows == 0 or not complement:
            break
        draw = rng.integers(p, size=(parity_rows, len(complement)), dtype=np.int64)
        h[:, complement] = draw.astype(demand.field.dtype, copy=False)
        if is_mds(h, p):
            break
    else:
        raise ExtensionFailed(
            f"no MDS parity matrix found in {_RESAMPLE_CAP} draws"
        )
    g = null_space_basis(h, p)
    target = embedded_demand(demand)
    plan = np.zeros((ell, g.shape[0]), dtype=demand.field.dtype)
    for l in range(ell):
        plan[l] = solve_right(g.T, target[l], p)
    return g, plan


def build_query(demand, key, mode="grs", msg_len=1):
    """Build the query matrix and the matching recovery plan.

    The plan is checked: each combiner row applied to the query matrix must
    reproduce the demand row embedded at the support columns, exactly. If the
    product is off by a per-row scalar it is rescaled; anything else raises
    RecoveryCheckFailed.
    """
    if mode not in MODES:
        raise ParamInvalid(f"mode must be one of {MODES}, got {mode!r}")
    p = demand.field.p
    if p < demand.num_messages:
        raise FieldTooSmall(
            f"{demand.num_messages} messages need a field of at least that size"
        )
    if key.rep_points is not None:
        if demand.demand_dim != 1:
            raise ParamInvalid(
                "demand-row points are free only for single-row demands"
            )
        if len(key.rep_points) != demand.support_size:
            raise DimensionMismatch(
                f"{len(key.rep_points)} demand-row points for a support of "
                f"{demand.support_size}"
            )
    if mode == "grs":
        g, plan = _build_grs(demand, key)
    else:
        g, plan = _build_generic(demand, key)
    target = embedded_demand(demand)
    plan = _check_plan(plan, g, target, p)
    query = Query(
        field=demand.field,
        support_size=demand.support_size,
        demand_dim=demand.demand_dim,
        msg_len=msg_len,
        matrix=g,
    )
    return query, RecoveryPlan(mode=mode, combiners=plan)


def _check_plan(plan, g, target, p):
    got = mat_mul(plan, g, p)
    if np.array_equal(got, target):
        return plan
    scaled = plan.copy()
    for l in range(target.shape[0]):
        want = target[l]
        nz = np.nonzero(want)[0]
        j = int(nz[0])
        if got[l, j] == 0:
            raise RecoveryCheckFailed("combiner row misses the demand row")
        s = int(want[j]) * inv_mod(int(got[l, j]), p) % p
        scaled[l] = scaled[l] * s % p
    if not np.array_equal(mat_mul(scaled, g, p), target):
        raise RecoveryCheckFailed("combiners do not reproduce the demand")
    return scaled


def server_answer(query, data):
    """Apply the query matrix to the dataset: one output row per query row."""
    if query.field.p != data.field.p:
        raise ParamMismatch(
            f"query field {query.field.p} != dataset field {data.field.p}"
        )
    if query.num_messages != data.num_messages:
        raise ParamMismatch(
            f"query covers {query.num_messages} messages, "
            f"dataset has {data.num_messages}"
        )
    if query.msg_len != data.msg_len:
        raise ParamMismatch(
            f"query expects message length {query.msg_len}, "
            f"dataset has {data.msg_len}"
        )
    return Answer(
        field=query.field,
        entries=mat_mul(query.matrix, data.messages, query.field.p),
    )


def recover(answer, plan):
    """Combine answer rows into the L requested values."""
    if plan.combiners.shape[1] != answer.length:
        raise DimensionMismatch(
            f"plan expects {plan.combiners.shape[1]} answer rows, "
            f"got {answer.length}"
        )
    return mat_mul(plan.combiners, answer.entries, answer.field.p)


def direct_demand_eval(data, demand):
    """Plaintext reference: the demanded combinations computed in the clear."""
    if data.field.p != demand.field.p:
        raise ParamMismatch(
            f"demand field {demand.field.p} != dataset field {data.field.p}"
        )
    if demand.num_messages != data.num_messages:
        raise ParamMismatch(
            f"demand covers {demand.num_messages} messages, "
            f"dataset has {data.num_messages}"
        )
    picked = data.messages[list(demand.support)]
    return mat_mul(demand.coeffs, picked, data.field.p)


def baseline_full_download(data):
    """Trivial baseline: the server ships every message."""
    return Answer(field=data.field, entries=data.messages.copy())


def baseline_plc_repeated(data, demand, keys=None, rng=None, mode="grs"):
    """Baseline running one single-combination exchange per demand row.

    Each row's support shrinks to its nonzero coefficients (a row demand must
    have all-nonzero coefficients to be valid). Returns (answers, values)
    where values stacks the L recovered combinations.

    keys supplies one QueryKey per row; without it, keys are sampled from rng.
    """
    if keys is None and rng is None:
        raise ParamInvalid("need either keys or rng")
    answers = []
    values = np.zeros((demand.demand_dim, data.msg_len), dtype=data.field.dtype)
    for l in range(demand.demand_dim):
        row = demand.coeffs[l]
        nz = np.nonzero(row)[0]
        sub = DemandSpec(
            field=demand.field,
            num_messages=demand.num_messages,
            support=tuple(demand.support[int(i)] for i in nz),
            coeffs=row[nz][None, :],
        )
        key = keys[l] if keys is not None else sample_query_key(sub, rng)
        query, plan = build_query(sub, key, mode=mode, msg_len=data.msg_len)
        ans = server_answer(query, data)
        answers.append(ans)
        values[l] = recover(ans, plan)[0]
    return answers, values


def random_demand(field, num_messages, support_size, demand_dim, rng,
                  scramble=False):
    """Random valid demand: sorted support plus an MDS coefficient matrix.

    The matrix is built in multiplier/point form (always MDS); scramble=True
    left-multiplies by a random invertible matrix, which keeps it MDS but
    usually destroys the multiplier/point shape, exercising the generic path.
    """
    p = field.p
    if not (1 <= demand_dim <= support_size <= num_messages):
        raise ParamInvalid(
            f"need 1 <= L <= D <= K, got L={demand_dim} "
            f"D={support_size} K={num_messages}"
        )
    if p < support_size:
        raise FieldTooSmall(f"{support_size} distinct points need p >= that")
    support = sorted(
        int(v) for v in rng.choice(num_messages, size=support_size, replace=False)
    )
    mults = []
    while len(mults) < support_size:
        v = int(rng.integers(p))
        if v != 0:
            mults.append(v)
    points = []
    seen = set()
    while len(points) < support_size:
        v = int(rng.integers(p))
        if v not in seen:
            seen.add(v)
            points.append(v)
    coeffs = grs_generator(GrsSpec(p, tuple(mults), tuple(points), demand_dim))
    if scramble:
        while True:
            t = rng.integers(p, size=(demand_dim, demand_dim), dtype=np.int64)
            t = t.astype(field.dtype, copy=False)
            if rank(t, p) == demand_dim:
                break
        coeffs = mat_mul(t, coeffs, p)
    return DemandSpec(
        field=field,
        num_messages=num_messages,
        support=tuple(support),
        coeffs=coeffs,
    )
