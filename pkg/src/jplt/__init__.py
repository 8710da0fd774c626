"""Private linear transformations of a remote dataset, single-server setting.

A user holding a demand (L linear combinations of D out of K messages)
builds a query matrix that reveals nothing about which messages are
involved, a server applies it to the dataset, and the user combines the
short answer into the wanted values. Includes exact privacy auditing tools
and a small TCP harness.
"""

from .backend import active_backend, set_backend, work_dtype
from .errors import (
    DimensionMismatch,
    ExtensionFailed,
    FieldTooSmall,
    Inconsistent,
    InvalidField,
    JpltError,
    Malformed,
    NotGrs,
    NotMds,
    ParamInvalid,
    ParamMismatch,
    RecoveryCheckFailed,
    RowsExceedCols,
    SpecInvalid,
    WorkLimitExceeded,
    ZeroInverse,
)
from .field import (
    Dataset,
    PrimeField,
    inv_mod,
    is_prime,
    linear_combination,
    pow_mod,
    random_dataset,
)
from .linalg import (
    is_mds,
    mat_mul,
    null_space_basis,
    rank,
    rref,
    shortened_subcode,
    solve_right,
)
from .grs import (
    ColumnAssignment,
    GrsSpec,
    assemble_columns,
    draw_distinct_points,
    draw_nonzero,
    extend_dual,
    generator_from_parity,
    grs_dual_multipliers,
    grs_from_matrix,
    grs_generator,
    recovery_polynomials,
)
from .protocol import (
    Answer,
    DemandSpec,
    Query,
    QueryKey,
    RateReport,
    RecoveryPlan,
    baseline_full_download,
    baseline_plc_repeated,
    build_query,
    direct_demand_eval,
    dual_head,
    embedded_demand,
    random_demand,
    rate_report,
    recover,
    sample_query_key,
    server_answer,
)
from .audit import (
    PosteriorGroup,
    PosteriorTable,
    StructuralReport,
    SubsetRecord,
    gaussian_binomial,
    necessary_condition_check,
    posterior_oracle,
    verify_structural,
)
from .wire import AnswerServer, fetch, make_server, serve

__version__ = "0.1.0"
