"""quadcorr: exact arithmetic for sums of two squares in real quadratic
fields, shifted correlation sums over boxes, and the Hilbert modular
subgroup structure behind their asymptotics."""

from .character import (
    VolumeReport,
    c_constant,
    covolume,
    index_gamma,
    kronecker,
    l_value_2,
    weighted_char_sums,
)
from .corrsum import (
    CorrelationResult,
    FCheckpoint,
    InvSqrtBound,
    RationalBound,
    RepTable,
    build_rep_table,
    correlation,
    correlation_grid,
    correlation_group_oracle,
    f_deviation,
    g_ratio,
)
from .errors import (
    CapacityExceeded,
    DepthExceeded,
    FieldMismatch,
    InvalidElement,
    NotInM,
    NotSquarefree,
    OutOfRange,
    QuadcorrError,
    ScaleGuard,
    WrongCongruenceClass,
)
from .hilbertgroup import (
    CayleyQuadruple,
    ConjugationReport,
    CosetGraph,
    MatO,
    cayley,
    coset_bfs,
    default_generators,
    equivalent,
    in_gamma,
    in_gamma0_2,
    random_cayley_quadruples,
    random_m_elements,
    representatives,
    u_exact,
    u_numeric,
    verify_conjugation,
)
from .quadfield import FieldData, QuadInt, RingClass, field_new
from .repcount import r_brute, r_sym, two_square_solutions
from .selfcheck import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "CapacityExceeded",
    "CayleyQuadruple",
    "CheckResult",
    "ConjugationReport",
    "CorrelationResult",
    "CosetGraph",
    "DepthExceeded",
    "FCheckpoint",
    "FieldData",
    "FieldMismatch",
    "InvSqrtBound",
    "InvalidElement",
    "MatO",
    "NotInM",
    "NotSquarefree",
    "OutOfRange",
    "QuadInt",
    "QuadcorrError",
    "RationalBound",
    "RepTable",
    "RingClass",
    "ScaleGuard",
    "VolumeReport",
    "WrongCongruenceClass",
    "build_rep_table",
    "c_constant",
    "cayley",
    "correlation",
    "correlation_grid",
    "correlation_group_oracle",
    "coset_bfs",
    "covolume",
    "default_generators",
    "equivalent",
    "f_deviation",
    "field_new",
    "g_ratio",
    "in_gamma",
    "in_gamma0_2",
    "index_gamma",
    "kronecker",
    "l_value_2",
    "r_brute",
    "r_sym",
    "random_cayley_quadruples",
    "random_m_elements",
    "representatives",
    "run_verification",
    "two_square_solutions",
    "u_exact",
    "u_numeric",
    "verify_conjugation",
    "weighted_char_sums",
]
