"""q-deformed multiple polylogarithms: evaluation, algebraic relations and a verification harness."""
from .errors import (
    DivergentSeriesError,
    DomainError,
    InvalidParameterError,
    ModeError,
    ModeMismatchError,
    QMPLError,
    SingularLatticePointError,
    SingularPointError,
    UnsupportedRegimeError,
    UsageError,
)
from .evaluation import (
    Composition,
    EvalResult,
    TruncationSpec,
    auto_cutoff,
    check_derivative_relation,
    classical_limit_check,
    eval_classical_mpl,
    eval_qmpl,
    eval_qmzv,
)
from .qcalc import (
    JacksonResult,
    Letter,
    QParam,
    Regime,
    SingularPolicy,
    jackson_integral,
    jackson_iterated,
    lattice_cap_for,
    q_bracket,
    q_derivative,
)
from .report import Verdict, VerificationReport
from .scalar import Mode, bigfloat, exact, parse_scalar
from .stuffle import (
    DistributionRelation,
    IndexedWord,
    QMPLExpr,
    distribution_expand,
    stuffle_product,
    verify_distribution,
    verify_stuffle_numeric,
)

__version__ = "0.1.0"
