"""betabounds: weighted integrals of (x-a)^p (b-x)^q f(x), Gauss rules
for the weight, Beta-function upper bounds and empirical verification."""

from .bounds import (
    BoundReport,
    ParameterError,
    TheoremId,
    bound_p_holder,
    bound_p_plain,
    bound_p_power,
    bound_q_holder,
    bound_q_plain,
    bound_q_power,
    evaluate_bound,
    full_report,
)
from .certify import (
    ConvexityCertificate,
    ConvexityClass,
    Resolution,
    Witness,
    certify,
)
from .dsl import (
    EvaluationError,
    FunctionSpec,
    Interval,
    ParseError,
    UnknownIdentifierError,
    evaluate,
    evaluate_many,
    parse,
    power_transform,
    to_source,
)
from .kernels import BACKEND, USING_NUMBA
from .quadrature import (
    BudgetExceededError,
    IntegralResult,
    QuadratureRule,
    WeightedProblem,
    apply_rule,
    build_rule,
    integrate_direct,
    integrate_reference,
    rest_term,
    substitute,
)
from .special import DomainError, beta, log_beta, log_gamma
from .sweep import (
    SweepConfig,
    SweepSummary,
    default_config,
    emit_report,
    parse_config,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "USING_NUMBA",
    "BoundReport",
    "BudgetExceededError",
    "ConvexityCertificate",
    "ConvexityClass",
    "DomainError",
    "EvaluationError",
    "FunctionSpec",
    "IntegralResult",
    "Interval",
    "ParameterError",
    "ParseError",
    "QuadratureRule",
    "Resolution",
    "SweepConfig",
    "SweepSummary",
    "TheoremId",
    "UnknownIdentifierError",
    "Witness",
    "WeightedProblem",
    "apply_rule",
    "beta",
    "bound_p_holder",
    "bound_p_plain",
    "bound_p_power",
    "bound_q_holder",
    "bound_q_plain",
    "bound_q_power",
    "build_rule",
    "certify",
    "default_config",
    "emit_report",
    "evaluate",
    "evaluate_bound",
    "evaluate_many",
    "full_report",
    "integrate_direct",
    "integrate_reference",
    "log_beta",
    "log_gamma",
    "parse",
    "parse_config",
    "power_transform",
    "rest_term",
    "run_sweep",
    "substitute",
    "to_source",
]
