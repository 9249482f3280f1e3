"""The six closed-form upper bounds on the weighted integral

    integral over [a,b] of (x-a)^p (b-x)^q f(x) dx

and the full pipeline that certifies a bound's hypothesis, computes both
sides, and reports the slack.  Three bounds assume a quasi-convex
hypothesis (on f, |f|^(k/(k-1)), |f|^l respectively) and take the max of
the endpoint terms; their three P-convex counterparts replace the max
with a sum.
"""

import enum
import math
from dataclasses import dataclass

from .certify import (
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    ConvexityCertificate,
    ConvexityClass,
    Resolution,
    certify,
)
from .dsl import FunctionSpec, evaluate, power_transform
from .quadrature import IntegralResult, WeightedProblem, integrate_reference
from .special import log_beta

__all__ = [
    "TheoremId",
    "BoundReport",
    "ParameterError",
    "bound_q_plain",
    "bound_q_holder",
    "bound_q_power",
    "bound_p_plain",
    "bound_p_holder",
    "bound_p_power",
    "evaluate_bound",
    "full_report",
    "MAX_K",
]

MAX_K = 1e3


class ParameterError(ValueError):
    pass


class TheoremId(enum.Enum):
    Q_PLAIN = "Q_PLAIN"
    Q_HOLDER = "Q_HOLDER"
    Q_POWER = "Q_POWER"
    P_PLAIN = "P_PLAIN"
    P_HOLDER = "P_HOLDER"
    P_POWER = "P_POWER"

    @property
    def param_name(self) -> str | None:
        if self in (TheoremId.Q_HOLDER, TheoremId.P_HOLDER):
            return "k"
        if self in (TheoremId.Q_POWER, TheoremId.P_POWER):
            return "l"
        return None

    @property
    def hypothesis_class(self) -> ConvexityClass:
        if self.value.startswith("Q"):
            return ConvexityClass.QUASI_CONVEX
        return ConvexityClass.P_CONVEX


@dataclass(frozen=True)
class BoundReport:
    theorem: TheoremId
    param: float | None
    hypothesis_certificate: ConvexityCertificate
    bound: float
    integral: IntegralResult
    slack: float
    f_a: float
    f_b: float

    @property
    def hypothesis_satisfied(self) -> bool:
        return not self.hypothesis_certificate.falsified

    @property
    def tightness(self) -> float | None:
        if self.bound == 0.0:
            return None
        return self.integral.value / self.bound


def _check_k(k: float) -> float:
    k = float(k)
    if not (1.0 < k <= MAX_K):
        raise ParameterError(f"k must lie in (1, {MAX_K:g}], got {k}")
    return k


def _endpoints(problem: WeightedProblem) -> tuple[float, float]:
    return (evaluate(problem.f, problem.interval.a),
            evaluate(problem.f, problem.interval.b))


def _width_factor(problem: WeightedProblem) -> float:
    return problem.interval.width ** (problem.p + problem.q + 1.0)


def _power_sum(u: float, v: float, s: float, combine: str) -> float:
    """(u^s + v^s)^(1/s) or (max(u^s, v^s))^(1/s) for u, v >= 0.

    Evaluated with the larger value factored out so that exponents in the
    hundreds (the large-l regime) cannot overflow; this is the same
    expression, not the max shortcut.
    """
    m = max(u, v)
    if m == 0.0:
        return 0.0
    inner = (u / m) ** s
    other = (v / m) ** s
    if combine == "sum":
        return m * (inner + other) ** (1.0 / s)
    return m * max(inner, other) ** (1.0 / s)


def bound_q_plain(problem: WeightedProblem) -> float:
    """(b-a)^(p+q+1) B(p+1, q+1) max{f(a), f(b)} (quasi-convex f)."""
    f_a, f_b = _endpoints(problem)
    return (_width_factor(problem)
            * math.exp(log_beta(problem.p + 1.0, problem.q + 1.0))
            * max(f_a, f_b))


def bound_q_holder(problem: WeightedProblem, k: float) -> float:
    """(b-a)^(p+q+1) [B(kp+1, kq+1)]^(1/k)
    (max{|f(a)|^(k/(k-1)), |f(b)|^(k/(k-1))})^((k-1)/k), for k > 1."""
    k = _check_k(k)
    f_a, f_b = _endpoints(problem)
    s = k / (k - 1.0)
    beta_root = math.exp(log_beta(k * problem.p + 1.0, k * problem.q + 1.0) / k)
    return _width_factor(problem) * beta_root * _power_sum(abs(f_a), abs(f_b), s, "max")


def bound_q_power(problem: WeightedProblem, l: float) -> float:
    """(b-a)^(p+q+1) B(p+1, q+1) (max{|f(a)|^l, |f(b)|^l})^(1/l), l >= 1."""
    l = float(l)
    if not l >= 1.0:
        raise ParameterError(f"l must be >= 1, got {l}")
    f_a, f_b = _endpoints(problem)
    return (_width_factor(problem)
            * math.exp(log_beta(problem.p + 1.0, problem.q + 1.0))
            * _power_sum(abs(f_a), abs(f_b), l, "max"))


def bound_p_plain(problem: WeightedProblem) -> float:
    """(b-a)^(p+q+1) B(p+1, q+1) (|f(a)| + |f(b)|) (P-convex |f|)."""
    f_a, f_b = _endpoints(problem)
    return (_width_factor(problem)
            * math.exp(log_beta(problem.p + 1.0, problem.q + 1.0))
            * (abs(f_a) + abs(f_b)))


def bound_p_holder(problem: WeightedProblem, k: float) -> float:
    """(b-a)^(p+q+1) [B(kp+1, kq+1)]^(1/k)
    (|f(a)|^(k/(k-1)) + |f(b)|^(k/(k-1)))^((k-1)/k), for k > 1."""
    k = _check_k(k)
    f_a, f_b = _endpoints(problem)
    s = k / (k - 1.0)
    beta_root = math.exp(log_beta(k * problem.p + 1.0, k * problem.q + 1.0) / k)
    return _width_factor(problem) * beta_root * _power_sum(abs(f_a), abs(f_b), s, "sum")


def bound_p_power(problem: WeightedProblem, l: float, allow_l_one: bool = False) -> float:
    """(b-a)^(p+q+1) B(p+1, q+1) (|f(a)|^l + |f(b)|^l)^(1/l), l > 1.

    The stated hypothesis needs l > 1; pass allow_l_one=True to relax to
    l >= 1 (the formula is continuous there).
    """
    l = float(l)
    floor = 1.0 if allow_l_one else math.nextafter(1.0, 2.0)
    if not l >= floor:
        raise ParameterError(
            f"l must be > 1 (or >= 1 with allow_l_one), got {l}")
    f_a, f_b = _endpoints(problem)
    return (_width_factor(problem)
            * math.exp(log_beta(problem.p + 1.0, problem.q + 1.0))
            * _power_sum(abs(f_a), abs(f_b), l, "sum"))


_EVALUATORS = {
    TheoremId.Q_PLAIN: lambda prob, param, relax: bound_q_plain(prob),
    TheoremId.Q_HOLDER: lambda prob, param, relax: bound_q_holder(prob, param),
    TheoremId.Q_POWER: lambda prob, param, relax: bound_q_power(prob, param),
    TheoremId.P_PLAIN: lambda prob, param, relax: bound_p_plain(prob),
    TheoremId.P_HOLDER: lambda prob, param, relax: bound_p_holder(prob, param),
    TheoremId.P_POWER: lambda prob, param, relax: bound_p_power(prob, param, relax),
}


def evaluate_bound(problem: WeightedProblem, theorem: TheoremId,
                   param: float | None = None, allow_l_one: bool = False) -> float:
    theorem = TheoremId(theorem)
    if (theorem.param_name is None) != (param is None):
        need = theorem.param_name or "no parameter"
        raise ParameterError(f"{theorem.value} takes {need}, got param={param!r}")
    return _EVALUATORS[theorem](problem, param, allow_l_one)


def hypothesis_function(f: FunctionSpec, theorem: TheoremId,
                        param: float | None = None) -> FunctionSpec:
    """The function whose convexity class the bound's hypothesis
    constrains: f itself for Q_PLAIN, |f| for P_PLAIN, |f|^(k/(k-1)) for
    the Holder pair, |f|^l for the power pair."""
    theorem = TheoremId(theorem)
    if theorem is TheoremId.Q_PLAIN:
        return f
    if theorem is TheoremId.P_PLAIN:
        return power_transform(f, 1.0)
    if theorem in (TheoremId.Q_HOLDER, TheoremId.P_HOLDER):
        k = _check_k(param)
        return power_transform(f, k / (k - 1.0))
    l = float(param)
    return power_transform(f, l)


def full_report(problem: WeightedProblem, theorem: TheoremId,
                param: float | None = None,
                certify_resolution: Resolution = Resolution(),
                certify_tolerance: float = DEFAULT_TOLERANCE,
                integral_rel_tol: float = 1e-11,
                seed: int = DEFAULT_SEED,
                allow_l_one: bool = False) -> BoundReport:
    """Certify the hypothesis, evaluate both sides, assemble the report.

    A falsified hypothesis is not an error: the certificate records the
    counterexample and both sides are still computed, so the caller can
    probe whether the inequality survives without its hypothesis.
    """
    theorem = TheoremId(theorem)
    bound = evaluate_bound(problem, theorem, param, allow_l_one)
    target = hypothesis_function(problem.f, theorem, param)
    certificate = certify(target, problem.interval, theorem.hypothesis_class,
                          resolution=certify_resolution,
                          tolerance=certify_tolerance, seed=seed)
    integral = integrate_reference(problem, rel_tol=integral_rel_tol)
    f_a, f_b = _endpoints(problem)
    return BoundReport(theorem=theorem, param=param,
                       hypothesis_certificate=certificate, bound=bound,
                       integral=integral, slack=bound - integral.value,
                       f_a=f_a, f_b=f_b)
