"""Two independent evaluations of the weighted integral

    I = integral over [a,b] of (x-a)^p (b-x)^q f(x) dx,   p, q > 0:

(i) an adaptive Gauss-Kronrod reference applied to the substituted
    integrand on [0,1], and (ii) an m-node Gauss rule for the weight,
    built from the Jacobi three-term recurrence via the symmetric
    tridiagonal eigenvalue method (Golub-Welsch).
"""

from dataclasses import dataclass

import numpy as np

from .dsl import FunctionSpec, Interval, evaluate_many
from .kernels import tridiag_eigen
from .special import beta, log_beta

__all__ = [
    "WeightedProblem",
    "QuadratureRule",
    "IntegralResult",
    "BudgetExceededError",
    "RuleConstructionError",
    "substitute",
    "integrate_reference",
    "integrate_direct",
    "build_rule",
    "apply_rule",
    "rest_term",
]

MAX_NODES = 200
DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class WeightedProblem:
    """The tuple (a, b, p, q, f) defining the integral under study."""

    interval: Interval
    p: float
    q: float
    f: FunctionSpec

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        if not (self.p > 0.0 and self.q > 0.0):
            raise ValueError(f"p and q must be > 0, got p={self.p}, q={self.q}")


@dataclass(frozen=True)
class QuadratureRule:
    m: int
    nodes: np.ndarray
    weights: np.ndarray
    p: float
    q: float
    interval: Interval


@dataclass(frozen=True)
class IntegralResult:
    value: float
    method: str  # "reference" | "gauss_jacobi"
    error_estimate: float | None
    evaluations: int


class BudgetExceededError(RuntimeError):
    """Adaptive integration ran out of evaluations; carries the best value."""

    def __init__(self, value: float, error_estimate: float, evaluations: int):
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations
        super().__init__(
            f"integration budget exceeded after {evaluations} evaluations "
            f"(best value {value!r}, estimate {error_estimate!r})")


class RuleConstructionError(RuntimeError):
    pass


# --- adaptive Gauss-Kronrod (7, 15) engine -----------------------------

_XGK = np.array([
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0,
])
_WGK = np.array([
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278,
])
_WG = np.array([
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694,
])

# 15 nodes on [-1,1]; Gauss-7 points are every second Kronrod node.
_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
_WK15 = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_WG7 = np.zeros(15)
_WG7[1:14:2] = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])

_EPS = np.finfo(float).eps


def _gk_panels(func, lo, hi):
    """Evaluate the (7,15) pair on a batch of panels.

    lo, hi are arrays of panel endpoints; returns per-panel Kronrod value,
    error estimate, and integral of |f| (QUADPACK-style scaling).
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = func(pts.ravel()).reshape(pts.shape)
    resk = vals @ _WK15
    resg = vals @ _WG7
    reskh = resk * 0.5
    resabs = (np.abs(vals) @ _WK15) * np.abs(half)
    resasc = (np.abs(vals - reskh[:, None]) @ _WK15) * np.abs(half)
    value = resk * half
    err = np.abs((resk - resg) * half)
    nonzero = (resasc != 0.0) & (err != 0.0)
    scaled = err.copy()
    scaled[nonzero] = resasc[nonzero] * np.minimum(
        1.0, (200.0 * err[nonzero] / resasc[nonzero]) ** 1.5)
    return value, scaled, resabs


def _adaptive_gk(func, lo: float, hi: float, rel_tol: float,
                 max_evals: int = DEFAULT_BUDGET):
    """Globally adaptive bisection; returns (value, error_estimate, evals).

    Deterministic: single-threaded, final sum taken in left-endpoint
    order.  Raises BudgetExceededError past max_evals.
    """
    los = np.array([lo], dtype=float)
    his = np.array([hi], dtype=float)
    vals, errs, absv = _gk_panels(func, los, his)
    evals = 15

    while True:
        order = np.argsort(los, kind="stable")
        total = float(np.sum(vals[order]))
        total_err = float(np.sum(errs))
        resabs = float(np.sum(absv))
        target = max(rel_tol * abs(total), 50.0 * _EPS * resabs)
        if total_err <= target:
            return total, total_err, evals
        # split every panel holding more than its share of the error
        # budget (at least the worst panel always splits)
        split = errs > target / len(los)
        if not split.any():
            split[int(np.argmax(errs))] = True
        n_new = 2 * int(np.count_nonzero(split))
        if evals + 15 * n_new > max_evals:
            raise BudgetExceededError(total, total_err, evals)
        keep = ~split
        mids = 0.5 * (los[split] + his[split])
        child_lo = np.concatenate([los[split], mids])
        child_hi = np.concatenate([mids, his[split]])
        new_vals, new_errs, new_abs = _gk_panels(func, child_lo, child_hi)
        evals += 15 * n_new
        los = np.concatenate([los[keep], child_lo])
        his = np.concatenate([his[keep], child_hi])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])
        absv = np.concatenate([absv[keep], new_abs])


# --- the two integration routes ----------------------------------------

def substitute(problem: WeightedProblem):
    """Map the weighted integral to [0,1]: returns g with

        g(t) = (b-a)^(p+q+1) (1-t)^p t^q f(t*a + (1-t)*b)

    whose integral over [0,1] equals the weighted integral over [a,b].
    Note the orientation: t = 0 corresponds to x = b.
    """
    a, b = problem.interval.a, problem.interval.b
    p, q, f = problem.p, problem.q, problem.f
    scale = (b - a) ** (p + q + 1.0)

    def integrand(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        xs = ts * a + (1.0 - ts) * b
        return scale * (1.0 - ts) ** p * ts ** q * evaluate_many(f, xs)

    return integrand


def _validate_rel_tol(rel_tol: float) -> float:
    rel_tol = float(rel_tol)
    if not (1e-14 < rel_tol < 1e-2):
        raise ValueError(f"rel_tol must lie in (1e-14, 1e-2), got {rel_tol}")
    return rel_tol


def integrate_reference(problem: WeightedProblem, rel_tol: float = 1e-10,
                        max_evals: int = DEFAULT_BUDGET) -> IntegralResult:
    """Adaptive reference value of the weighted integral (via [0,1] form)."""
    rel_tol = _validate_rel_tol(rel_tol)
    value, err, evals = _adaptive_gk(substitute(problem), 0.0, 1.0,
                                     rel_tol, max_evals)
    return IntegralResult(value=value, method="reference",
                          error_estimate=err, evaluations=evals)


def integrate_direct(problem: WeightedProblem, rel_tol: float = 1e-10,
                     max_evals: int = DEFAULT_BUDGET) -> IntegralResult:
    """Integrate (x-a)^p (b-x)^q f(x) over [a,b] without the [0,1]
    normal form; the independent cross-check of the substitution identity."""
    rel_tol = _validate_rel_tol(rel_tol)
    a, b = problem.interval.a, problem.interval.b
    p, q, f = problem.p, problem.q, problem.f

    def integrand(xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        w = np.clip(xs - a, 0.0, None) ** p * np.clip(b - xs, 0.0, None) ** q
        return w * evaluate_many(f, xs)

    value, err, evals = _adaptive_gk(integrand, a, b, rel_tol, max_evals)
    return IntegralResult(value=value, method="reference",
                          error_estimate=err, evaluations=evals)


# --- Gauss rule for the weight ------------------------------------------

def _jacobi_recurrence(alpha: float, beta_: float, m: int):
    """Three-term recurrence coefficients for the Jacobi weight
    (1-u)^alpha (1+u)^beta on [-1,1] (Gautschi's r_jacobi), excluding
    the zeroth moment."""
    d = np.zeros(m)
    e2 = np.zeros(max(m - 1, 0))
    apb = alpha + beta_
    d[0] = (beta_ - alpha) / (apb + 2.0)
    if m > 1:
        e2[0] = (4.0 * (alpha + 1.0) * (beta_ + 1.0)
                 / ((apb + 2.0) ** 2 * (apb + 3.0)))
    for k in range(1, m):
        two = 2.0 * k + apb
        d[k] = (beta_ ** 2 - alpha ** 2) / (two * (two + 2.0))
        if k < m - 1:
            kk = k + 1.0
            two2 = 2.0 * kk + apb
            e2[k] = (4.0 * kk * (kk + alpha) * (kk + beta_) * (kk + apb)
                     / (two2 ** 2 * (two2 ** 2 - 1.0)))
    return d, e2


def build_rule(p: float, q: float, interval: Interval, m: int) -> QuadratureRule:
    """m-node Gauss rule such that sum B_k f(node_k) equals the weighted
    integral exactly for polynomials of degree <= 2m-1.

    Nodes are eigenvalues of the symmetric tridiagonal recurrence matrix;
    weights come from the first eigenvector components scaled by the
    zeroth moment.
    """
    p, q = float(p), float(q)
    if not (p > 0.0 and q > 0.0):
        raise ValueError(f"p and q must be > 0, got p={p}, q={q}")
    m = int(m)
    if not (1 <= m <= MAX_NODES):
        raise ValueError(f"node count must be in [1, {MAX_NODES}], got {m}")
    # Orthogonality on s in [0,1] with weight s^p (1-s)^q, where
    # x = a + (b-a) s keeps nodes ascending.  Under s = (u+1)/2 this is
    # the Jacobi weight with alpha = q, beta = p.
    d, e2 = _jacobi_recurrence(q, p, m)
    d01 = 0.5 * (d + 1.0)
    e01 = np.sqrt(e2) * 0.5
    z = np.zeros(m)
    z[0] = 1.0
    ierr = tridiag_eigen(d01, e01, z)
    if ierr != 0:
        raise RuleConstructionError(
            f"QL iteration failed to converge for eigenvalue {ierr - 1}")
    mu0 = beta(p + 1.0, q + 1.0)
    a, b = interval.a, interval.b
    scale = (b - a) ** (p + q + 1.0)
    nodes = a + (b - a) * d01
    weights = scale * mu0 * z ** 2
    return QuadratureRule(m=m, nodes=nodes, weights=weights,
                          p=p, q=q, interval=interval)


def apply_rule(rule: QuadratureRule, f: FunctionSpec,
               companion: QuadratureRule | None = None) -> IntegralResult:
    """sum_k B_k f(node_k).  If a companion rule (usually m+1 nodes) is
    given, the error estimate is the difference between the two rules'
    values; otherwise it is reported unavailable (None)."""
    value = float(rule.weights @ evaluate_many(f, rule.nodes))
    evals = rule.m
    estimate = None
    if companion is not None:
        other = float(companion.weights @ evaluate_many(f, companion.nodes))
        estimate = abs(value - other)
        evals += companion.m
    return IntegralResult(value=value, method="gauss_jacobi",
                          error_estimate=estimate, evaluations=evals)


def rest_term(problem: WeightedProblem, m: int) -> float:
    """Empirical quadrature error: reference integral minus the m-node
    rule's value."""
    rule = build_rule(problem.p, problem.q, problem.interval, m)
    reference = integrate_reference(problem, rel_tol=1e-12)
    return reference.value - apply_rule(rule, problem.f).value
