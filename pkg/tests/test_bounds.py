import math

import pytest

from betabounds.bounds import (
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
    hypothesis_function,
)
from betabounds.certify import Resolution
from betabounds.dsl import Bin, Call, FunctionSpec, Interval, Neg, Num, Var, parse, to_source
from betabounds.quadrature import WeightedProblem, integrate_reference
from betabounds.special import beta

I01 = Interval(0.0, 1.0)

FAST = Resolution(n_xy=16, n_t=9, n_random=500)


def problem(source, a=0.0, b=1.0, p=1.0, q=1.0):
    return WeightedProblem(Interval(a, b), p, q, parse(source))


def reflect(f: FunctionSpec, a: float, b: float) -> FunctionSpec:
    """g(x) = f(a + b - x), built by AST substitution."""
    replacement = Bin("-", Num(a + b), Var())

    def sub(node):
        if isinstance(node, Var):
            return replacement
        if isinstance(node, Num):
            return node
        if isinstance(node, Neg):
            return Neg(sub(node.arg))
        if isinstance(node, Bin):
            return Bin(node.op, sub(node.left), sub(node.right))
        if isinstance(node, Call):
            return Call(node.fn, tuple(sub(arg) for arg in node.args))
        raise TypeError(node)

    ast = sub(f.ast)
    return FunctionSpec(source=to_source(ast), ast=ast)


# --- individual bound formulas ------------------------------------------

def test_q_plain_values():
    assert bound_q_plain(problem("1")) == pytest.approx(1 / 6, rel=1e-12)
    assert bound_q_plain(problem("x")) == pytest.approx(1 / 6, rel=1e-12)


def test_q_plain_derived_exp():
    prob = problem("exp(x)", a=1.0, b=3.0, p=2.0, q=0.5)
    expect = 2.0 ** 3.5 * beta(3.0, 1.5) * math.exp(3.0)
    got = bound_q_plain(prob)
    assert got == pytest.approx(expect, rel=1e-12)
    assert got >= integrate_reference(prob, 1e-11).value


def test_q_holder_values():
    assert bound_q_holder(problem("1"), 2.0) == pytest.approx(math.sqrt(1 / 30), rel=1e-12)
    got = bound_q_holder(problem("x"), 2.0)
    assert got == pytest.approx(math.sqrt(1 / 30), rel=1e-12)
    assert got >= 1 / 12  # the weighted integral of x


def test_q_holder_zero_endpoints():
    assert bound_q_holder(problem("x * (1 - x)"), 2.0) == 0.0


def test_q_holder_sweep_dominates_integral():
    prob = problem("exp(x)", a=1.0, b=3.0, p=1.0, q=2.0)
    reference = integrate_reference(prob, 1e-11).value
    for k in [1.5, 2.0, 4.0, 16.0]:
        assert bound_q_holder(prob, k) >= reference


def test_q_power_values():
    assert bound_q_power(problem("x"), 3.0) == pytest.approx(1 / 6, rel=1e-12)
    # l = 1 coincides with the plain bound applied to |f| endpoint values
    prob = problem("x - 2")
    assert bound_q_power(prob, 1.0) == pytest.approx(
        (1.0) * beta(2.0, 2.0) * max(abs(-2.0), abs(-1.0)), rel=1e-12)


def test_q_power_l_invariance():
    prob = problem("exp(x)", a=1.0, b=3.0, p=2.0, q=0.5)
    values = [bound_q_power(prob, l) for l in (1.0, 2.0, 7.0, 50.0)]
    for v in values[1:]:
        assert v == pytest.approx(values[0], rel=1e-12)


def test_p_plain_values():
    assert bound_p_plain(problem("1")) == pytest.approx(1 / 3, rel=1e-12)
    assert bound_p_plain(problem("x")) == pytest.approx(1 / 6, rel=1e-12)


def test_p_plain_dominates_integral_derived():
    prob = problem("abs(x - 0.3) + 0.1", p=1.0, q=2.0)
    assert bound_p_plain(prob) >= integrate_reference(prob, 1e-11).value


def test_p_holder_values():
    assert bound_p_holder(problem("1"), 2.0) == pytest.approx(
        math.sqrt(1 / 30) * math.sqrt(2.0), rel=1e-12)
    assert bound_p_holder(problem("x"), 2.0) == pytest.approx(math.sqrt(1 / 30), rel=1e-12)


def test_p_holder_sweep_dominates_integral():
    prob = problem("abs(x - 0.3) + 0.1", p=2.0, q=0.5)
    reference = integrate_reference(prob, 1e-11).value
    for k in [1.5, 2.0, 4.0, 16.0]:
        assert bound_p_holder(prob, k) >= reference


def test_p_power_values():
    assert bound_p_power(problem("1"), 2.0) == pytest.approx(
        (1 / 6) * math.sqrt(2.0), rel=1e-12)
    assert bound_p_power(problem("x"), 2.0) == pytest.approx(1 / 6, rel=1e-12)


def test_p_power_monotone_in_l_with_max_limit():
    prob = problem("exp(x)")
    values = [bound_p_power(prob, float(2 ** j)) for j in range(1, 11)]
    for lo, hi in zip(values[1:], values[:-1]):
        assert lo <= hi * (1 + 1e-15)
    limit = beta(2.0, 2.0) * max(1.0, math.e)
    assert values[-1] == pytest.approx(limit, rel=1e-6)
    for v in values:
        assert v >= limit * (1 - 1e-15)


def test_large_l_does_not_overflow():
    assert math.isfinite(bound_p_power(problem("exp(x)", b=1.0), 1024.0))
    prob = problem("exp(x)", a=1.0, b=3.0)
    assert math.isfinite(bound_p_power(prob, 1024.0))
    assert math.isfinite(bound_q_power(prob, 1024.0))


def test_large_k_stays_in_log_space():
    prob = problem("exp(x)", p=3.5, q=3.5)
    value = bound_q_holder(prob, 1000.0)
    assert math.isfinite(value) and value > 0


def test_parameter_validation():
    prob = problem("x")
    with pytest.raises(ParameterError):
        bound_q_holder(prob, 1.0)
    with pytest.raises(ParameterError):
        bound_q_holder(prob, 1001.0)
    with pytest.raises(ParameterError):
        bound_p_holder(prob, 0.5)
    with pytest.raises(ParameterError):
        bound_q_power(prob, 0.99)
    with pytest.raises(ParameterError):
        bound_p_power(prob, 1.0)
    assert bound_p_power(prob, 1.0, allow_l_one=True) == pytest.approx(1 / 6, rel=1e-12)
    with pytest.raises(ParameterError):
        evaluate_bound(prob, TheoremId.Q_PLAIN, param=2.0)
    with pytest.raises(ParameterError):
        evaluate_bound(prob, TheoremId.Q_HOLDER)


def test_p_bounds_dominate_q_bounds_for_nonnegative_endpoints():
    # x + y >= max(x, y) for x, y >= 0
    for source in ["x^2", "exp(x)", "abs(x - 0.3) + 0.1", "1.7"]:
        for p, q in [(0.5, 2.0), (1.0, 1.0), (3.5, 0.5)]:
            prob = problem(source, p=p, q=q)
            assert bound_p_plain(prob) >= bound_q_plain(prob) - 1e-15
            for k in (1.5, 2.0, 4.0):
                assert bound_p_holder(prob, k) >= bound_q_holder(prob, k) - 1e-15
            for l in (1.5, 2.0, 4.0):
                assert bound_p_power(prob, l) >= bound_q_power(prob, l) - 1e-15


def test_reflection_symmetry():
    # reflecting f about the midpoint and swapping p and q leaves every
    # bound unchanged (endpoint values swap, Beta is symmetric)
    cases = [("exp(x)", 0.0, 1.0), ("abs(x - 0.3) + 0.1", 0.0, 1.0),
             ("x^2", 1.0, 3.0)]
    for source, a, b in cases:
        f = parse(source)
        g = reflect(f, a, b)
        for p, q in [(0.5, 2.0), (1.0, 3.5)]:
            orig = WeightedProblem(Interval(a, b), p, q, f)
            mirrored = WeightedProblem(Interval(a, b), q, p, g)
            assert bound_q_plain(orig) == pytest.approx(bound_q_plain(mirrored), rel=1e-12)
            assert bound_p_plain(orig) == pytest.approx(bound_p_plain(mirrored), rel=1e-12)
            assert bound_q_holder(orig, 2.0) == pytest.approx(
                bound_q_holder(mirrored, 2.0), rel=1e-12)
            assert bound_p_holder(orig, 2.0) == pytest.approx(
                bound_p_holder(mirrored, 2.0), rel=1e-12)
            assert bound_q_power(orig, 3.0) == pytest.approx(
                bound_q_power(mirrored, 3.0), rel=1e-12)
            assert bound_p_power(orig, 3.0) == pytest.approx(
                bound_p_power(mirrored, 3.0), rel=1e-12)


def test_constant_sharpness():
    prob = problem("1.7", p=2.0, q=3.5)
    reference = integrate_reference(prob, 1e-13)
    assert bound_q_plain(prob) == pytest.approx(reference.value, rel=1e-12)
    assert bound_p_plain(prob) == pytest.approx(2.0 * reference.value, rel=1e-12)


# --- hypothesis_function and full_report ---------------------------------

def test_hypothesis_function_selection():
    f = parse("x - 2")
    assert hypothesis_function(f, TheoremId.Q_PLAIN) is f
    assert hypothesis_function(f, TheoremId.P_PLAIN).ast == Call("abs", (f.ast,))
    holder = hypothesis_function(f, TheoremId.Q_HOLDER, 2.0)
    assert holder.ast == Bin("^", Call("abs", (f.ast,)), Num(2.0))
    power = hypothesis_function(f, TheoremId.P_POWER, 3.0)
    assert power.ast == Bin("^", Call("abs", (f.ast,)), Num(3.0))


def test_full_report_convex_case():
    report = full_report(problem("x^2"), TheoremId.P_PLAIN,
                         certify_resolution=FAST)
    assert report.hypothesis_satisfied
    assert report.slack >= 0.0
    assert report.bound == pytest.approx(1 / 6, rel=1e-12)
    assert 0.0 < report.tightness < 1.0
    assert (report.f_a, report.f_b) == (0.0, 1.0)


def test_full_report_zero_function():
    for theorem, param in [(TheoremId.Q_PLAIN, None), (TheoremId.Q_HOLDER, 2.0),
                           (TheoremId.P_POWER, 2.0)]:
        report = full_report(problem("0"), theorem, param,
                             certify_resolution=FAST)
        assert report.bound == 0.0
        assert abs(report.integral.value) < 1e-300
        assert report.slack == 0.0
        assert report.tightness is None
        assert report.param == param


def test_full_report_hypothesis_failure_is_not_an_error():
    report = full_report(
        WeightedProblem(Interval(0.0, 6.28), 1.0, 1.0, parse("sin(x)")),
        TheoremId.Q_PLAIN, certify_resolution=FAST)
    assert not report.hypothesis_satisfied
    assert report.hypothesis_certificate.witness is not None
    # both sides still computed; here the stated inequality genuinely
    # fails without its hypothesis (bound 0, integral positive)
    assert report.bound == 0.0
    assert report.integral.value > 0.0
    assert report.slack < 0.0


def test_full_report_param_consistency():
    with pytest.raises(ParameterError):
        full_report(problem("x"), TheoremId.Q_HOLDER, certify_resolution=FAST)
    with pytest.raises(ParameterError):
        full_report(problem("x"), TheoremId.Q_PLAIN, 2.0, certify_resolution=FAST)
