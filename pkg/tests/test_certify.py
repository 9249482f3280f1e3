import itertools

import numpy as np
import pytest

from betabounds.certify import (
    ConvexityClass,
    Resolution,
    certify,
    check_witness,
    _grid,
)
from betabounds.dsl import Interval, evaluate, evaluate_many, parse, power_transform

I01 = Interval(0.0, 1.0)
FULL_PERIOD = Interval(0.0, 6.28)


def test_x_squared_is_convex():
    cert = certify(parse("x^2"), I01, ConvexityClass.CONVEX)
    assert cert.verdict == "no_counterexample"
    assert cert.witness is None and cert.first is None


def test_sine_is_not_convex_on_a_full_period():
    cert = certify(parse("sin(x)"), FULL_PERIOD, ConvexityClass.CONVEX)
    assert cert.verdict == "counterexample"
    assert cert.witness is not None
    assert check_witness(parse("sin(x)"), ConvexityClass.CONVEX,
                         cert.witness, cert.tolerance)


def test_shifted_abs_is_p_convex_with_brute_force_oracle():
    # independent oracle: naive triple loop over a coarse sample of
    # Definition-style triples confirms the inequality really holds
    f = parse("abs(x - 0.3) + 0.1")
    xs = np.linspace(0.0, 1.0, 17)
    ts = np.linspace(0.0, 1.0, 9)
    for x, y, t in itertools.product(xs, xs, ts):
        lhs = evaluate(f, t * x + (1 - t) * y)
        assert lhs <= evaluate(f, x) + evaluate(f, y) + 1e-12
        assert evaluate(f, x) >= 0.0
    cert = certify(f, I01, ConvexityClass.P_CONVEX)
    assert cert.verdict == "no_counterexample"


def test_two_bump_fails_quasi_convexity():
    f = parse("exp(-36*(x - 0.25)^2) + exp(-36*(x - 0.75)^2)")
    cert = certify(f, I01, ConvexityClass.QUASI_CONVEX)
    assert cert.verdict == "counterexample"
    assert check_witness(f, ConvexityClass.QUASI_CONVEX, cert.witness,
                         cert.tolerance)


def test_bounded_oscillation_is_p_convex_but_not_quasi_convex():
    f = parse("1 + 0.25*sin(6*x)")
    assert certify(f, I01, ConvexityClass.QUASI_CONVEX).falsified
    assert not certify(f, I01, ConvexityClass.P_CONVEX).falsified


def test_negative_function_fails_p_convexity():
    cert = certify(parse("x - 0.5"), I01, ConvexityClass.P_CONVEX)
    assert cert.falsified
    assert check_witness(parse("x - 0.5"), ConvexityClass.P_CONVEX,
                         cert.witness, cert.tolerance)


def test_witness_reproduces_violation():
    for source, interval, cls in [
        ("sin(x)", FULL_PERIOD, ConvexityClass.CONVEX),
        ("sin(x)", FULL_PERIOD, ConvexityClass.QUASI_CONVEX),
        ("sin(x)", FULL_PERIOD, ConvexityClass.P_CONVEX),
        ("x - 2", I01, ConvexityClass.P_CONVEX),
    ]:
        f = parse(source)
        cert = certify(f, interval, cls)
        assert cert.falsified
        for witness in (cert.witness, cert.first):
            assert check_witness(f, cls, witness, cert.tolerance)
        assert cert.witness.violation >= cert.first.violation


def test_determinism():
    f = parse("exp(-36*(x - 0.25)^2) + exp(-36*(x - 0.75)^2)")
    a = certify(f, I01, ConvexityClass.QUASI_CONVEX)
    b = certify(f, I01, ConvexityClass.QUASI_CONVEX)
    assert a == b


def test_grids_are_nested_bit_for_bit():
    g = _grid(0.3, 2.7, 64)
    assert np.array_equal(g, _grid(0.3, 2.7, 127)[::2])
    t = _grid(0.0, 1.0, 33)
    assert np.array_equal(t, _grid(0.0, 1.0, 65)[::2])


def test_monotone_falsification_under_refinement():
    res = Resolution(n_xy=8, n_t=5, n_random=64)
    f = parse("sin(x)")
    for _ in range(3):
        cert = certify(f, FULL_PERIOD, ConvexityClass.CONVEX, resolution=res)
        assert cert.falsified
        res = res.refined()


def test_random_triples_have_prefix_property():
    # doubling n_random keeps the original random triples as a prefix, so
    # a counterexample found only among random triples persists
    rng_small = np.random.default_rng(99).random((100, 3))
    rng_big = np.random.default_rng(99).random((200, 3))
    assert np.array_equal(rng_small, rng_big[:100])


def test_containment_convex_nonnegative_implies_p_convex():
    for source in ["x^2", "exp(x)", "abs(x - 0.3) + 0.1", "1.7", "x^3 + 0.5"]:
        f = parse(source)
        convex = certify(f, I01, ConvexityClass.CONVEX)
        sampled_min = float(np.min(evaluate_many(f, np.linspace(0, 1, 257))))
        assert not convex.falsified and sampled_min >= 0.0
        assert not certify(f, I01, ConvexityClass.P_CONVEX).falsified
        assert not certify(f, I01, ConvexityClass.QUASI_CONVEX).falsified


def test_transformed_function_certification():
    # |f|^2 of a sign-changing affine function is convex, hence all three
    f = power_transform(parse("x - 2"), 2.0)
    for cls in ConvexityClass:
        assert not certify(f, Interval(1.0, 3.0), cls).falsified


def test_resolution_validation():
    with pytest.raises(ValueError):
        Resolution(n_xy=1)
    with pytest.raises(ValueError):
        Resolution(n_t=1)
    with pytest.raises(ValueError):
        Resolution(n_random=-1)
    with pytest.raises(ValueError):
        certify(parse("x"), I01, ConvexityClass.CONVEX, tolerance=0.0)


def test_evaluation_error_propagates_with_point():
    from betabounds.dsl import EvaluationError

    with pytest.raises(EvaluationError):
        certify(parse("ln(x - 0.5)"), I01, ConvexityClass.CONVEX)
