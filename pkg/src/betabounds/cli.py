"""Command-line interface.

Subcommands: integrate, bound, certify, quad-rule, verify.  All numeric
output is JSON (or CSV where noted) with 17-significant-digit numerals.
Exit codes: 0 success / zero violations, 2 sweep found violations,
1 configuration or runtime error.
"""

import argparse
import sys

from .bounds import TheoremId, full_report
from .certify import DEFAULT_SEED, DEFAULT_TOLERANCE, ConvexityClass, Resolution, certify
from .dsl import Interval, parse
from .formatting import dumps, format_float
from .quadrature import (
    WeightedProblem,
    apply_rule,
    build_rule,
    integrate_reference,
)
from .sweep import ConfigError, emit_report, parse_config, run_sweep


def _add_problem_args(sub, with_f: bool = True):
    if with_f:
        sub.add_argument("--f", required=True, help="expression for f(x)")
    sub.add_argument("--a", type=float, required=True, help="left endpoint")
    sub.add_argument("--b", type=float, required=True, help="right endpoint")
    sub.add_argument("--p", type=float, required=True, help="exponent of (x-a)")
    sub.add_argument("--q", type=float, required=True, help="exponent of (b-x)")
    sub.add_argument("--allow-negative-a", action="store_true",
                     help="permit intervals with a < 0")


def _add_certify_args(sub):
    sub.add_argument("--grid", type=int, default=64,
                     help="points per axis of the (x,y) grid (default 64)")
    sub.add_argument("--t-grid", type=int, default=33,
                     help="points of the t grid on [0,1] (default 33)")
    sub.add_argument("--random", type=int, default=10000,
                     help="seeded random triples (default 10000)")
    sub.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                     help="absolute tolerance on the defining inequality")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _interval(args) -> Interval:
    return Interval(args.a, args.b, allow_negative=args.allow_negative_a)


def _integral_dict(result) -> dict:
    return {
        "value": result.value,
        "method": result.method,
        "error_estimate": result.error_estimate,
        "evaluations": result.evaluations,
    }


def _witness_dict(witness) -> dict | None:
    if witness is None:
        return None
    return {"x": witness.x, "y": witness.y, "t": witness.t,
            "violation": witness.violation, "kind": witness.kind}


def _certificate_dict(cert) -> dict:
    return {
        "class": cert.convexity_class.value,
        "verdict": cert.verdict,
        "witness": _witness_dict(cert.witness),
        "first_witness": _witness_dict(cert.first),
        "resolution": {"n_xy": cert.resolution.n_xy, "n_t": cert.resolution.n_t,
                       "n_random": cert.resolution.n_random},
        "tolerance": cert.tolerance,
        "seed": cert.seed,
    }


def _cmd_integrate(args) -> int:
    problem = WeightedProblem(_interval(args), args.p, args.q, parse(args.f))
    if args.method == "gauss":
        rule = build_rule(args.p, args.q, problem.interval, args.m)
        companion = build_rule(args.p, args.q, problem.interval, args.m + 1)
        result = apply_rule(rule, problem.f, companion=companion)
    else:
        result = integrate_reference(problem, rel_tol=args.rel_tol)
    print(dumps(_integral_dict(result), indent=2))
    return 0


def _cmd_bound(args) -> int:
    theorem = TheoremId(args.theorem)
    param = None
    if theorem.param_name == "k":
        if args.k is None:
            raise ConfigError(f"{theorem.value} requires --k")
        param = args.k
    elif theorem.param_name == "l":
        if args.l is None:
            raise ConfigError(f"{theorem.value} requires --l")
        param = args.l
        if param == 1.0 and theorem is TheoremId.P_POWER and args.allow_l_one:
            print("warning: l = 1 relaxes the stated hypothesis (l > 1)",
                  file=sys.stderr)
    problem = WeightedProblem(_interval(args), args.p, args.q, parse(args.f))
    report = full_report(
        problem, theorem, param,
        certify_resolution=Resolution(args.grid, args.t_grid, args.random),
        certify_tolerance=args.tolerance, seed=args.seed,
        integral_rel_tol=args.rel_tol, allow_l_one=args.allow_l_one)
    doc = {
        "theorem": report.theorem.value,
        "param": report.param,
        "function": args.f,
        "a": problem.interval.a,
        "b": problem.interval.b,
        "p": problem.p,
        "q": problem.q,
        "hypothesis_certificate": _certificate_dict(report.hypothesis_certificate),
        "bound": report.bound,
        "integral": _integral_dict(report.integral),
        "slack": report.slack,
        "tightness": report.tightness,
        "f_a": report.f_a,
        "f_b": report.f_b,
    }
    print(dumps(doc, indent=2))
    return 0


def _cmd_certify(args) -> int:
    cert = certify(parse(args.f), _interval(args),
                   ConvexityClass(getattr(args, "class")),
                   resolution=Resolution(args.grid, args.t_grid, args.random),
                   tolerance=args.tolerance, seed=args.seed)
    print(dumps(_certificate_dict(cert), indent=2))
    return 0


def _cmd_quad_rule(args) -> int:
    rule = build_rule(args.p, args.q, _interval(args), args.m)
    if args.format == "csv":
        print("node,weight")
        for node, weight in zip(rule.nodes, rule.weights):
            print(f"{format_float(float(node))},{format_float(float(weight))}")
    else:
        doc = {
            "m": rule.m, "p": rule.p, "q": rule.q,
            "a": rule.interval.a, "b": rule.interval.b,
            "nodes": [float(v) for v in rule.nodes],
            "weights": [float(v) for v in rule.weights],
        }
        print(dumps(doc, indent=2))
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}")
    config = parse_config(text)
    if args.format:
        config = type(config)(**{**config.__dict__, "format": args.format})
    if args.output:
        config = type(config)(**{**config.__dict__, "output": args.output})
    summary, records = run_sweep(config)
    paths = emit_report(summary, records, config.format, config.output)
    print(dumps(summary.as_dict(), indent=2))
    print(f"records: {paths['records']}", file=sys.stderr)
    print(f"summary: {paths['summary']}", file=sys.stderr)
    print(f"runtime: {summary.runtime_seconds:.2f} s", file=sys.stderr)
    return 2 if summary.violations > 0 else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betabounds",
        description="Weighted integrals of the form (x-a)^p (b-x)^q f(x): "
                    "quadrature rules, closed-form upper bounds, convexity "
                    "certification and batch verification.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("integrate", help="evaluate the weighted integral")
    _add_problem_args(sub)
    sub.add_argument("--rel-tol", type=float, default=1e-10)
    sub.add_argument("--method", choices=("reference", "gauss"), default="reference")
    sub.add_argument("--m", type=int, default=20, help="nodes for --method gauss")
    sub.set_defaults(func=_cmd_integrate)

    sub = subs.add_parser("bound", help="evaluate one upper bound and its slack")
    sub.add_argument("--theorem", required=True,
                     choices=[t.value for t in TheoremId])
    _add_problem_args(sub)
    sub.add_argument("--k", type=float, help="Holder exponent (k > 1)")
    sub.add_argument("--l", type=float, help="power exponent")
    sub.add_argument("--allow-l-one", action="store_true",
                     help="accept l = 1 for P_POWER (with a warning)")
    sub.add_argument("--rel-tol", type=float, default=1e-11)
    _add_certify_args(sub)
    sub.set_defaults(func=_cmd_bound)

    sub = subs.add_parser("certify", help="search for a convexity-class counterexample")
    sub.add_argument("--f", required=True)
    sub.add_argument("--a", type=float, required=True)
    sub.add_argument("--b", type=float, required=True)
    sub.add_argument("--allow-negative-a", action="store_true")
    sub.add_argument("--class", required=True,
                     choices=[c.value for c in ConvexityClass])
    _add_certify_args(sub)
    sub.set_defaults(func=_cmd_certify)

    sub = subs.add_parser("quad-rule", help="emit Gauss nodes and weights")
    _add_problem_args(sub, with_f=False)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.set_defaults(func=_cmd_quad_rule)

    sub = subs.add_parser("verify", help="run a sweep from a config file")
    sub.add_argument("config", help="path to the sweep config")
    sub.add_argument("--format", choices=("json", "jsonl", "csv"))
    sub.add_argument("--output", help="output directory (overrides config)")
    sub.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
