"""Batch verification driver: run the full bound pipeline over the
Cartesian product of functions, intervals, weight exponents and bound
parameters, record one case per line, and aggregate slack/tightness
statistics.

A case is a violation when its hypothesis certificate found no
counterexample and yet slack < -1e-9 * max(1, |bound|).  Zero violations
is the expected outcome on the bundled corpus.
"""

import csv
import io
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import TheoremId, full_report
from .certify import DEFAULT_SEED, DEFAULT_TOLERANCE, Resolution, certify
from .dsl import Interval, parse
from .formatting import dumps, format_float
from .quadrature import WeightedProblem, integrate_reference

__all__ = [
    "SweepConfig",
    "SweepSummary",
    "ConfigError",
    "SLACK_TOLERANCE_COEFF",
    "DEFAULT_CORPUS",
    "DEFAULT_INTERVALS",
    "default_config",
    "parse_config",
    "run_sweep",
    "emit_report",
    "summarize",
    "RECORD_FIELDS",
]

SLACK_TOLERANCE_COEFF = 1e-9

# Functions spanning the hypothesis landscape: nonnegative convex,
# quasi-convex but not convex, P-convex but not quasi-convex (bounded
# oscillation), sign-changing, and hypothesis-violating controls
# (sin over a full period, a sharp two-bump).
DEFAULT_CORPUS = (
    "1.7",
    "x^2",
    "exp(x)",
    "exp(-x)",
    "x^3 + 0.5",
    "abs(x - 0.3) + 0.1",
    "max(1 - x, x - 1) + 0.25",
    "1 + 0.25*sin(6*x)",
    "min(x, 2 - x) + 0.75",
    "sin(x)",
    "x - 2",
    "exp(-36*(x - 0.25)^2) + exp(-36*(x - 0.75)^2)",
)
DEFAULT_INTERVALS = ((0.0, 1.0), (1.0, 3.0), (0.5, 2.0))
DEFAULT_PQ_GRID = (0.5, 1.0, 2.0, 3.5)
DEFAULT_K_GRID = (1.5, 2.0, 4.0)
DEFAULT_L_GRID = (1.5, 2.0, 4.0)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    functions: tuple
    intervals: tuple
    p_grid: tuple
    q_grid: tuple
    k_grid: tuple = DEFAULT_K_GRID
    l_grid: tuple = DEFAULT_L_GRID
    theorems: tuple = tuple(TheoremId)
    grid_xy: int = 64
    grid_t: int = 33
    random_trials: int = 10000
    certify_tolerance: float = DEFAULT_TOLERANCE
    integral_rel_tol: float = 1e-11
    seed: int = DEFAULT_SEED
    output: str = "sweep_out"
    format: str = "jsonl"

    def __post_init__(self):
        if not self.functions:
            raise ConfigError("at least one function is required")
        if not self.intervals:
            raise ConfigError("at least one interval is required")
        if not self.p_grid or not self.q_grid:
            raise ConfigError("p_grid and q_grid must be non-empty")
        if any(v <= 0 for v in self.p_grid + self.q_grid):
            raise ConfigError("p and q values must be > 0")
        needs_k = any(TheoremId(t).param_name == "k" for t in self.theorems)
        needs_l = any(TheoremId(t).param_name == "l" for t in self.theorems)
        if needs_k and (not self.k_grid or any(k <= 1 for k in self.k_grid)):
            raise ConfigError("k_grid must be non-empty with every k > 1")
        if needs_l and (not self.l_grid or any(l < 1 for l in self.l_grid)):
            raise ConfigError("l_grid must be non-empty with every l >= 1")
        if self.format not in ("jsonl", "json", "csv"):
            raise ConfigError(f"format must be json, jsonl or csv, got {self.format!r}")

    @property
    def resolution(self) -> Resolution:
        return Resolution(self.grid_xy, self.grid_t, self.random_trials)


@dataclass
class SweepSummary:
    total_cases: int
    hypothesis_satisfied: int
    violations: int
    errors: int
    per_theorem: dict
    runtime_seconds: float = field(default=0.0, compare=False)

    def as_dict(self) -> dict:
        # runtime deliberately excluded: report files must be
        # byte-identical across reruns of the same config
        return {
            "total_cases": self.total_cases,
            "hypothesis_satisfied": self.hypothesis_satisfied,
            "violations": self.violations,
            "errors": self.errors,
            "slack_tolerance": f"-{SLACK_TOLERANCE_COEFF:g}*max(1,|bound|)",
            "per_theorem": self.per_theorem,
        }


def default_config(**overrides) -> SweepConfig:
    base = dict(
        functions=DEFAULT_CORPUS,
        intervals=DEFAULT_INTERVALS,
        p_grid=DEFAULT_PQ_GRID,
        q_grid=DEFAULT_PQ_GRID,
    )
    base.update(overrides)
    return SweepConfig(**base)


# --- config file parsing ------------------------------------------------
#
# Plain text, one "key = value" per line, '#' comments, blank lines
# ignored.  "function" and "interval" repeat (one entry per line); list
# values are whitespace-separated.  See the README for the grammar.

_LIST_KEYS = {"p_grid", "q_grid", "k_grid", "l_grid"}
_INT_KEYS = {"grid_xy", "grid_t", "random_trials", "seed"}
_FLOAT_KEYS = {"certify_tolerance", "integral_rel_tol"}
_STR_KEYS = {"output", "format"}


def parse_config(text: str) -> SweepConfig:
    functions: list = []
    intervals: list = []
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key == "function":
            functions.append(val)
        elif key == "interval":
            parts = val.split()
            if len(parts) != 2:
                raise ConfigError(f"line {lineno}: interval needs two numbers")
            try:
                intervals.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ConfigError(f"line {lineno}: interval needs two numbers")
        elif key in _LIST_KEYS:
            try:
                values[key] = tuple(float(v) for v in val.split())
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs numbers")
        elif key == "theorems":
            try:
                values[key] = tuple(TheoremId(v) for v in val.split())
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: unknown theorem tag in {val!r}; "
                    f"valid: {', '.join(t.value for t in TheoremId)}")
        elif key in _INT_KEYS:
            try:
                values[key] = int(val)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs an integer")
        elif key in _FLOAT_KEYS:
            try:
                values[key] = float(val)
            except ValueError:
                raise ConfigError(f"line {lineno}: {key} needs a number")
        elif key in _STR_KEYS:
            values[key] = val
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if not functions:
        raise ConfigError("config must name at least one function")
    if not intervals:
        raise ConfigError("config must name at least one interval")
    return SweepConfig(functions=tuple(functions), intervals=tuple(intervals),
                       p_grid=values.pop("p_grid", DEFAULT_PQ_GRID),
                       q_grid=values.pop("q_grid", DEFAULT_PQ_GRID),
                       **values)


# --- the sweep -----------------------------------------------------------

RECORD_FIELDS = (
    "index", "theorem", "function", "a", "b", "p", "q", "k", "l",
    "hypothesis_verdict", "witness_kind", "witness_x", "witness_y",
    "witness_t", "witness_violation", "integral", "integral_error",
    "integral_evaluations", "bound", "slack", "tightness",
    "abs_integral_le_bound", "violation", "f_a", "f_b", "error",
)


def _cases(config: SweepConfig):
    """Deterministic case order: function, interval, p, q, theorem, param."""
    for fi, source in enumerate(config.functions):
        for interval in config.intervals:
            for p in config.p_grid:
                for q in config.q_grid:
                    for theorem in config.theorems:
                        theorem = TheoremId(theorem)
                        if theorem.param_name == "k":
                            params = config.k_grid
                        elif theorem.param_name == "l":
                            params = config.l_grid
                        else:
                            params = (None,)
                        for param in params:
                            yield source, interval, p, q, theorem, param


def _violation_threshold(bound: float) -> float:
    return -SLACK_TOLERANCE_COEFF * max(1.0, abs(bound))


def run_sweep(config: SweepConfig, progress=None):
    """Execute the sweep; returns (SweepSummary, records).

    Per-case evaluation failures are recorded with an error marker and do
    not abort the sweep.  Hypothesis certificates and reference integrals
    are memoized across cases (they do not depend on the bound parameter
    or, for certificates, on p and q), which changes nothing observable.
    """
    start = time.monotonic()
    records = []
    cert_cache: dict = {}
    integral_cache: dict = {}
    resolution = config.resolution

    from .bounds import evaluate_bound, hypothesis_function
    from .dsl import evaluate

    for index, (source, (a, b), p, q, theorem, param) in enumerate(_cases(config)):
        record = {key: None for key in RECORD_FIELDS}
        record.update(index=index, theorem=theorem.value, function=source,
                      a=float(a), b=float(b), p=float(p), q=float(q))
        if theorem.param_name == "k":
            record["k"] = float(param)
        elif theorem.param_name == "l":
            record["l"] = float(param)
        try:
            f = parse(source)
            interval = Interval(a, b)
            problem = WeightedProblem(interval, p, q, f)

            bound = evaluate_bound(problem, theorem, param)

            target = hypothesis_function(f, theorem, param)
            cert_key = (target.source, a, b, theorem.hypothesis_class)
            cert = cert_cache.get(cert_key)
            if cert is None:
                cert = certify(target, interval, theorem.hypothesis_class,
                               resolution=resolution,
                               tolerance=config.certify_tolerance,
                               seed=config.seed)
                cert_cache[cert_key] = cert

            int_key = (source, a, b, p, q)
            integral = integral_cache.get(int_key)
            if integral is None:
                integral = integrate_reference(problem,
                                               rel_tol=config.integral_rel_tol)
                integral_cache[int_key] = integral

            slack = bound - integral.value
            satisfied = not cert.falsified
            violation = satisfied and slack < _violation_threshold(bound)
            record.update(
                hypothesis_verdict=cert.verdict,
                integral=integral.value,
                integral_error=integral.error_estimate,
                integral_evaluations=integral.evaluations,
                bound=bound,
                slack=slack,
                tightness=(integral.value / bound) if bound != 0.0 else None,
                abs_integral_le_bound=abs(integral.value) <= bound - _violation_threshold(bound),
                violation=violation,
                f_a=evaluate(f, a),
                f_b=evaluate(f, b),
            )
            if cert.witness is not None:
                record.update(witness_kind=cert.witness.kind,
                              witness_x=cert.witness.x,
                              witness_y=cert.witness.y,
                              witness_t=cert.witness.t,
                              witness_violation=cert.witness.violation)
        except Exception as exc:  # recorded, never fatal to the sweep
            record["error"] = f"{type(exc).__name__}: {exc}"
        records.append(record)
        if progress is not None:
            progress(index, record)

    summary = summarize(records)
    summary.runtime_seconds = time.monotonic() - start
    return summary, records


def summarize(records) -> SweepSummary:
    """Aggregate statistics from a record stream (single code path for
    both emission and round-trip checking)."""
    per_theorem: dict = {}
    total_satisfied = 0
    total_violations = 0
    total_errors = 0
    for theorem in TheoremId:
        rows = [r for r in records if r["theorem"] == theorem.value]
        if not rows:
            continue
        ok_rows = [r for r in rows if r["error"] is None]
        satisfied = [r for r in ok_rows
                     if r["hypothesis_verdict"] == "no_counterexample"]
        violations = sum(1 for r in satisfied if r["violation"])
        slacks = np.array([r["slack"] for r in satisfied], dtype=float)
        tight = np.array([r["tightness"] for r in satisfied
                          if r["tightness"] is not None], dtype=float)
        stats = {
            "cases": len(rows),
            "errors": len(rows) - len(ok_rows),
            "hypothesis_satisfied": len(satisfied),
            "violations": violations,
            "min_slack": float(slacks.min()) if slacks.size else None,
            "median_slack": float(np.median(slacks)) if slacks.size else None,
            "tightness_min": float(tight.min()) if tight.size else None,
            "tightness_median": float(np.median(tight)) if tight.size else None,
            "tightness_max": float(tight.max()) if tight.size else None,
        }
        per_theorem[theorem.value] = stats
        total_satisfied += len(satisfied)
        total_violations += violations
        total_errors += stats["errors"]
    return SweepSummary(total_cases=len(records),
                        hypothesis_satisfied=total_satisfied,
                        violations=total_violations,
                        errors=total_errors,
                        per_theorem=per_theorem)


# --- emission -------------------------------------------------------------

def _csv_cell(value) -> str:
    if value is None:
        return ""
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def emit_report(summary: SweepSummary, records, format: str = "jsonl",
                output: str = "sweep_out") -> dict:
    """Write records plus summary.json under the output directory;
    returns {"records": path, "summary": path}."""
    os.makedirs(output, exist_ok=True)
    if format == "csv":
        records_path = os.path.join(output, "records.csv")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RECORD_FIELDS)
        for record in records:
            writer.writerow([_csv_cell(record[k]) for k in RECORD_FIELDS])
        payload = buf.getvalue()
    elif format in ("jsonl", "json"):
        records_path = os.path.join(output, "records.jsonl")
        lines = [dumps({k: record[k] for k in RECORD_FIELDS}) for record in records]
        payload = "\n".join(lines) + ("\n" if lines else "")
    else:
        raise ConfigError(f"unknown format {format!r}")
    try:
        with open(records_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
        summary_path = os.path.join(output, "summary.json")
        with open(summary_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(dumps(summary.as_dict(), indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report under {output!r}: {exc}") from exc
    return {"records": records_path, "summary": summary_path}
