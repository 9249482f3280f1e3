"""Sampled falsification of convexity-class membership.

A certificate never asserts membership: "no_counterexample at resolution
R" is the strongest claim made.  Grids are nested (refining a resolution
doubles the subdivision count), so a violation found at one resolution
is found again at every refinement.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .dsl import FunctionSpec, Interval, evaluate_many
from .kernels import (
    MODE_CONVEX,
    MODE_PCONVEX,
    MODE_QUASI,
    scan_grid,
    scan_points,
)

__all__ = [
    "ConvexityClass",
    "Resolution",
    "Witness",
    "ConvexityCertificate",
    "certify",
    "DEFAULT_TOLERANCE",
    "DEFAULT_SEED",
]

DEFAULT_TOLERANCE = 1e-9
DEFAULT_SEED = 20120128


class ConvexityClass(enum.Enum):
    CONVEX = "convex"
    QUASI_CONVEX = "quasi_convex"
    P_CONVEX = "p_convex"


_MODES = {
    ConvexityClass.CONVEX: MODE_CONVEX,
    ConvexityClass.QUASI_CONVEX: MODE_QUASI,
    ConvexityClass.P_CONVEX: MODE_PCONVEX,
}


@dataclass(frozen=True)
class Resolution:
    """Sample counts: n_xy grid points per axis, n_t points on [0,1],
    n_random seeded random triples."""

    n_xy: int = 64
    n_t: int = 33
    n_random: int = 10000

    def __post_init__(self):
        if self.n_xy < 2 or self.n_t < 2:
            raise ValueError("grid resolutions must be >= 2")
        if self.n_random < 0:
            raise ValueError("n_random must be >= 0")

    def refined(self) -> "Resolution":
        """Next nested resolution: every current grid point is kept."""
        return Resolution(2 * self.n_xy - 1, 2 * self.n_t - 1, 2 * self.n_random)


@dataclass(frozen=True)
class Witness:
    x: float
    y: float
    t: float
    violation: float
    kind: str  # "inequality" | "nonnegativity"


@dataclass(frozen=True)
class ConvexityCertificate:
    convexity_class: ConvexityClass
    verdict: str  # "no_counterexample" | "counterexample"
    witness: Witness | None
    first: Witness | None
    resolution: Resolution
    tolerance: float
    seed: int

    @property
    def falsified(self) -> bool:
        return self.verdict == "counterexample"


def _grid(a: float, b: float, n: int) -> np.ndarray:
    # a + i*step with forced endpoints; doubling the subdivision count
    # reproduces these points bit-for-bit, which makes grids nested.
    step = (b - a) / (n - 1)
    g = a + step * np.arange(n)
    g[0] = a
    g[-1] = b
    return g


def _better(lhs: Witness | None, rhs: Witness | None) -> Witness | None:
    """Worse violation wins; ties break lexicographically on (x, y, t)."""
    if lhs is None:
        return rhs
    if rhs is None:
        return lhs
    if rhs.violation > lhs.violation:
        return rhs
    if rhs.violation == lhs.violation and (rhs.x, rhs.y, rhs.t) < (lhs.x, lhs.y, lhs.t):
        return rhs
    return lhs


def certify(f: FunctionSpec, interval: Interval, convexity_class: ConvexityClass,
            resolution: Resolution = Resolution(),
            tolerance: float = DEFAULT_TOLERANCE,
            seed: int = DEFAULT_SEED) -> ConvexityCertificate:
    """Search for a counterexample to the class-defining inequality of
    ``convexity_class`` for f on the interval.

    Tests every (x, y) pair from an n_xy-point grid crossed with an
    n_t-point grid on [0,1], plus n_random seeded uniform triples.  For
    the P-convex class additionally requires f(x) >= -tolerance at every
    sampled point.  Deterministic given (resolution, tolerance, seed).
    """
    convexity_class = ConvexityClass(convexity_class)
    tolerance = float(tolerance)
    if not tolerance > 0.0:
        raise ValueError(f"tolerance must be > 0, got {tolerance}")
    mode = _MODES[convexity_class]
    a, b = interval.a, interval.b

    xs = _grid(a, b, resolution.n_xy)
    ts = _grid(0.0, 1.0, resolution.n_t)
    fx = evaluate_many(f, xs)
    # combination points in lexicographic (x, y, t) raster order
    mids = (ts[None, None, :] * xs[:, None, None]
            + (1.0 - ts)[None, None, :] * xs[None, :, None])
    fmid = evaluate_many(f, mids.ravel())

    worst_v, worst_idx, first_idx = scan_grid(fx, fx, fmid, ts, mode, tolerance)

    def grid_witness(idx: int) -> Witness:
        n, nt = resolution.n_xy, resolution.n_t
        i, rest = divmod(idx, n * nt)
        j, k = divmod(rest, nt)
        return Witness(x=float(xs[i]), y=float(xs[j]), t=float(ts[k]),
                       violation=float(fmid[idx] - _rhs_at(mode, fx[i], fx[j], ts[k])),
                       kind="inequality")

    worst = grid_witness(worst_idx) if worst_v > tolerance else None
    first = grid_witness(first_idx) if first_idx >= 0 else None

    sampled = [(xs, fx), (mids.ravel(), fmid)]

    n_r = resolution.n_random
    if n_r > 0:
        rng = np.random.default_rng(seed)
        u = rng.random((n_r, 3))
        xr = a + (b - a) * u[:, 0]
        yr = a + (b - a) * u[:, 1]
        tr = u[:, 2]
        mr = tr * xr + (1.0 - tr) * yr
        fxr = evaluate_many(f, xr)
        fyr = evaluate_many(f, yr)
        fmr = evaluate_many(f, mr)
        sampled += [(xr, fxr), (yr, fyr), (mr, fmr)]
        rv, ri, rf = scan_points(fxr, fyr, fmr, tr, mode, tolerance)

        def random_witness(idx: int) -> Witness:
            return Witness(x=float(xr[idx]), y=float(yr[idx]), t=float(tr[idx]),
                           violation=float(fmr[idx] - _rhs_at(mode, fxr[idx], fyr[idx], tr[idx])),
                           kind="inequality")

        if rv > tolerance:
            worst = _better(worst, random_witness(ri))
            if first is None:
                first = random_witness(rf)

    if convexity_class is ConvexityClass.P_CONVEX:
        # Definition of the class also requires nonnegativity; check every
        # point f was sampled at, in scan order.
        for pts, vals in sampled:
            viol = -vals  # f(x) >= -tolerance, so violation is -f(x)
            low = viol > tolerance
            if low.any():
                idx = int(np.argmax(low))
                w_first = Witness(x=float(pts[idx]), y=float(pts[idx]), t=0.0,
                                  violation=float(viol[idx]),
                                  kind="nonnegativity")
                widx = int(np.argmax(viol))
                w_worst = Witness(x=float(pts[widx]), y=float(pts[widx]), t=0.0,
                                  violation=float(viol[widx]),
                                  kind="nonnegativity")
                worst = _better(worst, w_worst)
                if first is None:
                    first = w_first

    if worst is None:
        return ConvexityCertificate(convexity_class, "no_counterexample", None,
                                    None, resolution, tolerance, seed)
    return ConvexityCertificate(convexity_class, "counterexample", worst, first,
                                resolution, tolerance, seed)


def _rhs_at(mode: int, fx: float, fy: float, t: float) -> float:
    if mode == MODE_CONVEX:
        return t * fx + (1.0 - t) * fy
    if mode == MODE_QUASI:
        return max(fx, fy)
    return fx + fy


def check_witness(f: FunctionSpec, convexity_class: ConvexityClass,
                  witness: Witness, tolerance: float) -> bool:
    """Re-evaluate the defining inequality at a witness; True if the
    violation reproduces above tolerance."""
    from .dsl import evaluate

    if witness.kind == "nonnegativity":
        return evaluate(f, witness.x) < -tolerance
    mode = _MODES[ConvexityClass(convexity_class)]
    mid = witness.t * witness.x + (1.0 - witness.t) * witness.y
    lhs = evaluate(f, mid)
    rhs = _rhs_at(mode, evaluate(f, witness.x), evaluate(f, witness.y), witness.t)
    return lhs - rhs > tolerance
