"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is picked once at import time from the environment variable
``BETABOUNDS_BACKEND``:

    auto   (default)  use numba when importable, else numpy
    numba             require numba, fail loudly if missing
    numpy             force the pure-numpy/pure-python path

Both paths perform the identical IEEE operations in the identical order,
so results (including counterexample witnesses) are bit-for-bit equal.
``benchmarks/bench_kernels.py`` times one against the other.
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "USING_NUMBA",
    "tridiag_eigen",
    "scan_grid",
    "scan_points",
    "MODE_CONVEX",
    "MODE_QUASI",
    "MODE_PCONVEX",
]

MODE_CONVEX = 0
MODE_QUASI = 1
MODE_PCONVEX = 2


def _pick_backend() -> str:
    choice = os.environ.get("BETABOUNDS_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"BETABOUNDS_BACKEND must be auto, numba or numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        if choice == "numba":
            raise ImportError(
                "BETABOUNDS_BACKEND=numba but numba is not installed")
        return "numpy"


BACKEND = _pick_backend()
USING_NUMBA = BACKEND == "numba"


# --- symmetric tridiagonal eigensolver (implicit-shift QL) ------------
#
# Diagonal d (n), subdiagonal e (n-1).  z enters as the unit vector e1
# and leaves holding the first component of each orthonormal eigenvector,
# which is all Golub-Welsch needs for the quadrature weights.

def tridiag_eigen_py(d, e, z, max_sweeps=50):
    n = d.shape[0]
    if n == 1:
        return 0
    eps = 2.220446049250313e-16
    work = np.zeros(n)
    work[: n - 1] = e
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(work[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps >= max_sweeps:
                return l + 1
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * work[l])
            r = np.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + work[l] / (g + r)
            else:
                g = d[m] - d[l] + work[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * work[i]
                b = c * work[i]
                r = np.hypot(f, g)
                work[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    work[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if not underflow:
                d[l] -= p
                work[l] = g
                work[m] = 0.0
    # selection sort ascending, carrying z
    for i in range(n - 1):
        k = i
        p = d[i]
        for j in range(i + 1, n):
            if d[j] < p:
                k = j
                p = d[j]
        if k != i:
            d[k] = d[i]
            d[i] = p
            p = z[i]
            z[i] = z[k]
            z[k] = p
    return 0


# --- counterexample scans ---------------------------------------------
#
# Violation of the class-defining inequality at a sampled triple:
#   convex        f(tx+(1-t)y) - (t f(x) + (1-t) f(y))
#   quasi-convex  f(tx+(1-t)y) - max(f(x), f(y))
#   P-convex      f(tx+(1-t)y) - (f(x) + f(y))
# Scans run in lexicographic (x, y, t) order; the first strict argmax is
# therefore the lexicographically smallest worst violation.

def scan_grid_py(fx, fy, fmid, ts, mode, tol):
    nx = fx.shape[0]
    ny = fy.shape[0]
    nt = ts.shape[0]
    worst = -np.inf
    worst_idx = -1
    first_idx = -1
    idx = 0
    for i in range(nx):
        fxi = fx[i]
        for j in range(ny):
            fyj = fy[j]
            if mode == 1:
                rhs_const = fxi if fxi > fyj else fyj
            elif mode == 2:
                rhs_const = fxi + fyj
            else:
                rhs_const = 0.0
            for k in range(nt):
                if mode == 0:
                    t = ts[k]
                    rhs = t * fxi + (1.0 - t) * fyj
                else:
                    rhs = rhs_const
                v = fmid[idx] - rhs
                if v > worst:
                    worst = v
                    worst_idx = idx
                if first_idx < 0 and v > tol:
                    first_idx = idx
                idx += 1
    return worst, worst_idx, first_idx


def scan_points_py(fx, fy, fmid, ts, mode, tol):
    n = fx.shape[0]
    worst = -np.inf
    worst_idx = -1
    first_idx = -1
    for i in range(n):
        if mode == 0:
            rhs = ts[i] * fx[i] + (1.0 - ts[i]) * fy[i]
        elif mode == 1:
            rhs = fx[i] if fx[i] > fy[i] else fy[i]
        else:
            rhs = fx[i] + fy[i]
        v = fmid[i] - rhs
        if v > worst:
            worst = v
            worst_idx = i
        if first_idx < 0 and v > tol:
            first_idx = i
    return worst, worst_idx, first_idx


def scan_grid_numpy(fx, fy, fmid, ts, mode, tol):
    nx, ny, nt = fx.shape[0], fy.shape[0], ts.shape[0]
    mid = fmid.reshape(nx, ny, nt)
    if mode == MODE_CONVEX:
        rhs = ts[None, None, :] * fx[:, None, None] + (1.0 - ts)[None, None, :] * fy[None, :, None]
    elif mode == MODE_QUASI:
        rhs = np.maximum(fx[:, None, None], fy[None, :, None])
    else:
        rhs = fx[:, None, None] + fy[None, :, None]
    viol = (mid - rhs).ravel()
    worst_idx = int(np.argmax(viol))
    exceed = viol > tol
    first_idx = int(np.argmax(exceed)) if exceed.any() else -1
    return float(viol[worst_idx]), worst_idx, first_idx


def scan_points_numpy(fx, fy, fmid, ts, mode, tol):
    if mode == MODE_CONVEX:
        rhs = ts * fx + (1.0 - ts) * fy
    elif mode == MODE_QUASI:
        rhs = np.maximum(fx, fy)
    else:
        rhs = fx + fy
    viol = fmid - rhs
    if viol.size == 0:
        return -np.inf, -1, -1
    worst_idx = int(np.argmax(viol))
    exceed = viol > tol
    first_idx = int(np.argmax(exceed)) if exceed.any() else -1
    return float(viol[worst_idx]), worst_idx, first_idx


if USING_NUMBA:
    from numba import njit

    tridiag_eigen = njit(cache=True)(tridiag_eigen_py)
    scan_grid = njit(cache=True)(scan_grid_py)
    scan_points = njit(cache=True)(scan_points_py)
else:
    tridiag_eigen = tridiag_eigen_py
    scan_grid = scan_grid_numpy
    scan_points = scan_points_numpy
