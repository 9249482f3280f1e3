import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from betabounds import kernels
from betabounds.kernels import (
    MODE_CONVEX,
    MODE_PCONVEX,
    MODE_QUASI,
    scan_grid,
    scan_grid_numpy,
    scan_grid_py,
    scan_points,
    scan_points_numpy,
    scan_points_py,
    tridiag_eigen,
    tridiag_eigen_py,
)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 25, 100, 200])
def test_ql_matches_scipy(n):
    rng = np.random.default_rng(n)
    d = rng.normal(size=n)
    e = rng.normal(size=max(n - 1, 0))
    got_d = d.copy()
    z = np.zeros(n)
    z[0] = 1.0
    assert tridiag_eigen_py(got_d, e.copy(), z) == 0
    ref_w, ref_v = eigh_tridiagonal(d, e)
    assert np.allclose(got_d, ref_w, rtol=1e-12, atol=1e-12)
    assert np.allclose(z**2, ref_v[0, :] ** 2, rtol=1e-8, atol=1e-12)


def test_selected_backend_matches_python_reference_bitwise():
    rng = np.random.default_rng(3)
    n = 40
    d = rng.normal(size=n)
    e = rng.normal(size=n - 1)
    d1, z1 = d.copy(), np.zeros(n)
    z1[0] = 1.0
    d2, z2 = d.copy(), z1.copy()
    assert tridiag_eigen(d1, e.copy(), z1) == 0
    assert tridiag_eigen_py(d2, e.copy(), z2) == 0
    assert np.array_equal(d1, d2)
    assert np.array_equal(z1, z2)


@pytest.mark.parametrize("mode", [MODE_CONVEX, MODE_QUASI, MODE_PCONVEX])
def test_scan_grid_paths_agree_exactly(mode):
    rng = np.random.default_rng(mode)
    fx = rng.normal(size=21)
    fy = rng.normal(size=21)
    ts = np.linspace(0.0, 1.0, 9)
    fmid = rng.normal(size=21 * 21 * 9)
    expected = scan_grid_py(fx, fy, fmid, ts, mode, 1e-9)
    assert scan_grid_numpy(fx, fy, fmid, ts, mode, 1e-9) == expected
    assert scan_grid(fx, fy, fmid, ts, mode, 1e-9) == expected


@pytest.mark.parametrize("mode", [MODE_CONVEX, MODE_QUASI, MODE_PCONVEX])
def test_scan_points_paths_agree_exactly(mode):
    rng = np.random.default_rng(10 + mode)
    n = 777
    fx, fy, fmid = rng.normal(size=(3, n))
    ts = rng.random(n)
    expected = scan_points_py(fx, fy, fmid, ts, mode, 1e-9)
    assert scan_points_numpy(fx, fy, fmid, ts, mode, 1e-9) == expected
    assert scan_points(fx, fy, fmid, ts, mode, 1e-9) == expected


def test_scan_reports_first_and_worst():
    fx = np.array([0.0, 0.0])
    fy = np.array([0.0, 0.0])
    ts = np.array([0.0, 1.0])
    # violations at flat indices 1 (0.5) and 2 (2.0)
    fmid = np.array([0.0, 0.5, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    worst, worst_idx, first_idx = scan_grid_py(fx, fy, fmid, ts, MODE_PCONVEX, 1e-9)
    assert (worst, worst_idx, first_idx) == (2.0, 2, 1)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, BETABOUNDS_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c",
         "from betabounds import kernels; print(kernels.BACKEND, kernels.USING_NUMBA)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]


def test_env_flag_rejects_unknown_value():
    env = dict(os.environ, BETABOUNDS_BACKEND="cuda")
    out = subprocess.run(
        [sys.executable, "-c", "import betabounds.kernels"],
        env=env, capture_output=True, text=True)
    assert out.returncode != 0
    assert "BETABOUNDS_BACKEND" in out.stderr


def test_backend_constant_is_consistent():
    assert kernels.BACKEND in ("numba", "numpy")
    assert kernels.USING_NUMBA == (kernels.BACKEND == "numba")


def test_certificates_identical_across_backends():
    # end-to-end: the same falsification search emits byte-identical
    # output under both backends
    argv = [sys.executable, "-m", "betabounds.cli", "certify",
            "--f", "exp(-36*(x - 0.25)^2) + exp(-36*(x - 0.75)^2)",
            "--a", "0", "--b", "1", "--class", "quasi_convex",
            "--grid", "32", "--t-grid", "17", "--random", "2000"]
    outputs = []
    for backend in ("numpy", "auto"):
        env = dict(os.environ, BETABOUNDS_BACKEND=backend)
        run = subprocess.run(argv, env=env, capture_output=True, text=True,
                             check=True)
        outputs.append(run.stdout)
    assert outputs[0] == outputs[1]
