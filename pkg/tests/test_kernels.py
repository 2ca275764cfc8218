import os
import subprocess
import sys

import numpy as np
import pytest

from oamur import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAS_NUMBA, reason="numba not installed")


@pytest.fixture
def field():
    rng = np.random.default_rng(0)
    ny, nx = 24, 32
    rho = rng.random((ny, nx))
    x = np.linspace(-3, 3, nx, endpoint=False)
    y = np.linspace(-2, 2, ny, endpoint=False)
    f = rng.standard_normal((ny, nx)) + 1j * rng.standard_normal((ny, nx))
    return rho, x, y, f


def test_moment_sums_match_direct_formula(field):
    rho, x, y, _ = field
    X, Y = np.meshgrid(x, y)
    z = X + 1j * Y
    zs, r2, r1 = K.moment_sums_numpy(rho, x, y, 4)
    for n in range(1, 5):
        assert zs[n - 1] == pytest.approx(np.sum(rho * z ** n), rel=1e-13)
        assert r2[n - 1] == pytest.approx(np.sum(rho * np.abs(z) ** (2 * n)), rel=1e-13)
        assert r1[n - 1] == pytest.approx(np.sum(rho * np.abs(z) ** n), rel=1e-13)


def test_fd4_exact_on_low_harmonics():
    n, L = 64, np.pi
    x = np.linspace(-L, L, n, endpoint=False)
    h = x[1] - x[0]
    f = np.exp(1j * x)[None, :] * np.ones((3, 1))
    d = K.fd4_numpy(f, h, 1)
    # symbol of the 4th-order stencil: (8 sin kh - sin 2kh) / (6h)
    sym = (8 * np.sin(h) - np.sin(2 * h)) / (6 * h)
    np.testing.assert_allclose(d, 1j * sym * f, atol=1e-13)
    np.testing.assert_allclose(K.fd4_numpy(f.T, h, 0), (1j * sym * f).T, atol=1e-13)


@needs_numba
def test_backends_agree(field):
    rho, x, y, f = field
    for a, b in zip(K.moment_sums_numpy(rho, x, y, 6), K.moment_sums_numba(rho, x, y, 6)):
        np.testing.assert_allclose(a, b, rtol=1e-12)
    for axis in (0, 1):
        np.testing.assert_allclose(K.fd4_numpy(f, 0.1, axis), K.fd4_numba(f, 0.1, axis), rtol=1e-13, atol=1e-12)


@needs_numba
def test_numba_backend_deterministic(field):
    rho, x, y, _ = field
    a = K.moment_sums_numba(rho, x, y, 4)[0]
    b = K.moment_sums_numba(rho, x, y, 4)[0]
    assert a.tobytes() == b.tobytes()


@pytest.mark.parametrize("value,expected", [("1", "numpy"), ("0", None)])
def test_env_flag_selects_backend(value, expected):
    env = dict(os.environ, OAMUR_DISABLE_NUMBA=value)
    out = subprocess.run([sys.executable, "-c", "from oamur import _kernels as K; print(K.backend())"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == (expected or ("numba" if K.HAS_NUMBA else "numpy"))


def test_numpy_backend_gives_same_analysis():
    code = (
        "from oamur import gridstate as gs, operators as ops, inequality as iq\n"
        "st = gs.synthesize(gs.shipped_modes()['sup_lg_gauss'])\n"
        "print(repr([r.slack for r in iq.check_all(st)]))\n"
        "print(repr(list(ops.angular_histogram(st, 16))))\n"
    )
    runs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, OAMUR_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        runs[flag] = [np.array(eval(line)) for line in out.stdout.splitlines()]
    for a, b in zip(runs["0"], runs["1"]):
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-13)


@needs_numba
def test_benchmark_script_runs():
    from pathlib import Path
    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--sizes", "32", "--repeat", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert "moment_sums" in out and "fd4" in out
