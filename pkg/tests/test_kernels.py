import math
import os
import subprocess
import sys

import numpy as np
import pytest

from reebsys.kernels import BACKEND, bisect_root, grid_min, polyval, polyval_grid
from reebsys.kernels import _numpy as py_backend


def test_backend_selected():
    assert BACKEND in ("cython", "python")


def test_polyval_matches_numpy_reference():
    rng = np.random.default_rng(0)
    for _ in range(50):
        coeffs = rng.standard_normal(rng.integers(1, 8)).tolist()
        x = float(rng.uniform(-3, 3))
        expected = float(np.polynomial.polynomial.polyval(x, coeffs))
        assert polyval(coeffs, x) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_backends_agree():
    rng = np.random.default_rng(1)
    for _ in range(50):
        coeffs = rng.standard_normal(rng.integers(1, 8)).tolist()
        xs = rng.uniform(-2, 2, size=17)
        a = polyval_grid(coeffs, xs)
        b = py_backend.polyval_grid(coeffs, xs)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)
        for x in xs[:5]:
            assert polyval(coeffs, float(x)) == pytest.approx(
                py_backend.polyval(coeffs, float(x)), rel=1e-13, abs=1e-13
            )


def test_bisect_root_sqrt2():
    # x^2 - 2 on [1, 2]
    root = bisect_root([-2.0, 0.0, 1.0], 1.0, 2.0)
    assert root == pytest.approx(math.sqrt(2), abs=1e-12)
    assert py_backend.bisect_root([-2.0, 0.0, 1.0], 1.0, 2.0) == pytest.approx(
        math.sqrt(2), abs=1e-12
    )


def test_bisect_root_endpoint_zero():
    assert bisect_root([0.0, 1.0], 0.0, 1.0) == 0.0


def test_grid_min():
    # (x-1)^2 => min near 1
    x, v = grid_min([1.0, -2.0, 1.0], -3.0, 3.0, 10001)
    assert x == pytest.approx(1.0, abs=1e-3)
    assert v == pytest.approx(0.0, abs=1e-6)


def test_pure_python_env_override():
    code = "from reebsys.kernels import BACKEND; print(BACKEND)"
    env = dict(os.environ, REEBSYS_PURE_PY="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "python"
