import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abeltoric import _kernels
from abeltoric.series import EisensteinInt, SSeries, TLaurent

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba disabled")


def random_series(rng, s_cut, w, density=0.2):
    arr = rng.integers(-50, 50, size=(s_cut + 1, 2 * w + 1, 2)).astype(np.int64)
    arr[rng.random(arr.shape[:2]) > density] = 0
    return arr


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_series_mul_backends_agree(seed):
    rng = np.random.default_rng(seed)
    a, b = random_series(rng, 6, 15), random_series(rng, 6, 15)
    assert np.array_equal(_kernels.series_mul(a, b, "numba"), _kernels.series_mul(a, b, "numpy"))


@given(st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_series_mul_matches_exact(seed):
    rng = np.random.default_rng(seed)
    w = 6
    a, b = random_series(rng, 4, w, 0.3), random_series(rng, 4, w, 0.3)
    exact = SSeries.from_dense(a, w) * SSeries.from_dense(b, w)
    assert SSeries.from_dense(_kernels.series_mul(a, b, "numpy"), w) == exact
    if _kernels.HAVE_NUMBA:
        assert SSeries.from_dense(_kernels.series_mul(a, b, "numba"), w) == exact


def test_divisibility_grid_brute_force():
    grid = _kernels.divisibility_grid(60, 12, "numpy")
    for nu in range(1, 61):
        for k in range(13):
            assert grid[nu - 1, k] == ((-k * (nu * nu + 3 * nu) + 8 * nu + 24) % (2 * nu) == 0)


@needs_numba
def test_divisibility_backends_agree():
    assert np.array_equal(_kernels.divisibility_grid(500, 40, "numba"), _kernels.divisibility_grid(500, 40, "numpy"))


def test_resolve():
    assert _kernels.resolve("numpy") == "numpy"
    with pytest.raises(ValueError):
        _kernels.resolve("fortran")


def test_env_flag_disables_numba():
    env = dict(os.environ, ABELTORIC_DISABLE_NUMBA="1")
    code = ("from abeltoric import _kernels as k; "
            "assert not k.HAVE_NUMBA and k.DEFAULT_BACKEND == 'numpy'; "
            "from abeltoric.theta import obstruction_constant as o; print(o(8, 30, 'numpy'))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "36"


def test_overflow_guard_falls_back():
    from abeltoric.theta import det3

    big = 10**12
    ser = SSeries(2, {0: TLaurent({0: EisensteinInt(big, 1)})}, 3)
    rows = [[ser, ser, ser], [ser, ser, ser], [ser, ser, ser]]
    rows[1] = [ser, SSeries(2, {0: TLaurent({1: EisensteinInt(big, 0)})}, 3), ser]
    assert det3(rows, "numpy") == det3(rows, "exact")
