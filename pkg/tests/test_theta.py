import cmath
import itertools
import random

import pytest

from abeltoric import _kernels
from abeltoric.series import EisensteinInt, SSeries
from abeltoric.theta import (
    ThetaInstability,
    ThetaMatrix,
    certificate,
    det3,
    g_coefficient,
    minor,
    obstruction_constant,
    stable_certificate,
    t_exponent,
    t_exponent_floor,
    theta_series,
)

OMEGA_C = cmath.exp(2j * cmath.pi / 3)


def to_complex(c: EisensteinInt) -> complex:
    return c.x + c.y * OMEGA_C


def eval_series(ser: SSeries, s: complex, t: complex) -> complex:
    return sum(to_complex(c) * s**se * t**te for se, lau in ser.coeffs.items() for te, c in lau.terms.items())


def numeric_theta(j, point, s, tau1, s_cut):
    """Direct sum with e^{2 pi i (4m+3n+j) z} at the actual points z."""
    t = cmath.exp(1j * cmath.pi * tau1)
    z = (0, 0.5, tau1 / 2, 1 / 3)[point]
    total = 0
    for n in range(-4, 5):
        se = (3 * n + j) ** 2
        if se > s_cut:
            continue
        for m in range(-40, 41):
            te = 4 * m * m + 6 * m * n + 2 * m * j
            total += s**se * t**te * cmath.exp(2j * cmath.pi * (4 * m + 3 * n + j) * z)
    return total


def test_theta_examples():
    assert theta_series(0, 0, 0, 20)[0].terms == {0: EisensteinInt(1), 4: EisensteinInt(2), 16: EisensteinInt(2)}
    assert theta_series(0, 1, 0, 20) == theta_series(0, 0, 0, 20)
    c = theta_series(1, 0, 1, 8)[1]
    assert c.terms == {0: EisensteinInt(1), 2: EisensteinInt(1), 6: EisensteinInt(1)}


@pytest.mark.parametrize("j,point", list(itertools.product(range(3), range(4))))
def test_theta_matches_numeric_sum(j, point):
    tau1 = 0.3 + 0.45j
    t = cmath.exp(1j * cmath.pi * tau1)
    s = 0.4 + 0.1j
    exact = eval_series(theta_series(j, point, 8, 200), s, t)
    assert abs(exact - numeric_theta(j, point, s, tau1, 8)) < 1e-9


@pytest.mark.parametrize("j", range(3))
def test_s_exponents_are_squares(j):
    for point in range(4):
        for e in theta_series(j, point, 30, 40).exponents():
            assert any((3 * n + j) ** 2 == e for n in range(-3, 3))


def test_t_exponent_floor_is_exact():
    for n, j, p in itertools.product(range(-3, 3), range(3), (0, 1, 2, 3)):
        brute = min(t_exponent(n, m, j, p) for m in range(-50, 51))
        assert t_exponent_floor(n, j, p) == brute


def test_z2_shift_against_symbolic_oracle():
    # the z2 point multiplies term (n, m) by t^{4m+3n+j}
    for j in range(3):
        ser = theta_series(j, 2, 8, 80)
        expect = {}
        for n in range(-2, 2):
            se = (3 * n + j) ** 2
            if se > 8:
                continue
            for m in range(-12, 13):
                te = 4 * m * m + 6 * m * n + 2 * m * j + 4 * m + 3 * n + j
                if abs(te) <= 80:
                    expect.setdefault(se, {}).setdefault(te, 0)
                    expect[se][te] += 1
        got = {se: {te: c.x for te, c in lau.terms.items()} for se, lau in ser.coeffs.items()}
        assert got == {se: {te: c for te, c in d.items() if c} for se, d in expect.items()}


@pytest.fixture(scope="module")
def matrix():
    return ThetaMatrix.build(8, 60)


@pytest.fixture(scope="module")
def minors(matrix):
    return [minor(matrix, k) for k in range(4)]


def test_minor_exponents(minors):
    for mn in minors:
        assert all(e % 3 == 2 for e in mn.exponents())
    for k in range(3):
        assert minors[k].lowest_exponent() == 2
    assert minors[0].exponents() == [2, 5]


def test_minor_three_vanishes_numerically():
    # rows z0, z1, z2 are 2-torsion points; the determinant is identically zero
    rng = random.Random(7)
    for _ in range(3):
        tau1 = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 0.8))
        s = complex(rng.uniform(0.2, 0.5), rng.uniform(-0.2, 0.2))
        rows = [[numeric_theta(j, p, s, tau1, 8) for j in range(3)] for p in (0, 1, 2)]
        a = rows
        det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
               - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
               + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
        assert abs(det) < 1e-12


def test_minors_match_numeric_determinant(minors):
    tau1 = 0.1 + 0.5j
    t = cmath.exp(1j * cmath.pi * tau1)
    s = 0.05
    for k in range(3):
        rows = [[numeric_theta(j, p, s, tau1, 8) for j in range(3)] for p in range(4) if p != k]
        a = rows
        det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
               - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
               + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
        exact = eval_series(minors[k], s, t)
        assert abs(det - exact) < 1e-9 * max(1, abs(det))


def test_minor_alternating(matrix):
    rows = matrix.rows_without(0)
    d = det3(rows)
    assert det3([rows[1], rows[0], rows[2]]) == -d
    assert det3([rows[0], rows[0], rows[2]]).is_zero()


def test_minor_multilinear(matrix):
    r = matrix.rows_without(0)
    mixed = [tuple(a + b for a, b in zip(r[0], r[1])), r[1], r[2]]
    assert det3(mixed) == det3(r)


def test_det3_rejects_inconsistent_cuts(matrix):
    rows = [list(r) for r in matrix.rows_without(0)]
    rows[0][0] = theta_series(0, 1, 5, 60)
    with pytest.raises(ValueError):
        det3(rows)


def test_g_coefficient(minors):
    assert g_coefficient(minors[0], 3).is_zero()
    assert not g_coefficient(minors[0], 2).is_zero()
    assert g_coefficient(SSeries(8), 4).is_zero()
    with pytest.raises(ValueError):
        g_coefficient(minors[0], 9)


def test_obstruction_constant():
    v = obstruction_constant(8, 60)
    assert v == EisensteinInt(36, 0)
    assert obstruction_constant(8, 80) == v
    assert obstruction_constant(8, 60, pair=(1, 0)) == EisensteinInt(-36, 0)


@pytest.mark.parametrize("backend", _kernels.BACKENDS)
def test_dense_backends_match_exact(backend):
    if backend == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba disabled")
    mat = ThetaMatrix.build(8, 40)
    for k in range(4):
        assert minor(mat, k, backend) == minor(mat, k, "exact")


def test_stable_certificate_and_instability():
    cert = stable_certificate(8, 60)
    assert cert.stable and cert.rerun_window == 80
    with pytest.raises(ThetaInstability):
        stable_certificate(8, 1)  # a window of 1 still sees the wrong constant


def test_certificate_json_deterministic():
    a = certificate(8, 30).to_dict()
    b = certificate(8, 30).to_dict()
    assert a == b
    assert list(a) == ["s_cut", "t_window", "g", "brackets", "constant", "stable", "rerun_window"]
