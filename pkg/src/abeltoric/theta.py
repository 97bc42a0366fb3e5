"""Exact truncated expansion of three restricted theta functions at four points.

theta_j = sum_n s^{(3n+j)^2} sum_m t^{4m^2+6mn+2mj} e(4m+3n+j; z), where the
point factor e(.; z) at the four points z_0..z_3 is, respectively, 1, a sign
(-1)^{n+j}, an extra power t^{4m+3n+j}, and omega^{(m+j) mod 3}.  Everything
is exact over Z[omega].

Two evaluation paths:

* ``"exact"``: dict-backed :class:`SSeries` with Python integers.
* ``"numba"`` / ``"numpy"``: dense int64 arrays through
  :mod:`abeltoric._kernels`; an L1 bound is checked before every product and
  the call falls back to the exact path if int64 could overflow.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import _kernels
from .series import CUBE_ROOTS, ONE, EisensteinInt, SSeries, TLaurent

log = logging.getLogger(__name__)

POINTS = (0, 1, 2, 3)
DEFAULT_S_CUT = 8
DEFAULT_T_WINDOW = 60
STABILITY_STEP = 20
_INT64_SAFE = 1 << 62


class ThetaInstability(RuntimeError):
    """The certificate changed when the t-window grew."""


def t_exponent(n: int, m: int, j: int, point: int) -> int:
    e = 4 * m * m + 6 * m * n + 2 * m * j
    if point == 2:
        e += 4 * m + 3 * n + j
    return e


def t_exponent_floor(n: int, j: int, point: int = 0) -> int:
    """Exact minimum over integer m of the t-exponent on the (n, j) stratum."""
    lin = 6 * n + 2 * j + (4 if point == 2 else 0)
    const = 3 * n + j if point == 2 else 0
    # 4m^2 + lin*m is minimised at m = -lin/8; check the two neighbours
    m0 = -lin // 8
    return min(4 * m * m + lin * m for m in (m0, m0 + 1)) + const


def _n_range(j: int, s_cut: int):
    """All n with (3n+j)^2 <= s_cut."""
    r = isqrt(max(s_cut, 0))
    return [n for n in range((-r - j) // 3 - 1, (r - j) // 3 + 2) if (3 * n + j) ** 2 <= s_cut]


def _m_range(n: int, j: int, point: int, window: int):
    # 4m^2 grows fastest; |m| <= sqrt(window) + |lin| suffices
    lin = abs(6 * n + 2 * j) + 4
    bound = isqrt(window) + lin + 1
    return range(-bound, bound + 1)


def _point_factor(n: int, m: int, j: int, point: int) -> EisensteinInt:
    if point == 1:
        return ONE if (n + j) % 2 == 0 else -ONE
    if point == 3:
        return CUBE_ROOTS[(m + j) % 3]
    return ONE


def theta_series(j: int, point: int, s_cut: int = DEFAULT_S_CUT, t_window: int = DEFAULT_T_WINDOW) -> SSeries:
    """theta_j at the given point, truncated to s-exponent <= s_cut and |t-exponent| <= t_window."""
    if j not in (0, 1, 2):
        raise ValueError("j must be 0, 1 or 2")
    if point not in POINTS:
        raise ValueError("point must be 0..3")
    if s_cut < 0 or t_window < 1:
        raise ValueError("need s_cut >= 0 and t_window >= 1")
    coeffs: dict = {}
    for n in _n_range(j, s_cut):
        se = (3 * n + j) ** 2
        acc: dict = {}
        for m in _m_range(n, j, point, t_window):
            te = t_exponent(n, m, j, point)
            if abs(te) > t_window:
                continue
            acc[te] = acc.get(te, EisensteinInt()) + _point_factor(n, m, j, point)
        lau = TLaurent(acc)
        coeffs[se] = coeffs[se] + lau if se in coeffs else lau
    return SSeries(s_cut, coeffs, t_window)


@dataclass(frozen=True)
class ThetaMatrix:
    entries: tuple  # entries[i][j] for point i, function j
    s_cut: int
    t_window: int

    def __post_init__(self):
        for row in self.entries:
            for e in row:
                if e.s_cut != self.s_cut or e.t_window != self.t_window:
                    raise ValueError("inconsistent truncation metadata in ThetaMatrix")

    @classmethod
    def build(cls, s_cut: int = DEFAULT_S_CUT, t_window: int = DEFAULT_T_WINDOW) -> "ThetaMatrix":
        rows = tuple(tuple(theta_series(j, i, s_cut, t_window) for j in range(3)) for i in POINTS)
        return cls(rows, s_cut, t_window)

    def rows_without(self, k: int):
        return [self.entries[i] for i in range(len(self.entries)) if i != k]


def _perm_sign(p) -> int:
    sign = 1
    for a in range(len(p)):
        for b in range(a + 1, len(p)):
            if p[a] > p[b]:
                sign = -sign
    return sign


def det3(rows, backend: str = "exact") -> SSeries:
    """Exact 3x3 determinant of series, truncated at the common cut."""
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("det3 needs a 3x3 array")
    cuts = {e.s_cut for r in rows for e in r}
    windows = {e.t_window for r in rows for e in r}
    if len(cuts) != 1 or len(windows) != 1:
        raise ValueError("inconsistent cuts among minor entries")
    if backend != "exact":
        dense = _det3_dense(rows, cuts.pop(), windows.pop(), backend)
        if dense is not None:
            return dense
    total = None
    for p in itertools.permutations(range(3)):
        term = rows[0][p[0]] * rows[1][p[1]] * rows[2][p[2]]
        if _perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def _det3_dense(rows, s_cut, window, backend):
    if window is None:
        return None
    arrs = [[e.to_dense(window) for e in r] for r in rows]
    total = np.zeros_like(arrs[0][0])
    for p in itertools.permutations(range(3)):
        a, b, c = arrs[0][p[0]], arrs[1][p[1]], arrs[2][p[2]]
        if 2 * _kernels.l1_norm(a) * _kernels.l1_norm(b) * max(_kernels.l1_norm(c), 1) >= _INT64_SAFE:
            log.info("int64 bound exceeded; falling back to exact arithmetic")
            return None
        prod = _kernels.series_mul(_kernels.series_mul(a, b, backend), c, backend)
        total += _perm_sign(p) * prod
    return SSeries.from_dense(total, window)


def minor(matrix: ThetaMatrix, k: int, backend: str = "exact") -> SSeries:
    """Theta-hat_k: determinant of the rows i != k, in their natural order."""
    if not 0 <= k < len(matrix.entries):
        raise ValueError("minor index out of range")
    if backend != "exact":
        backend = _kernels.resolve(backend)
    return det3(matrix.rows_without(k), backend)


def g_coefficient(series: SSeries, s_exp: int) -> TLaurent:
    if s_exp > series.s_cut:
        raise ValueError(f"s-exponent {s_exp} exceeds the cut {series.s_cut}")
    return series[s_exp]


def _bracket(g: dict, a: int, b: int) -> EisensteinInt:
    # t^0 coefficient of g_{a2} g_{b5} - g_{b2} g_{a5}
    return ((g[a, 2] * g[b, 5]) - (g[b, 2] * g[a, 5]))[0]


@dataclass
class Certificate:
    s_cut: int
    t_window: int
    minors: list
    value: EisensteinInt
    brackets: dict
    stable: bool | None = None
    rerun_window: int | None = None

    def to_dict(self) -> dict:
        gs = {}
        for k, mn in enumerate(self.minors):
            gs[f"g_{k}2"] = g_coefficient(mn, 2).to_json()
            gs[f"g_{k}5"] = g_coefficient(mn, 5).to_json()
        return {
            "s_cut": self.s_cut,
            "t_window": self.t_window,
            "g": gs,
            "brackets": {f"{a}{b}": v.to_json() for (a, b), v in sorted(self.brackets.items())},
            "constant": self.value.to_json(),
            "stable": self.stable,
            "rerun_window": self.rerun_window,
        }


def certificate(s_cut: int = DEFAULT_S_CUT, t_window: int = DEFAULT_T_WINDOW,
                backend: str = "exact", pair=(0, 1)) -> Certificate:
    if s_cut < 6:
        raise ValueError("s_cut must be at least 6 to see the s^5 coefficients")
    mat = ThetaMatrix.build(s_cut, t_window)
    minors = [minor(mat, k, backend) for k in range(4)]
    g = {(k, e): g_coefficient(minors[k], e) for k in range(4) for e in (2, 5)}
    brackets = {(a, b): _bracket(g, a, b) for a, b in itertools.combinations(range(4), 2)}
    return Certificate(s_cut, t_window, minors, _bracket(g, *pair), brackets)


def obstruction_constant(s_cut: int = DEFAULT_S_CUT, t_window: int = DEFAULT_T_WINDOW,
                         backend: str = "exact", pair=(0, 1)) -> EisensteinInt:
    """t^0 coefficient of g_02 g_15 - g_12 g_05 (for the default pair)."""
    return certificate(s_cut, t_window, backend, pair).value


def stable_certificate(s_cut: int = DEFAULT_S_CUT, t_window: int = DEFAULT_T_WINDOW,
                       backend: str = "exact", step: int = STABILITY_STEP) -> Certificate:
    """Compute at W and at W + step; raise ThetaInstability if the value moved."""
    first = certificate(s_cut, t_window, backend)
    second = certificate(s_cut, t_window + step, backend)
    if first.value != second.value:
        raise ThetaInstability(
            f"constant changed from {first.value} to {second.value} when the t-window grew to {t_window + step}"
        )
    first.stable = True
    first.rerun_window = t_window + step
    return first
