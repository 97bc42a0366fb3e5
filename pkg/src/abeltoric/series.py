"""Eisenstein integers and truncated two-variable series over Z[omega].

``TLaurent`` is a finite Laurent polynomial in t; ``SSeries`` is a power
series in s, truncated above ``s_cut``, whose coefficients are TLaurents.
Everything here is arbitrary-precision and dict-backed; the dense int64
counterpart lives in :mod:`abeltoric._kernels`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np


@dataclass(frozen=True)
class EisensteinInt:
    """x + y*omega with omega^2 + omega + 1 = 0."""

    x: int = 0
    y: int = 0

    def __add__(self, other):
        other = _coerce(other)
        return EisensteinInt(self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinInt(-self.x, -self.y)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        o = _coerce(other)
        yy = self.y * o.y
        return EisensteinInt(self.x * o.x - yy, self.x * o.y + o.x * self.y - yy)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.x or self.y)

    def conjugate(self):
        # omega -> omega^2 = -1 - omega
        return EisensteinInt(self.x - self.y, -self.y)

    def norm(self) -> int:
        return self.x * self.x - self.x * self.y + self.y * self.y

    def is_rational(self) -> bool:
        return self.y == 0

    def __str__(self):
        if not self.y:
            return str(self.x)
        if not self.x:
            return f"{self.y}w"
        return f"{self.x}{'+' if self.y > 0 else '-'}{abs(self.y)}w"

    def to_json(self):
        return [self.x, self.y]


def _coerce(v) -> EisensteinInt:
    if isinstance(v, EisensteinInt):
        return v
    if isinstance(v, int):
        return EisensteinInt(v, 0)
    raise TypeError(f"cannot coerce {type(v).__name__} to EisensteinInt")


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
CUBE_ROOTS = (ONE, OMEGA, EisensteinInt(-1, -1))


class TLaurent:
    """Finite Laurent polynomial in t over Z[omega]."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, EisensteinInt] = ()):
        self.terms = {int(e): _coerce(c) for e, c in dict(terms).items() if _coerce(c)}

    def __getitem__(self, e: int) -> EisensteinInt:
        return self.terms.get(e, ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    def max_exponent(self) -> Optional[int]:
        return max(self.terms) if self.terms else None

    def __add__(self, other: "TLaurent") -> "TLaurent":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return TLaurent(out)

    def __neg__(self):
        return TLaurent({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other: "TLaurent", window: Optional[int] = None) -> "TLaurent":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if window is not None and abs(e) > window:
                    continue
                out[e] = out.get(e, ZERO) + c1 * c2
        return TLaurent(out)

    def __mul__(self, other):
        if isinstance(other, TLaurent):
            return self.mul(other)
        c = _coerce(other)
        return TLaurent({e: v * c for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TLaurent) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "TLaurent(0)"
        return "TLaurent(" + " + ".join(f"({c})t^{e}" for e, c in sorted(self.terms.items())) + ")"

    def to_json(self) -> list:
        return [[e, c.x, c.y] for e, c in sorted(self.terms.items())]


class SSeries:
    """Power series in s truncated above ``s_cut``; coefficients are TLaurents.

    ``t_window`` bounds the stored |t-exponent|; products drop terms outside
    it.  Binary operations use the smaller of the two cuts and windows.
    """

    __slots__ = ("s_cut", "t_window", "coeffs")

    def __init__(self, s_cut: int, coeffs: Mapping[int, TLaurent] = (), t_window: Optional[int] = None):
        self.s_cut = int(s_cut)
        self.t_window = t_window
        self.coeffs = {}
        for e, c in dict(coeffs).items():
            if e > self.s_cut:
                continue
            if e < 0:
                raise ValueError("negative s-exponent")
            if not c.is_zero():
                self.coeffs[int(e)] = c

    def __getitem__(self, e: int) -> TLaurent:
        return self.coeffs.get(e, TLaurent())

    def exponents(self) -> list:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def lowest_exponent(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def _meta(self, other):
        w1, w2 = self.t_window, other.t_window
        w = w2 if w1 is None else (w1 if w2 is None else min(w1, w2))
        return min(self.s_cut, other.s_cut), w

    def __add__(self, other: "SSeries") -> "SSeries":
        cut, w = self._meta(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return SSeries(cut, out, w)

    def __neg__(self):
        return SSeries(self.s_cut, {e: -c for e, c in self.coeffs.items()}, self.t_window)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "SSeries") -> "SSeries":
        cut, w = self._meta(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e > cut:
                    continue
                p = c1.mul(c2, w)
                out[e] = out[e] + p if e in out else p
        return SSeries(cut, out, w)

    def __eq__(self, other):
        return isinstance(other, SSeries) and self.s_cut == other.s_cut and self.coeffs == other.coeffs

    def __repr__(self):
        return f"SSeries(s_cut={self.s_cut}, exponents={self.exponents()})"

    # -- dense conversion ----------------------------------------------------
    def to_dense(self, window: int) -> np.ndarray:
        arr = np.zeros((self.s_cut + 1, 2 * window + 1, 2), dtype=np.int64)
        for s, lau in self.coeffs.items():
            for t, c in lau.terms.items():
                if abs(t) > window:
                    continue
                arr[s, window + t, 0] = c.x
                arr[s, window + t, 1] = c.y
        return arr

    @classmethod
    def from_dense(cls, arr: np.ndarray, window: int) -> "SSeries":
        coeffs = {}
        for s in range(arr.shape[0]):
            nz = np.nonzero(arr[s, :, 0] | arr[s, :, 1])[0]
            if len(nz):
                coeffs[s] = TLaurent({int(i) - window: EisensteinInt(int(arr[s, i, 0]), int(arr[s, i, 1])) for i in nz})
        return cls(arr.shape[0] - 1, coeffs, window)
