"""Univariate polynomials in z with exact rational coefficients.

Coefficients are stored low degree first.  Parsing and gcd go through sympy;
evaluation is plain Horner on Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy
from sympy.polys.polyerrors import CoercionFailed
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

Z = sympy.Symbol("z")
_TRANSFORMS = standard_transformations + (convert_xor,)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple  # low -> high, no trailing zeros

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = [Fraction(1)]
        for r in roots:
            r = Fraction(r)
            nxt = [Fraction(0)] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] += c
                nxt[i] -= r * c
            out = nxt
        return cls(tuple(out))

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Parse e.g. "z^2-3/2*z+1".  Only the variable z is allowed."""
        try:
            expr = parse_expr(text, local_dict={"z": Z}, transformations=_TRANSFORMS, evaluate=True)
            poly = sympy.Poly(expr, Z, domain="QQ")
        except (sympy.SympifyError, sympy.PolynomialError, CoercionFailed, SyntaxError, TypeError) as exc:
            raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from exc
        return cls.from_sympy(poly)

    @classmethod
    def from_sympy(cls, poly) -> "Poly":
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
        return cls(tuple(coeffs))

    def to_sympy(self):
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)] or [0], Z,
                          domain="QQ")

    @property
    def degree(self) -> int:
        # the zero polynomial gets -1
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    def substitute_scale(self, c) -> "Poly":
        """Monic polynomial whose roots are c times the roots of self."""
        c = Fraction(c)
        if c == 0:
            raise ValueError("scale must be nonzero")
        n = self.degree
        return Poly(tuple(a * c ** (n - i) for i, a in enumerate(self.coeffs)))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return str(self.to_sympy().as_expr()).replace("**", "^")

    def to_json(self) -> list:
        from .classify import fmt

        return [fmt(c) for c in self.coeffs]


def gcd(polys: Sequence[Poly]) -> Poly:
    """Monic gcd over Q (the gcd of the empty family is 0)."""
    acc = None
    for p in polys:
        sp = p.to_sympy()
        acc = sp if acc is None else sympy.gcd(acc, sp)
        if acc.degree() == 0:
            return Poly.one()
    if acc is None or acc.is_zero:
        return Poly(())
    return Poly.from_sympy(acc.monic())
