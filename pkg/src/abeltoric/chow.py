"""Chow rings of the Picard-number-2 toric 4-folds.

For X = P(O + O(k_1) + ... + O(k_s)) over P^d the ring is

    Z[a, b] / (a^(d+1), b * prod_i (b - k_i a))

with a the pull-back of the hyperplane class of the base and b the class of
the last fibre divisor.  Normal forms keep the a-exponent <= d and the
b-exponent <= s; the two relations form a Groebner basis for lex order
b > a, so the normal form is unique.

Two degree tables are offered.  ``"fan"`` integrates through the normal form
(top class a^d b^s has degree 1).  ``"paper"`` evaluates raw monomials with
the printed intersection numbers; for the P^2-bundle over P^2 the printed
b^4 = k^2 disagrees with the ring value k^2 - k_1 k_2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import _linalg
from .fan import Fan, make_kleinschmidt

MODES = ("paper", "fan")


@dataclass(frozen=True)
class BundleSpace:
    base_dim: int
    twists: tuple

    def __post_init__(self):
        twists = tuple(int(k) for k in self.twists)
        object.__setattr__(self, "twists", twists)
        if self.base_dim < 1 or not twists:
            raise ValueError("need base_dim >= 1 and at least one twist")
        if any(k < 0 for k in twists):
            raise ValueError("twists must be non-negative")
        if any(twists[i] < twists[i + 1] for i in range(len(twists) - 1)):
            raise ValueError("twists must be non-increasing")

    @property
    def fiber_dim(self) -> int:
        return len(self.twists)

    @property
    def dim(self) -> int:
        return self.base_dim + self.fiber_dim

    @property
    def kappa(self) -> int:
        return sum(self.twists)

    def fan(self) -> Fan:
        return make_kleinschmidt(self.base_dim, self.fiber_dim, self.twists)

    def divisor_classes(self) -> list:
        """Classes of the prime toric divisors in fan ray order: D_1..D_{s+1}, E_1..E_{d+1}."""
        ds = [B - k * A for k in self.twists] + [B]
        return ds + [A] * (self.base_dim + 1)

    def label(self) -> str:
        return f"P^{self.fiber_dim}-bundle over P^{self.base_dim}, twists {list(self.twists)}"


class RingElement:
    """Homogeneous polynomial in a, b with integer coefficients.

    ``terms`` maps (i, j) -> coefficient of a^i b^j.  Arithmetic does not
    reduce; call :func:`normal_form` for that.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping = ()):
        self.degree = int(degree)
        clean = {}
        for (i, j), c in dict(terms).items():
            if i + j != self.degree:
                raise ValueError(f"monomial a^{i} b^{j} is not of degree {self.degree}")
            if c:
                clean[(int(i), int(j))] = int(c)
        self.terms = clean

    @classmethod
    def monomial(cls, i: int, j: int, coeff: int = 1) -> "RingElement":
        return cls(i + j, {(i, j): coeff})

    @classmethod
    def zero(cls, degree: int) -> "RingElement":
        return cls(degree)

    def coeff(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.degree != self.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("cannot add elements of different degree")
        return None

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if self._check(other) is NotImplemented:
            return NotImplemented
        deg = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return RingElement(deg, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.degree, {k: c * other for k, c in self.terms.items()})
        if not isinstance(other, RingElement):
            return NotImplemented
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return RingElement(self.degree + other.degree, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"RingElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(p for p in (_pow("a", i), _pow("b", j)) if p) or "1"
            parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "terms": {f"a^{i} b^{j}": c for (i, j), c in sorted(self.terms.items(), reverse=True)},
        }


def _pow(sym, e):
    if e == 0:
        return ""
    return sym if e == 1 else f"{sym}^{e}"


ONE = RingElement(0, {(0, 0): 1})
A = RingElement.monomial(1, 0)
B = RingElement.monomial(0, 1)


def _elementary(values, k):
    return sum((_prod(c) for c in itertools.combinations(values, k)), 0)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def normal_form(space: BundleSpace, element: RingElement) -> RingElement:
    """Reduce modulo a^(d+1) = 0 and b^(s+1) = -sum_k (-1)^k e_k(twists) a^k b^(s+1-k)."""
    if element.degree > space.dim:
        raise ValueError(f"degree {element.degree} exceeds dim X = {space.dim}")
    d, s = space.base_dim, space.fiber_dim
    # b^(s+1) = sum_{k>=1} rel[k] a^k b^(s+1-k)
    rel = {k: -((-1) ** k) * _elementary(space.twists, k) for k in range(1, s + 1)}
    pending = dict(element.terms)
    out: dict = {}
    while pending:
        (i, j), c = pending.popitem()
        if c == 0 or i > d:
            continue
        if j <= s:
            out[(i, j)] = out.get((i, j), 0) + c
            continue
        for k, r in rel.items():
            if r:
                key = (i + k, j - k)
                pending[key] = pending.get(key, 0) + c * r
    return RingElement(element.degree, out)


def paper_degree_table(space: BundleSpace) -> dict:
    """Printed intersection numbers {(i, j): deg a^i b^j} for the three 4-fold families."""
    d, k = space.base_dim, space.kappa
    if space.dim != 4:
        raise ValueError("the printed tables cover 4-folds only")
    if d == 1:
        vals = [0, 0, 0, 1, k]
    elif d == 2:
        vals = [0, 0, 1, k, k * k]
    else:
        vals = [0, 1, k, k * k, k ** 3]
    return {(4 - j, j): vals[j] for j in range(5)}


def degree(space: BundleSpace, element: RingElement, mode: str = "fan") -> int:
    """Integrate a top-degree class over X."""
    if element.degree != space.dim and not element.is_zero():
        raise ValueError(f"degree() needs a class of degree {space.dim}, got {element.degree}")
    if mode == "fan":
        return normal_form(space, element).coeff(space.base_dim, space.fiber_dim)
    if mode == "paper":
        table = paper_degree_table(space)
        return sum(c * table[m] for m, c in element.terms.items())
    raise ValueError(f"unknown mode {mode!r}")


def toric_intersection(fan: Fan, rays: Sequence[int]) -> int:
    """Intersection number D_{rho_1} ... D_{rho_r} on a smooth complete toric variety,
    computed from the fan alone (linear relations and cone membership)."""
    rays = list(rays)
    if len(rays) != fan.rank:
        raise ValueError("need exactly rank-many divisors")
    counts: dict = {}
    for r in rays:
        counts[r] = counts.get(r, 0) + 1
    support = sorted(counts)
    if not fan.is_face(support):
        return 0
    if len(support) == len(rays):
        return 1
    rho = next(r for r in support if counts[r] > 1)
    # pick m with <m, n_rho> = 1 and <m, n_rho'> = 0 on the rest of the support
    cone = next(c for c in fan.max_cones if set(support) <= set(c))
    from .fan import dual_basis

    m = dual_basis(fan, cone)[cone.index(rho)]
    rest = list(rays)
    rest.remove(rho)
    total = 0
    for idx, n in enumerate(fan.rays):
        if idx == rho:
            continue
        w = sum(x * y for x, y in zip(m, n))
        if w:
            total -= w * toric_intersection(fan, rest + [idx])
    return total


def fan_degree_oracle(space: BundleSpace, element: RingElement) -> int:
    """Degree of a top class by expanding each monomial a^i b^j into prime divisors.

    a^i is written as E_1 ... E_i (all base divisors are linearly equivalent)
    and b as the last fibre divisor; no ring relation is used.
    """
    fan = space.fan()
    s = space.fiber_dim
    b_ray = s
    taus = list(range(s + 1, len(fan.rays)))
    total = 0
    for (i, j), c in element.terms.items():
        if i > len(taus):
            continue
        total += c * toric_intersection(fan, taus[:i] + [b_ray] * j)
    return total


def chern_c2(space: BundleSpace) -> RingElement:
    """Degree-2 part of prod over rays of (1 + [D_rho]), in normal form."""
    classes = space.divisor_classes()
    c2 = RingElement.zero(2)
    for x, y in itertools.combinations(classes, 2):
        c2 = c2 + x * y
    return normal_form(space, c2)


@dataclass(frozen=True)
class SurfaceClass:
    """Intrinsic numbers of a surface class: nu = a^2[A], mu = ab[A], lam = b^2[A]."""

    nu: int
    mu: int
    lam: int
    basis_mode: str = "paper"

    def to_dict(self) -> dict:
        return {"nu": self.nu, "mu": self.mu, "lambda": self.lam, "mode": self.basis_mode}


DEG2 = ((2, 0), (1, 1), (0, 2))


def class_from_coefficients(coeffs: Sequence[int]) -> RingElement:
    """(lambda', mu', nu') -> lambda' a^2 + mu' ab + nu' b^2."""
    return RingElement(2, dict(zip(DEG2, coeffs)))


def convert_class(space: BundleSpace, coeffs: Sequence[int], mode: str = "paper") -> SurfaceClass:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    cls = normal_form(space, class_from_coefficients(coeffs))
    nu, mu, lam = (degree(space, RingElement.monomial(i, j) * cls, mode) for i, j in DEG2)
    return SurfaceClass(nu, mu, lam, mode)


def _basis_monomials(space: BundleSpace):
    return [(i, j) for i, j in DEG2 if i <= space.base_dim and j <= space.fiber_dim]


def class_coefficients(space: BundleSpace, surface: SurfaceClass) -> tuple:
    """Inverse of :func:`convert_class`: normal-form (lambda', mu', nu')."""
    basis = _basis_monomials(space)
    cols = []
    for mono in basis:
        col = [degree(space, RingElement.monomial(i, j) * RingElement.monomial(*mono), surface.basis_mode)
               for i, j in DEG2]
        cols.append(col)
    sol = _linalg.solve(cols, (surface.nu, surface.mu, surface.lam))
    if sol is None or any(x.denominator != 1 for x in sol):
        raise ValueError(f"{surface} is not the class of an integral cycle")
    found = dict(zip(basis, (int(x) for x in sol)))
    return tuple(found.get(m, 0) for m in DEG2)


def pair_surface(space: BundleSpace, surface: SurfaceClass, c: RingElement, mode: str | None = None) -> int:
    if mode is not None and mode != surface.basis_mode:
        raise ValueError(f"surface class is in {surface.basis_mode!r} mode, asked for {mode!r}")
    if c.degree != 2:
        raise ValueError("can only pair a surface with a degree-2 class")
    vals = dict(zip(DEG2, (surface.nu, surface.mu, surface.lam)))
    return sum(coef * vals[m] for m, coef in c.terms.items())


def self_intersection(space: BundleSpace, surface: SurfaceClass) -> int:
    coeffs = class_coefficients(space, surface)
    return pair_surface(space, surface, class_from_coefficients(coeffs))


def double_point_number(space: BundleSpace, surface: SurfaceClass, mode: str | None = None) -> int:
    """[A]^2 - c_2(X).[A]; zero for an embedded abelian surface."""
    if mode is not None and mode != surface.basis_mode:
        raise ValueError(f"surface class is in {surface.basis_mode!r} mode, asked for {mode!r}")
    return self_intersection(space, surface) - pair_surface(space, surface, chern_c2(space))


def intersection_table(space: BundleSpace) -> list:
    """Rows (monomial, fan degree, paper degree) for all degree-4 monomials."""
    rows = []
    for j in range(space.dim + 1):
        mono = RingElement.monomial(space.dim - j, j)
        paper = degree(space, mono, "paper") if space.dim == 4 else None
        rows.append((str(mono), degree(space, mono, "fan"), paper))
    return rows
