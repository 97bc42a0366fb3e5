"""Period-lattice computations on a polarized abelian surface.

Homology classes of curves are 2-cycles in wedge^2 Lambda, written in the
basis f12, f13, f14, f23, f24, f34.  The intersection pairing uses the
symplectic orientation f1^f3^f2^f4 = +1 (so f1^f2^f3^f4 = -1), which is the
orientation in which a polarization of type (d1, d2) has positive square.
The polarization itself enters as its Poincare dual 2-cycle
d2*f13 + d1*f24, so that E . (u^v) = E(u, v).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import sympy

from . import _linalg

WEDGE_BASIS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
WEDGE_LABELS = ("f12", "f13", "f14", "f23", "f24", "f34")


@dataclass(frozen=True)
class Wedge2:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if len(c) != 6:
            raise ValueError("Wedge2 needs 6 coefficients")
        object.__setattr__(self, "coeffs", c)

    def __add__(self, other):
        return Wedge2(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return Wedge2(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Wedge2(tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int):
        return Wedge2(tuple(k * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self):
        parts = [f"{c}*{lab}" for c, lab in zip(self.coeffs, WEDGE_LABELS) if c]
        return " + ".join(parts) if parts else "0"


def pairing(x: Wedge2, y: Wedge2) -> int:
    """Intersection number of two 2-cycles, orientation f1^f3^f2^f4 = +1."""
    a, b = x.coeffs, y.coeffs
    top = a[0] * b[5] - a[1] * b[4] + a[2] * b[3] + a[3] * b[2] - a[4] * b[1] + a[5] * b[0]
    return -top


def curve_class(u: Sequence[int], v: Sequence[int]) -> Wedge2:
    """u ^ v for lattice vectors u, v in f-coordinates."""
    if len(u) != 4 or len(v) != 4:
        raise ValueError("lattice vectors have 4 coordinates")
    return Wedge2(tuple(int(u[i]) * int(v[j]) - int(u[j]) * int(v[i]) for i, j in WEDGE_BASIS))


def is_primitive(x: Wedge2) -> bool:
    if x.is_zero():
        raise ValueError("the zero class is neither primitive nor divisible")
    g = 0
    for c in x.coeffs:
        g = gcd(g, c)
    return g == 1


@dataclass(frozen=True)
class PolarizedLattice:
    d1: int
    d2: int

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1 or self.d2 % self.d1:
            raise ValueError("polarization type needs positive d1 | d2")

    @property
    def form(self) -> list:
        m = [[0] * 4 for _ in range(4)]
        m[0][2], m[2][0] = self.d1, -self.d1
        m[1][3], m[3][1] = self.d2, -self.d2
        return m

    def pfaffian(self) -> int:
        """Pfaffian in the symplectic ordering f1, f3, f2, f4 (equals d1*d2)."""
        f = self.form
        o = (0, 2, 1, 3)
        g = [[f[o[i]][o[j]] for j in range(4)] for i in range(4)]
        return g[0][1] * g[2][3] - g[0][2] * g[1][3] + g[0][3] * g[1][2]

    def evaluate(self, u: Sequence[int], v: Sequence[int]) -> int:
        f = self.form
        return sum(int(u[i]) * f[i][j] * int(v[j]) for i in range(4) for j in range(4))

    def polarization_class(self) -> Wedge2:
        """Poincare dual 2-cycle of the polarization."""
        return Wedge2((0, self.d2, 0, 0, self.d1, 0))


def h0(square: int) -> int:
    """h^0 of an ample class with the given even self-intersection (Riemann-Roch)."""
    if square <= 0 or square % 2:
        raise ValueError("need a positive even self-intersection")
    return square // 2


# -- period matrix ---------------------------------------------------------

# Columns f1..f4, each entry a triple (const, tau1, tau3).
PERIOD_COLUMNS = (
    ((0, 4, 0), (0, 3, 0)),
    ((0, 3, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 0, 0)),
    ((0, 0, 0), (3, 0, 0)),
)


def lattice_coordinates(v, columns=PERIOD_COLUMNS) -> tuple:
    """Integer f-coordinates of v, where v is a pair of (const, tau1, tau3) triples.

    tau1 and tau3 are independent symbols, so each component gives three
    rational equations.  Raises ValueError if v is not in the lattice.
    """
    if len(v) != 2 or any(len(c) != 3 for c in v):
        raise ValueError("v must be two (const, tau1, tau3) triples")
    cols = [tuple(x for comp in col for x in comp) for col in columns]
    target = tuple(x for comp in v for x in comp)
    sol = _linalg.solve(cols, target)
    if sol is None:
        raise ValueError(f"{v} is not in the real span of the period lattice")
    if any(Fraction(x).denominator != 1 for x in sol):
        raise ValueError(f"{v} is not a lattice vector (coordinates {[str(x) for x in sol]})")
    return tuple(int(x) for x in sol)


# -- Neron-Severi data -----------------------------------------------------

def gram(classes: Sequence[Wedge2]) -> tuple:
    return tuple(tuple(pairing(x, y) for y in classes) for x in classes)


def _bil(g, u, v) -> Fraction:
    return sum(Fraction(u[i]) * g[i][j] * Fraction(v[j]) for i in range(2) for j in range(2))


@dataclass(frozen=True)
class Isotropy:
    kind: str  # "split", "double", "irrational", "definite", "zero"
    directions: tuple
    factorization: str
    content: int
    factors: tuple  # linear forms (p, q) meaning p*xi + q*zeta


def isotropic_directions(g) -> Isotropy:
    """Rational isotropic lines of Q(xi, zeta) = (xi, zeta) g (xi, zeta)^T."""
    xi, zeta = sympy.symbols("xi zeta")
    q = sympy.expand(g[0][0] * xi**2 + 2 * g[0][1] * xi * zeta + g[1][1] * zeta**2)
    if q == 0:
        return Isotropy("zero", (), "0", 0, ())
    disc = g[0][1] ** 2 - g[0][0] * g[1][1]
    content, parts = sympy.factor_list(q)
    text = str(sympy.factor(q))
    if disc < 0:
        return Isotropy("definite", (), text, int(content), ())
    linear, dirs = [], []
    for f, mult in parts:
        poly = sympy.Poly(f, xi, zeta)
        if poly.total_degree() != 1:
            continue
        p, r = int(poly.coeff_monomial(xi)), int(poly.coeff_monomial(zeta))
        d = _canonical((r, -p))
        for _ in range(mult):
            linear.append((p, r))
        if d not in dirs:
            dirs.append(d)
    if not dirs:
        return Isotropy("irrational", (), text, int(content), ())
    kind = "double" if disc == 0 else "split"
    return Isotropy(kind, tuple(sorted(dirs)), text, int(content), tuple(linear))


def _canonical(v):
    g = gcd(v[0], v[1])
    v = (v[0] // g, v[1] // g)
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        v = (-v[0], -v[1])
    return v


def expand_factorization(iso: Isotropy):
    """Back to the (g00, 2 g01, g11) coefficients, for identity checks."""
    (p1, q1), (p2, q2) = iso.factors
    c = iso.content
    return (c * p1 * p2, c * (p1 * q2 + p2 * q1), c * q1 * q2)


# -- case analysis ---------------------------------------------------------

@dataclass
class Branch:
    scenario: str
    label: str
    verdict: str = "consistent"
    reason: Optional[str] = None
    witnesses: dict = field(default_factory=dict)

    def fail(self, reason: str) -> "Branch":
        if self.verdict == "consistent":
            self.verdict, self.reason = "contradiction", reason
        return self

    def to_dict(self) -> dict:
        from .classify import fmt

        return {
            "scenario": self.scenario,
            "branch": self.label,
            "verdict": self.verdict,
            "reason": self.reason,
            "witnesses": {k: (fmt(v) if not isinstance(v, (list, tuple)) else [fmt(x) for x in v])
                          for k, v in self.witnesses.items()},
        }


@dataclass
class CaseReport:
    gram: tuple
    isotropy: Isotropy
    branches: list

    @property
    def all_contradictory(self) -> bool:
        return bool(self.branches) and all(b.verdict == "contradiction" for b in self.branches)

    def scenario_contradictory(self, scenario: str) -> bool:
        bs = [b for b in self.branches if b.scenario == scenario]
        return bool(bs) and all(b.verdict == "contradiction" for b in bs)

    def to_dict(self) -> dict:
        return {
            "gram": [list(r) for r in self.gram],
            "isotropic": {
                "kind": self.isotropy.kind,
                "directions": [list(d) for d in self.isotropy.directions],
                "factorization": self.isotropy.factorization,
            },
            "branches": [b.to_dict() for b in self.branches],
            "all_contradictory": self.all_contradictory,
        }


def _coords_in(g, j, jp, x):
    """Coordinates (alpha, beta) of x = alpha*J + beta*J' (over Q)."""
    m = [[_bil(g, j, j), _bil(g, j, jp)], [_bil(g, jp, j), _bil(g, jp, jp)]]
    rhs = [_bil(g, j, x), _bil(g, jp, x)]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det == 0:
        return None
    return ((rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det, (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det)


def _product_branch(g, v, w, a, degs, jj, checks) -> Branch:
    br = Branch("product", f"J on {list(v)}, J' on {list(w)}")
    va, wa = _bil(g, v, a), _bil(g, w, a)
    if va == 0 or wa == 0:
        return br.fail("isotropic direction orthogonal to the polarization")
    xi, xip = Fraction(degs[0]) / va, Fraction(degs[1]) / wa
    J = tuple(xi * c for c in v)
    Jp = tuple(xip * c for c in w)
    br.witnesses.update(xi=xi, xi_prime=xip, J=J, J_prime=Jp)
    prod = _bil(g, J, Jp)
    br.witnesses["J.J'"] = prod
    if prod != jj:
        return br.fail(f"J.J' = {prod} but must be {jj}")
    # J, J' span a unimodular sublattice of full rank, hence all of NS:
    # every named class has integral coordinates, primitive ones stay primitive
    for name, x, primitive in checks:
        co = _coords_in(g, J, Jp, x)
        br.witnesses[f"{name} in (J,J')"] = co
        if co is None:
            return br.fail("J and J' are dependent")
        if any(c.denominator != 1 for c in co):
            return br.fail(f"{name} has non-integral coordinates in (J, J')")
        if primitive and gcd(int(co[0]), int(co[1])) != 1:
            return br.fail(f"{name} would be divisible by {gcd(int(co[0]), int(co[1]))}")
    return br


def _low_degree_branch(g, v, a, total, e_deg, ample, checks) -> Branch:
    br = Branch("low_degree", f"J on {list(v)}, J.E = {e_deg}")
    va = _bil(g, v, a)
    if va == 0:
        return br.fail("isotropic direction orthogonal to the polarization")
    xi = Fraction(total) / va
    J = tuple(xi * c for c in v)
    je = _bil(g, J, ample)
    br.witnesses.update(xi=xi, J=J, **{"J.E": je})
    if je.denominator != 1:
        return br.fail(f"J.E = {je} is not an integer")
    if je != e_deg:
        return br.fail(f"J.E = {je}, not {e_deg}")
    for name, x, primitive in checks:
        # x = k*J with integral k >= 2 contradicts primitivity of x
        ratios = {Fraction(x[i]) / J[i] for i in range(2) if J[i] != 0}
        zero_ok = all(x[i] == 0 for i in range(2) if J[i] == 0)
        if primitive and len(ratios) == 1 and zero_ok:
            k = ratios.pop()
            br.witnesses[f"{name}/J"] = k
            if k.denominator == 1 and abs(k) >= 2:
                return br.fail(f"{name} = {k}*J is divisible")
    return br


def reider_case_analysis(g, polarization=(1, 0), product_degrees=(1, 11), product_pairing=1,
                         ample: Optional[tuple] = (0, 1), low_degree: Optional[int] = 2,
                         primitive_class: Optional[tuple] = (Fraction(1, 2), Fraction(-1, 2))) -> CaseReport:
    """Branch-exhaustive test of elliptic configurations on a rank-2 Neron-Severi lattice.

    Classes are coordinate pairs in the basis of ``g``.  Product scenario:
    isotropic J, J' with J.a, J'.a = product_degrees and J.J' = product_pairing,
    tried on every ordered pair of isotropic directions.  Low-degree scenario
    (skipped when ``low_degree`` or ``ample`` is None): isotropic J with
    J.a = low_degree, split by the value of J.E for the ample class E.
    ``primitive_class`` names a class known to be primitive in H^2.
    """
    g = tuple(tuple(int(x) for x in r) for r in g)
    if g[0][1] != g[1][0]:
        raise ValueError("Gram matrix must be symmetric")
    iso = isotropic_directions(g)
    a = tuple(Fraction(x) for x in polarization)
    checks = [("a", a, False)]
    if ample is not None:
        checks.append(("E", tuple(Fraction(x) for x in ample), False))
    if primitive_class is not None:
        checks.append(("C", tuple(Fraction(x) for x in primitive_class), True))
    branches = []
    dirs = iso.directions
    for v, w in itertools.product(dirs, repeat=2):
        branches.append(_product_branch(g, v, w, a, product_degrees, product_pairing, checks))
    if low_degree is not None and ample is not None:
        e = tuple(Fraction(x) for x in ample)
        for v in dirs:
            for e_deg in range(1, low_degree + 1):
                branches.append(_low_degree_branch(g, v, a, low_degree, e_deg, e, checks))
    return CaseReport(g, iso, branches)


# -- the (1,3) configuration -----------------------------------------------

@dataclass(frozen=True)
class Configuration:
    lattice: PolarizedLattice
    E: Wedge2
    C: Wedge2
    gram: tuple  # over (E, E + 2C)
    paper_gram: tuple  # over (E + 2C, E)


def paper_configuration() -> Configuration:
    lat = PolarizedLattice(1, 3)
    e = lat.polarization_class()
    f1 = lattice_coordinates(((0, 4, 0), (0, 3, 0)))
    gamma1 = lattice_coordinates(((4, 0, 0), (3, 0, 0)))
    c = curve_class(f1, gamma1)
    g = gram([e, e + 2 * c])
    return Configuration(lat, e, c, g, gram([e + 2 * c, e]))
