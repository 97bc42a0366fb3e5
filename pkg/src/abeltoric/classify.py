"""Numerical feasibility sieves for abelian surfaces in the three bundle families.

Every candidate carries an ordered trail of ``Check`` records.  A candidate
is rejected at its first failing check; later checks are not evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import _kernels
from .chow import (
    A,
    B,
    BundleSpace,
    RingElement,
    SurfaceClass,
    convert_class,
    degree,
    pair_surface,
)

# Known outcomes for X = P^3 x P^1, settled in the literature rather than here.
EXTERNAL_P3_P1 = {6: "external-exists", 9: "external-excluded"}
SIEVE_MU_VALUES = (4, 5, 6, 7, 9, 11, 15, 27)


@dataclass(frozen=True)
class Check:
    rule: str
    passed: bool
    witness: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {"rule": self.rule, "passed": self.passed, "witness": fmt(self.witness)}


@dataclass
class SurfaceCandidate:
    """A numerical surface class with its verdict trail.

    For the P^3-bundle over P^1 the numbers follow the usual labelling there:
    [A] = lam*ab + mu*b^2 and nu = mu - 3.  For the P^2-bundle over P^2 they
    are the intrinsic nu = a^2[A], mu = ab[A], lam = b^2[A].
    """

    space: BundleSpace
    nu: int
    mu: int
    lam: Optional[Fraction]
    mode: str = "paper"
    checks: list = field(default_factory=list)
    verdict: str = "admissible"
    reason: Optional[str] = None

    def record(self, rule: str, passed: bool, witness=None) -> bool:
        self.checks.append(Check(rule, passed, None if witness is None else Fraction(witness)))
        if not passed and self.verdict == "admissible":
            self.verdict, self.reason = "rejected", rule
        return passed

    @property
    def rejected(self) -> bool:
        return self.verdict == "rejected"

    @property
    def triple(self) -> tuple:
        return (self.nu, self.mu, self.lam)

    def surface_class(self) -> SurfaceClass:
        if self.space.base_dim == 1:
            return convert_class(self.space, (0, int(self.lam), self.mu), self.mode)
        return SurfaceClass(self.nu, self.mu, int(self.lam), self.mode)

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "mu": self.mu,
            "lambda": fmt(self.lam),
            "mode": self.mode,
            "verdict": self.verdict,
            "reason": self.reason,
            "checks": [c.to_dict() for c in self.checks],
        }


def fmt(x):
    """Exact JSON rendering: ints stay ints, other rationals become "p/q"."""
    if x is None:
        return None
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def has_fibration_factorization(mu: int) -> bool:
    """mu = d*e with d >= 2 translates of an elliptic curve of degree e >= 3."""
    return any(mu % d == 0 and mu // d >= 3 for d in range(2, mu // 3 + 1))


def genus_of_trace(space: BundleSpace, surface, i: int, mode: str = "paper") -> Fraction:
    """p_g(B_i) = (1/2)[A](b - k_i a)^2 + 1 for the fibre divisor D_i (1-based, k_{s+1} = 0)."""
    if not 1 <= i <= space.fiber_dim + 1:
        raise ValueError(f"divisor index {i} out of range 1..{space.fiber_dim + 1}")
    if isinstance(surface, SurfaceCandidate):
        surface = surface.surface_class()
    k = (space.twists + (0,))[i - 1]
    c = (B - A * k) ** 2
    return Fraction(pair_surface(space, surface, c, mode), 2) + 1


def _p3_lambda(kappa: int, nu: int) -> Fraction:
    return Fraction(-kappa * (nu * nu + 3 * nu) + 8 * nu + 24, 2 * nu)


def sieve_p3_bundle(twists: Sequence[int], include_rejected: bool = False) -> list:
    """Candidates [A] = lam*ab + mu*b^2 on a P^3-bundle over P^1."""
    space = BundleSpace(1, tuple(twists))
    kappa = space.kappa
    ks = space.twists + (0,)
    out = []
    for nu in range(1, 25):
        mu = nu + 3
        lam = _p3_lambda(kappa, nu)
        cand = SurfaceCandidate(space, nu, mu, lam)
        out.append(cand)
        if not cand.record("divisibility", lam.denominator == 1, lam):
            continue
        if not cand.record("kappa_bound", kappa * nu <= 24, kappa * nu):
            continue
        if not cand.record("fibration", has_fibration_factorization(mu), mu):
            continue
        ok = True
        for i in range(1, 5):
            pg = genus_of_trace(space, cand, i)
            if not cand.record(f"genus_{i}", pg.denominator == 1 and pg >= 1, pg):
                ok = False
                break
        if not ok:
            continue
        for i in range(1, 4):
            star = lam / 2 + (Fraction(kappa, 2) - ks[i - 1]) * mu
            if not cand.record(f"effective_{i}", star >= 0, star):
                ok = False
                break
        if not ok:
            continue
        # B_i^2 = 2 gives h^0(O_A(B_i)) = 1, so equal twists force B_i = B_j.
        sq = {i: 2 * (genus_of_trace(space, cand, i) - 1) for i in range(1, 5)}
        hit = next(
            (i for i in range(1, 5) for j in range(1, 5) if i != j and ks[i - 1] == ks[j - 1] and sq[i] == 2),
            None,
        )
        cand.record("b_rule", hit is None, sq[hit] if hit else sq[1])
        if cand.rejected:
            continue
        if kappa == 0:
            cand.verdict = "external"
            cand.reason = EXTERNAL_P3_P1.get(mu, "external-unknown")
    if include_rejected:
        return out
    return [c for c in out if not c.rejected]


def divisibility_survivors(nu_max: int = 1000, kappa_max: int = 40, backend: str | None = None) -> list:
    """Sorted mu = nu + 3 values for which some kappa in 0..kappa_max gives integral lam."""
    grid = _kernels.divisibility_grid(nu_max, kappa_max, backend=backend)
    return sorted({nu + 3 for nu in range(1, nu_max + 1) if grid[nu - 1].any()})


@dataclass(frozen=True)
class P1BundleResult:
    kappa: int
    applicable: bool
    lam: Optional[int]
    mu: Optional[int]
    empty: bool

    def to_dict(self) -> dict:
        return {"kappa": self.kappa, "applicable": self.applicable, "lambda": self.lam,
                "mu": self.mu, "empty": self.empty}


def check_p1_bundle(kappa: int) -> P1BundleResult:
    """Solve a^2[A] = a(b-ka)[A] = (b-ka)^2[A] = 0 for [A] = lam*a^2 + mu*ab."""
    from . import _linalg

    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if kappa == 0:
        return P1BundleResult(0, False, None, None, False)
    space = BundleSpace(3, (kappa,))
    tests = [A * A, A * (B - A * kappa), (B - A * kappa) ** 2]
    basis = [A * A, A * B]
    rows = [[degree(space, t * m) for m in basis] for t in tests]
    kernel = _linalg.nullspace(rows)
    if kernel:
        return P1BundleResult(kappa, True, None, None, False)
    return P1BundleResult(kappa, True, 0, 0, True)


def _p2_lambda(k1: int, k2: int, nu: int, mu: int, mode: str) -> Fraction:
    kappa = k1 + k2
    num = mu * mu - 2 * kappa * mu * nu - (9 - 2 * kappa) * mu - (3 - 3 * kappa + k1 * k2) * nu
    if mode == "fan":
        num += k1 * k2 * nu * nu
    elif mode != "paper":
        raise ValueError(f"unknown mode {mode!r}")
    return Fraction(num, 3 - 2 * nu)


def enumerate_p2_bundle(twists: Sequence[int], nu: int, mu_max: int | None = None,
                        mode: str = "paper", include_rejected: bool = False) -> list:
    """Scan mu in [k_1 nu, mu_max], solving the self-intersection equation for lam."""
    k1, k2 = (int(k) for k in twists)
    space = BundleSpace(2, (k1, k2))
    kappa = space.kappa
    if kappa <= 0:
        raise ValueError("need kappa > 0; P^2 x P^2 is not covered")
    if nu < 6 or nu % 2:
        raise ValueError("nu must be even and at least 6")
    if mu_max is None:
        mu_max = 10 * kappa * nu
    if mu_max < k1 * nu:
        raise ValueError(f"mu_max={mu_max} is below k_1*nu={k1 * nu}")
    out = []
    for mu in range(k1 * nu, mu_max + 1):
        lam = _p2_lambda(k1, k2, nu, mu, mode)
        cand = SurfaceCandidate(space, nu, mu, lam, mode)
        out.append(cand)
        if not cand.record("self_intersection", lam.denominator == 1, lam):
            continue
        if not cand.record("lambda_nonnegative", lam >= 0, lam):
            continue
        if not cand.record("lambda_even", lam % 2 == 0, lam):
            continue
        if not cand.record("hodge_index", lam * nu <= mu * mu, mu * mu - lam * nu):
            continue
        # h^0(O_A(b)) = lam/2 must be at least 3
        if not cand.record("h0_lower_bound", lam >= 6, lam):
            continue
        if not cand.record("section_degree", mu - k1 * nu >= 0, mu - k1 * nu):
            continue
        cand.record("section_square", lam - 2 * k1 * mu + k1 * k1 * nu >= 0, lam - 2 * k1 * mu + k1 * k1 * nu)
    if include_rejected:
        return out
    return [c for c in out if not c.rejected]


@dataclass(frozen=True)
class RegionReport:
    twists: tuple
    nu: int
    x_star: Fraction
    f_at_x_star: Fraction
    fprime_at_x_star: Fraction
    threshold: Fraction

    @property
    def value_condition(self) -> bool:
        return self.f_at_x_star < self.threshold

    @property
    def slope_condition(self) -> bool:
        return self.fprime_at_x_star <= 2 * self.x_star

    @property
    def verdict(self) -> bool:
        return self.value_condition and self.slope_condition

    def to_dict(self) -> dict:
        return {
            "twists": list(self.twists),
            "nu": self.nu,
            "x_star": fmt(self.x_star),
            "f_at_x_star": fmt(self.f_at_x_star),
            "fprime_at_x_star": fmt(self.fprime_at_x_star),
            "threshold": fmt(self.threshold),
            "value_condition": self.value_condition,
            "slope_condition": self.slope_condition,
            "verdict": self.verdict,
        }


def region_curve(twists: Sequence[int], nu: int):
    """Coefficients (q2, q1, q0) of y = f(x) = q2 x^2 + q1 x + q0, with x = mu/(k nu), y = lam/(k^2 nu)."""
    k1, k2 = (int(k) for k in twists)
    kappa = k1 + k2
    if kappa == 0:
        raise ValueError("kappa must be positive")
    den = 2 * nu - 3
    q2 = Fraction(-nu, den)
    q1 = (2 * nu - 2 + Fraction(9, kappa)) / den
    q0 = Fraction(3 + k1 * k2 - 3 * kappa, kappa * kappa * den)
    return q2, q1, q0


def region_test(twists: Sequence[int], nu: int) -> RegionReport:
    k1, k2 = (int(k) for k in twists)
    q2, q1, q0 = region_curve((k1, k2), nu)
    x = Fraction(k1, k1 + k2)
    f = q2 * x * x + q1 * x + q0
    fp = 2 * q2 * x + q1
    return RegionReport((k1, k2), nu, x, f, fp, x * x)
