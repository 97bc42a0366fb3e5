"""Morphisms from P^1 (and class-level shadows for other sources) into toric varieties.

A morphism P^1 -> X_fan sending infinity to the torus identity is given by
monic polynomials P_rho, one per ray, such that

* the P_rho over any primitive collection have no common factor, and
* sum_rho deg(P_rho) * n(rho) = 0 in N.

The character m then pulls back to eps(m) = prod_rho P_rho^{<m, n(rho)>}.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import polynomial as _poly
from .fan import Fan, dual_basis, make_kleinschmidt, primitive_collections
from .polynomial import Poly

INFINITY = "inf"
_primitive_collections = lru_cache(maxsize=64)(primitive_collections)


@dataclass(frozen=True)
class CurveData:
    polys: tuple  # one Poly per ray, in ray order

    @classmethod
    def from_mapping(cls, fan: Fan, assignment: Mapping[int, Poly]) -> "CurveData":
        missing = [i for i in range(len(fan.rays)) if i not in assignment]
        if missing:
            raise ValueError(f"no polynomial assigned to rays {missing}")
        return cls(tuple(assignment[i] for i in range(len(fan.rays))))

    @classmethod
    def parse(cls, texts: Sequence[str]) -> "CurveData":
        return cls(tuple(Poly.parse(t) for t in texts))

    @property
    def degrees(self) -> tuple:
        return tuple(p.degree for p in self.polys)

    def to_dict(self) -> dict:
        return {"polys": [str(p) for p in self.polys], "coeffs": [p.to_json() for p in self.polys]}


@dataclass(frozen=True)
class Violation:
    kind: str  # "gcd" or "balance"
    where: tuple  # primitive collection, or (coordinate,)
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "where": list(self.where), "detail": self.detail}


def _check_shape(fan: Fan, data: CurveData):
    if len(data.polys) != len(fan.rays):
        raise ValueError(f"expected {len(fan.rays)} polynomials, got {len(data.polys)}")
    for i, p in enumerate(data.polys):
        if not p.is_monic():
            raise ValueError(f"polynomial for ray {i} ({p}) is not monic")


def balance_vector(fan: Fan, degrees: Sequence[int]) -> tuple:
    return tuple(sum(d * r[k] for d, r in zip(degrees, fan.rays)) for k in range(fan.rank))


def validate_curve(fan: Fan, data: CurveData) -> list:
    """All violations, gcd ones first (in primitive-collection order), then balance."""
    _check_shape(fan, data)
    out = []
    for coll in _primitive_collections(fan):
        g = _poly.gcd([data.polys[i] for i in coll])
        if g.degree > 0:
            out.append(Violation("gcd", tuple(coll), f"common factor {g}"))
    for k, v in enumerate(balance_vector(fan, data.degrees)):
        if v:
            out.append(Violation("balance", (k,), f"coordinate {k} of sum deg*n is {v}"))
    return out


def admissible_degrees(fan: Fan, total_bound: int) -> list:
    """Nonnegative degree vectors with sum deg*n = 0 and total at most total_bound, sorted."""
    if total_bound < 0:
        raise ValueError("total_bound must be nonnegative")
    return list(_admissible_degrees(fan, total_bound))


@lru_cache(maxsize=64)
def _admissible_degrees(fan: Fan, total_bound: int) -> tuple:
    n = len(fan.rays)
    out = []

    def rec(i, left, acc, partial):
        if i == n:
            if not any(partial):
                out.append(tuple(acc))
            return
        ray = fan.rays[i]
        for d in range(left + 1):
            acc.append(d)
            rec(i + 1, left - d, acc, [p + d * r for p, r in zip(partial, ray)])
            acc.pop()

    rec(0, total_bound, [], [0] * fan.rank)
    return tuple(sorted(out))


@dataclass(frozen=True)
class ChartPoint:
    cone: tuple  # cone spanned by the vanishing rays
    chart: Optional[tuple]  # maximal cone whose dual basis gives the coordinates
    basis: tuple  # the characters m
    values: tuple  # eps(m)(z0), exact

    def to_dict(self) -> dict:
        from .classify import fmt

        return {
            "cone": list(self.cone),
            "chart": None if self.chart is None else list(self.chart),
            "basis": [list(m) for m in self.basis],
            "values": [fmt(v) for v in self.values],
        }


def _eps(data: CurveData, fan: Fan, m, z0) -> Fraction:
    val = Fraction(1)
    for p, ray in zip(data.polys, fan.rays):
        e = sum(a * b for a, b in zip(m, ray))
        if e == 0:
            continue
        pv = p(z0)
        if pv == 0 and e < 0:
            raise ValueError("pole in chart coordinate; the chart does not contain this point")
        val *= pv ** e
    return val


def evaluate_curve(fan: Fan, data: CurveData, z0) -> ChartPoint:
    _check_shape(fan, data)
    std = tuple(tuple(1 if i == k else 0 for i in range(fan.rank)) for k in range(fan.rank))
    if z0 is None or z0 == INFINITY:
        # leading coefficients are 1, so eps(m) -> z^{sum e*deg} -> 1 when balanced
        if any(balance_vector(fan, data.degrees)):
            raise ValueError("degrees do not balance; the point at infinity is not the identity")
        return ChartPoint((), None, std, tuple(Fraction(1) for _ in std))
    z0 = Fraction(z0)
    s = tuple(i for i, p in enumerate(data.polys) if p(z0) == 0)
    if not s:
        return ChartPoint((), None, std, tuple(_eps(data, fan, m, z0) for m in std))
    if not fan.is_face(s):
        raise ValueError(f"rays {list(s)} vanish together at z = {z0} but span no cone")
    chart = next(c for c in fan.max_cones if set(s) <= set(c) and len(c) == fan.rank)
    basis = tuple(dual_basis(fan, chart))
    return ChartPoint(s, chart, basis, tuple(_eps(data, fan, m, z0) for m in basis))


# -- class-level balance ---------------------------------------------------

@dataclass(frozen=True)
class ClassAssignment:
    rank: int
    classes: tuple  # one integer vector per ray

    def __post_init__(self):
        cl = tuple(tuple(int(x) for x in v) for v in self.classes)
        if any(len(v) != self.rank for v in cl):
            raise ValueError(f"every class must have rank {self.rank}")
        object.__setattr__(self, "classes", cl)


@dataclass
class BalanceResult:
    violations: list = field(default_factory=list)  # (m index, nonzero sum)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [{"m": i, "sum": list(v)} for i, v in self.violations]}


def class_balance(fan: Fan, classes: ClassAssignment) -> BalanceResult:
    """For every basis character m, sum_rho <m, n(rho)> class(rho) must vanish."""
    if len(classes.classes) != len(fan.rays):
        raise ValueError(f"expected {len(fan.rays)} classes, got {len(classes.classes)}")
    res = BalanceResult()
    for k in range(fan.rank):
        tot = [0] * classes.rank
        for ray, cl in zip(fan.rays, classes.classes):
            if ray[k]:
                tot = [t + ray[k] * c for t, c in zip(tot, cl)]
        if any(tot):
            res.violations.append((k, tuple(tot)))
    return res


def bundle_class_configuration(twists: Sequence[int]):
    """P^2-bundle over P^2 with D_1, D_2 -> c, D_3 -> e + c and E_1..E_3 -> e in <e, c>."""
    fan = make_kleinschmidt(2, 2, twists)
    e, c = (1, 0), (0, 1)
    return fan, ClassAssignment(2, (c, c, (1, 1), e, e, e))


def generic_instance(degrees: Sequence[int], seed_roots: Sequence) -> CurveData:
    """Monic polynomials with pairwise distinct roots drawn in order from seed_roots."""
    it = iter(seed_roots)
    polys = []
    for d in degrees:
        polys.append(Poly.from_roots(list(itertools.islice(it, d))))
    return CurveData(tuple(polys))
