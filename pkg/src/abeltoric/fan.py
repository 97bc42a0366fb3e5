"""Finite simplicial fans in Z^r and the Kleinschmidt fans of Picard number 2.

A fan is stored through its maximal cones only; every subset of the ray
indices of a maximal cone is a face and hence a cone of the fan.

Ray order produced by :func:`make_kleinschmidt` for a ``P^s``-bundle over
``P^d`` (so ``r = s + d``)::

    sigma_1 .. sigma_s      = e_1 .. e_s                       (fibre rays)
    sigma_{s+1}             = -(e_1 + ... + e_s)
    tau_1 .. tau_d          = e_{s+1} .. e_{s+d}               (base rays)
    tau_{d+1}               = (k_1, .., k_s, -1, .., -1)       (twisted ray)
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence

from . import _linalg

Cone = tuple  # sorted tuple of ray indices
LatticeVector = tuple  # tuple of ints


def _gcd_all(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(set(int(i) for i in c))) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.rank < 1:
            raise ValueError("fan rank must be positive")
        for r in rays:
            if len(r) != self.rank:
                raise ValueError(f"ray {r} does not have length {self.rank}")
            if _gcd_all(r) != 1:
                raise ValueError(f"ray {r} is not primitive")
        used = set()
        for c in cones:
            for i in c:
                if not 0 <= i < len(rays):
                    raise ValueError(f"cone {c} refers to a missing ray {i}")
            if c and _linalg.rank([rays[i] for i in c]) != len(c):
                raise ValueError(f"cone {c} is not simplicial")
            used.update(c)
        if used != set(range(len(rays))):
            raise ValueError("every ray must lie in some maximal cone")

    # -- faces -------------------------------------------------------------
    def is_face(self, indices) -> bool:
        s = set(indices)
        return any(s.issubset(c) for c in self.max_cones)

    def cones(self):
        """All cones (as sorted tuples), including the zero cone."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(itertools.combinations(c, k))
        return sorted(out, key=lambda c: (len(c), c))

    # -- interchange -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Fan":
        try:
            return cls(int(doc["rank"]), tuple(map(tuple, doc["rays"])), tuple(map(tuple, doc["max_cones"])))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed fan document: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Fan":
        return cls.from_dict(json.loads(text))


def make_kleinschmidt(base_dim: int, fiber_dim: int, twists: Sequence[int]) -> Fan:
    """Fan of P(O + O(k_1) + ... + O(k_s)) over P^d, d = base_dim, s = fiber_dim."""
    d, s = int(base_dim), int(fiber_dim)
    twists = tuple(int(k) for k in twists)
    if d < 1 or s < 1:
        raise ValueError("base and fibre dimensions must be at least 1")
    if len(twists) != s:
        raise ValueError(f"expected {s} twists, got {len(twists)}")
    if any(k < 0 for k in twists):
        raise ValueError("twists must be non-negative")
    if any(twists[i] < twists[i + 1] for i in range(s - 1)):
        raise ValueError("twists must be non-increasing")
    r = d + s

    def unit(i):
        return tuple(1 if j == i else 0 for j in range(r))

    sigmas = [unit(i) for i in range(s)]
    sigmas.append(tuple([-1] * s + [0] * d))
    taus = [unit(s + i) for i in range(d)]
    taus.append(twists + tuple([-1] * d))
    rays = tuple(sigmas + taus)

    n_sig, n_tau = s + 1, d + 1
    cones = []
    for skip_sig in range(n_sig):
        for skip_tau in range(n_tau):
            cone = [i for i in range(n_sig) if i != skip_sig]
            cone += [n_sig + j for j in range(n_tau) if j != skip_tau]
            cones.append(tuple(cone))
    return Fan(r, rays, tuple(cones))


def projective_space(n: int) -> Fan:
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, tuple(rays), tuple(cones))


def product(f: Fan, g: Fan) -> Fan:
    rays = [r + (0,) * g.rank for r in f.rays] + [(0,) * f.rank + r for r in g.rays]
    off = len(f.rays)
    cones = [c1 + tuple(off + i for i in c2) for c1 in f.max_cones for c2 in g.max_cones]
    return Fan(f.rank + g.rank, tuple(rays), tuple(cones))


def is_smooth(fan: Fan) -> bool:
    for c in fan.max_cones:
        rows = [fan.rays[i] for i in c]
        if not rows:
            continue
        if len(rows) == fan.rank:
            if abs(_linalg.det(rows)) != 1:
                return False
        elif _linalg.maximal_minors_gcd(rows) != 1:
            return False
    return True


def is_complete(fan: Fan) -> bool:
    """Facet-pairing test: every facet of a maximal cone lies in exactly two
    maximal cones, and the maximal cones are connected through facets."""
    if any(len(c) != fan.rank for c in fan.max_cones):
        return False
    owners: dict = {}
    for idx, c in enumerate(fan.max_cones):
        for facet in itertools.combinations(c, len(c) - 1):
            owners.setdefault(facet, []).append(idx)
    if any(len(v) != 2 for v in owners.values()):
        return False
    seen = {0}
    stack = [0]
    adj: dict = {}
    for a, b in owners.values():
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    while stack:
        for nb in adj.get(stack.pop(), ()):
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(fan.max_cones)


def primitive_collections(fan: Fan) -> list:
    """Minimal non-faces, by exhaustive subset enumeration."""
    n = len(fan.rays)
    found = []
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            if fan.is_face(subset):
                continue
            if all(fan.is_face(subset[:i] + subset[i + 1:]) for i in range(k)):
                found.append(subset)
    return found


@lru_cache(maxsize=None)
def _cone_coordinates(fan: Fan, cone: Cone, v: tuple):
    cols = [fan.rays[i] for i in cone]
    return _linalg.solve(cols, v)


def cone_containing(fan: Fan, v: Sequence[int]) -> Optional[Cone]:
    """Minimal cone of the fan containing v, or None if v is outside the support."""
    v = tuple(int(x) for x in v)
    if len(v) != fan.rank:
        raise ValueError("vector length does not match fan rank")
    if not any(v):
        return ()
    for c in fan.max_cones:
        coords = _cone_coordinates(fan, c, v)
        if coords is None or any(x < 0 for x in coords):
            continue
        return tuple(i for i, x in zip(c, coords) if x != 0)
    return None


def dual_basis(fan: Fan, cone: Cone) -> list:
    """Dual basis of M for a full-dimensional smooth cone: rows m_i with <m_i, n_j> = delta_ij."""
    if len(cone) != fan.rank:
        raise ValueError("dual basis needs a full-dimensional cone")
    inv = _linalg.inverse(tuple(fan.rays[i] for i in cone))
    # rays are rows R, so R @ inv = I and the columns of inv are the m_i
    basis = []
    for j in range(fan.rank):
        m = [inv[i][j] for i in range(fan.rank)]
        if any(Fraction(x).denominator != 1 for x in m):
            raise ValueError(f"cone {cone} is not smooth")
        basis.append(tuple(int(x) for x in m))
    return basis
