"""Ultrametric geometry of K^n with the max-norm: norms, balls, spheres,
invariance audits and the finite-residue ball covering."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .valued_fields import (
    FieldElement,
    FieldError,
    Magnitude,
    ZERO,
    from_json,
    mag_compare,
    mag_max,
    magnitude,
    make_field,
    power,
    valuation,
)

Vector = tuple


def norm(v: Sequence[FieldElement]) -> Magnitude:
    """max |v_i|; zero exactly for the zero vector."""
    if not v:
        return ZERO
    return mag_max(*(magnitude(x) for x in v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def distance(u, v) -> Magnitude:
    return norm(_sub(u, v))


def _elt_json(x):
    return x.to_json()


# --------------------------------------------------------------------------
# regions


class Region:
    """A subset of K^n with exact membership."""

    kind = "region"

    def contains(self, v: Vector) -> bool:  # pragma: no cover - abstract
        raise NotImplementedError

    def __contains__(self, v) -> bool:
        return self.contains(tuple(v))

    def to_json(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class _Centered(Region):
    center: Vector
    radius: Magnitude

    def __post_init__(self):
        if self.radius.is_zero:
            raise ValueError("radius must be positive")

    @property
    def n(self) -> int:
        return len(self.center)

    def _cmp(self, v) -> int:
        if len(v) != len(self.center):
            raise ValueError("dimension mismatch")
        return mag_compare(distance(v, self.center), self.radius)

    def to_json(self):
        return {"kind": self.kind, "center": [_elt_json(x) for x in self.center],
                "radius": self.radius.exponent}


@dataclass(frozen=True)
class ClosedBall(_Centered):
    kind = "closed_ball"

    def contains(self, v):
        return self._cmp(v) <= 0


@dataclass(frozen=True)
class OpenBall(_Centered):
    kind = "open_ball"

    def contains(self, v):
        return self._cmp(v) < 0


@dataclass(frozen=True)
class Sphere(_Centered):
    kind = "sphere"

    def contains(self, v):
        return self._cmp(v) == 0


@dataclass(frozen=True)
class PuncturedBall(_Centered):
    kind = "punctured_ball"

    def contains(self, v):
        return self._cmp(v) <= 0 and tuple(v) != tuple(self.center)


@dataclass(frozen=True)
class ProductLocus(Region):
    """Product of regions on consecutive coordinate blocks, in order."""

    factors: tuple
    kind = "product"

    @property
    def n(self) -> int:
        return sum(f.n for f in self.factors)

    def contains(self, v):
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        start = 0
        for f in self.factors:
            if not f.contains(tuple(v[start:start + f.n])):
                return False
            start += f.n
        return True

    def to_json(self):
        return {"kind": self.kind, "factors": [f.to_json() for f in self.factors]}


@dataclass(frozen=True)
class RegionUnion(Region):
    parts: tuple
    kind = "union"

    @property
    def n(self) -> int:
        return self.parts[0].n

    def contains(self, v):
        return any(p.contains(v) for p in self.parts)

    def to_json(self):
        return {"kind": self.kind, "parts": [p.to_json() for p in self.parts]}


def sphere_union(center: Vector, radii: Sequence[Magnitude]) -> RegionUnion:
    """Union of the spheres S[center, r] over the radius list."""
    return RegionUnion(tuple(Sphere(tuple(center), r) for r in radii))


@dataclass(frozen=True)
class WholeSpace(Region):
    n: int
    kind = "whole"

    def contains(self, v):
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return True

    def to_json(self):
        return {"kind": self.kind, "n": self.n}


@dataclass(frozen=True)
class PuncturedSpace(Region):
    """Points whose first ``k`` coordinates are not all zero (K^n minus 0 when k = n)."""

    n: int
    k: int
    kind = "punctured_space"

    def contains(self, v):
        if len(v) != self.n:
            raise ValueError("dimension mismatch")
        return any(not x.is_zero() for x in v[:self.k])

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "k": self.k}


_CENTERED = {c.kind: c for c in (ClosedBall, OpenBall, Sphere, PuncturedBall)}


def region_from_json(fld, data: dict) -> Region:
    kind = data["kind"]
    if kind in _CENTERED:
        center = tuple(from_json(fld, x) for x in data["center"])
        return _CENTERED[kind](center, power(fld.base, int(data["radius"])))
    if kind == "product":
        return ProductLocus(tuple(region_from_json(fld, f) for f in data["factors"]))
    if kind == "union":
        return RegionUnion(tuple(region_from_json(fld, p) for p in data["parts"]))
    if kind == "whole":
        return WholeSpace(int(data["n"]))
    if kind == "punctured_space":
        return PuncturedSpace(int(data["n"]), int(data["k"]))
    raise ValueError(f"unknown region kind {kind!r}")


def region_contains(R: Region, v: Vector) -> bool:
    return R.contains(tuple(v))


# --------------------------------------------------------------------------
# invariance


@dataclass
class DisplacementReport:
    displacements: list[Magnitude]
    radius: Magnitude
    ok: bool
    failures: list[str] = field(default_factory=list)


def displacement_audit(generators: Sequence, x: Vector, r: Magnitude,
                       samples: Sequence[Vector] = ()) -> DisplacementReport:
    """Check ||g(x) - x|| < r for every generator, and that g maps sampled
    points of B[x,r], B(x,r) and S[x,r] back into the same set."""
    disp = [distance(g(x), x) for g in generators]
    failures = [f"generator {i}: ||g(x)-x|| = {d} not < {r}"
                for i, d in enumerate(disp) if mag_compare(d, r) >= 0]
    regions = (ClosedBall(tuple(x), r), OpenBall(tuple(x), r), Sphere(tuple(x), r))
    for y in samples:
        for R in regions:
            if not R.contains(y):
                continue
            for i, g in enumerate(generators):
                if not R.contains(g(y)):
                    failures.append(f"generator {i} moves a point out of {R.kind}")
    return DisplacementReport(disp, r, not failures, failures)


# --------------------------------------------------------------------------
# covering B[0, |pi|^i] by translates of B[0, |pi|^j]


def _ring(fld):
    ring = make_field(fld)
    if not ring.residue_finite:
        raise FieldError(f"{fld.name} has an infinite residue field")
    return ring


def coset_representatives(i: int, j: int, fld) -> list[FieldElement]:
    """sum_{s < j-i} pi^(i+s) t_s over digit tuples, as a list."""
    if j < i:
        raise ValueError("need j >= i")
    ring = _ring(fld)
    pi, digits = ring.uniformizer, ring.residue_digits
    powers = [pi ** (i + s) for s in range(j - i)]
    out = []
    for ts in itertools.product(digits, repeat=j - i):
        acc = fld(0)
        for pw, t in zip(powers, ts):
            acc = acc + pw * t
        out.append(acc)
    return out


def cover_ball(i: int, j: int, n: int, fld) -> list[Vector]:
    """Translates a with B[0,|pi|^i] = disjoint union of a + B[0,|pi|^j]."""
    if n < 1:
        raise ValueError("dimension must be positive")
    reps = coset_representatives(i, j, fld)
    return [tuple(v) for v in itertools.product(reps, repeat=n)]


@dataclass
class CoverReport:
    count: int
    expected: int
    inside: bool
    disjoint: bool
    exhaustive: bool
    grid_points: int

    @property
    def ok(self) -> bool:
        return self.count == self.expected and self.inside and self.disjoint and self.exhaustive


def _in_ideal(x: FieldElement, j: int) -> bool:
    v = valuation(x)
    return v is None or v >= j


def verify_cover(translates: Sequence[Vector], i: int, j: int, n: int, fld) -> CoverReport:
    """Exact partition check of B[0,|pi|^i] by the balls a + B[0,|pi|^j].

    Disjointness and exhaustiveness are decided coordinatewise on the
    product structure, then every point of an independent residue grid
    (different digit representatives plus a tail in pi^j D) is located in
    exactly one translate.
    """
    ring = _ring(fld)
    q = ring.residue_cardinality
    expected = q ** (n * (j - i))
    tset = set(translates)
    inside = all(all(_in_ideal(x, i) for x in a) for a in translates)
    projections = [sorted({a[k] for a in translates}, key=repr) for k in range(n)]
    product_ok = len(tset) == len(translates)
    size = 1
    for P in projections:
        size *= len(P)
    product_ok = product_ok and size == len(tset)
    disjoint = product_ok and all(
        not _in_ideal(a - b, j) for P in projections for a, b in itertools.combinations(P, 2))
    # independent grid: digits shifted by -pi, tail pi^j / (1 + pi)
    pi = ring.uniformizer
    alt = [d - pi for d in ring.residue_digits]
    tail = pi ** j / (fld(1) + pi)
    grid1 = []
    for ts in itertools.product(alt, repeat=j - i):
        acc = tail
        for s, t in enumerate(ts):
            acc = acc + pi ** (i + s) * t
        grid1.append(acc)
    lookup = []
    exhaustive = product_ok
    for P in projections:
        table = {}
        for y in grid1:
            hits = [a for a in P if _in_ideal(y - a, j)]
            if len(hits) != 1:
                exhaustive = False
            table[y] = hits[0] if hits else None
        lookup.append(table)
    points = 0
    if exhaustive:
        for y in itertools.product(grid1, repeat=n):
            points += 1
            a = tuple(lookup[k][y[k]] for k in range(n))
            if a not in tset or not all(_in_ideal(yk - ak, j) for yk, ak in zip(y, a)):
                exhaustive = False
                break
    return CoverReport(len(translates), expected, inside, disjoint, exhaustive, points)


__all__ = [
    "ClosedBall", "CoverReport", "DisplacementReport", "OpenBall", "ProductLocus",
    "PuncturedBall", "PuncturedSpace", "Region", "RegionUnion", "Sphere", "Vector",
    "WholeSpace", "coset_representatives", "cover_ball", "displacement_audit", "distance",
    "norm", "region_contains", "region_from_json", "sphere_union", "verify_cover",
]
