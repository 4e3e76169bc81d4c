"""Paradoxical-decomposition certificates and their verification on finite
orbit truncations.

Three schemes are implemented:

``four-piece``
    X = A1 | A2 | B1 | B2 = A1 | t(A2) = B1 | s(B2) for a free pair (s, t)
    acting without fixed points.
``six-piece``
    two invariant loci, each carrying a four-piece decomposition for its own
    embedded copy of the free group; the pieces B1 of both loci merge into
    ``E`` and the pieces A1 into ``E'``.
``zbC``
    a set E with a designated point set C whose orbits are free and meet C
    once, plus a map alpha sending C outside E:
    alpha(C) | E = (alpha(C) | A1) | s(A2) = B1 | t(B2) | alpha(C).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .geometry import (
    ClosedBall,
    OpenBall,
    ProductLocus,
    PuncturedSpace,
    Region,
    RegionUnion,
    Sphere,
    WholeSpace,
    _Centered,
    cover_ball,
    displacement_audit,
    norm,
    region_from_json,
    sphere_union,
    verify_cover,
)
from .matrices import (
    AffineMap,
    GroupSpec,
    Mat,
    affinize,
    embed,
    fixed_points,
    group_membership,
    magnus,
    magnus_eps_pair,
    transcendental_pair,
)
from .valued_fields import (
    FieldError,
    Magnitude,
    RationalFunctions,
    RationalsPadic,
    Trivial,
    field_from_json,
    field_to_json,
    from_json,
    make_field,
    power,
)
from .words import EMPTY, Word, _word

# --------------------------------------------------------------------------
# piece assignment on the free group

FOUR_PIECE = ("A1", "A2", "B1", "B2")
_INV_LETTER = {"a": "A", "A": "a", "b": "B", "B": "b"}


def assign_piece(scheme: str, w: Word) -> str:
    """Label of the reduced word ``w`` (generator a plays sigma, b plays tau).

    four-piece: A1 = W(tau), A2 = W(tau^-1), B1 = W(sigma) + {1} + {sigma^-n},
    B2 = the rest of W(sigma^-1).
    zbC: A1 = W(sigma), A2 = W(sigma^-1), B1 = W(tau), B2 = W(tau^-1), C = {1}.
    """
    s = w.letters
    if scheme == "four-piece":
        if not s:
            return "B1"
        c = s[0]
        if c == "b":
            return "A1"
        if c == "B":
            return "A2"
        if c == "a":
            return "B1"
        return "B1" if s == "A" * len(s) else "B2"
    if scheme == "zbC":
        if not s:
            return "C"
        return {"a": "A1", "A": "A2", "b": "B1", "B": "B2"}[s[0]]
    raise ValueError(f"unknown scheme {scheme!r}")


def combine_counts(m: int, n: int, l: int, invariant: bool = False) -> int:  # noqa: E741
    """Pieces used when A ~m E ~n B and C ~l Z are combined: m+n+l+1, or
    m+n+l when one of A, B, E is invariant under the subgroup."""
    if min(m, n, l) < 1:
        raise ValueError("piece counts must be positive")
    return m + n + l + (0 if invariant else 1)


# --------------------------------------------------------------------------
# certificates

TARGETS = ("ball-no-0", "sphere-far", "sphere0", "with-0", "Kn-minus-0", "whole-space")
_ALIASES = {
    "sphere-at-0-even-n": "sphere0", "sphere-at-0-odd-n": "sphere0",
    "ball-or-sphere-with-0": "with-0", "K^n-minus-0": "Kn-minus-0",
    "kn-minus-0": "Kn-minus-0", "ball-with-0": "with-0", "sphere-with-0": "with-0",
}


def canonical_target(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in TARGETS:
        raise ValueError(f"unknown target {name!r}; expected one of {', '.join(TARGETS)}")
    return name


def expected_pieces(target: str, n: int) -> int:
    """Declared piece count for each target (5 - (-1)^n for spheres at 0)."""
    target = canonical_target(target)
    if target in ("sphere0", "Kn-minus-0"):
        return 5 - (-1) ** n
    if target == "whole-space":
        return 5
    return 4


_ZBC_C_LABELS = {"A1": "A1+Z", "A2": "A2", "B1": "B1", "B2": "B2", "C": "C"}
_ZBC_GENERIC_LABELS = {"B1": "A1+Z", "B2": "A2", "A1": "B1", "A2": "B2"}


@dataclass(frozen=True)
class Locus:
    """An invariant set on which the free pair (sigma, tau) acts, with the
    four-piece labels renamed to certificate pieces."""

    region: Region
    sigma: str
    tau: str
    labels: dict

    @property
    def pieces(self) -> set:
        return set(self.labels.values())

    def to_json(self):
        return {"region": self.region.to_json(), "sigma": self.sigma, "tau": self.tau,
                "labels": dict(sorted(self.labels.items()))}


@dataclass(frozen=True)
class Seed:
    point: tuple
    locus: int = 0
    kind: str = "generic"  # or "C" for designated points of the zbC scheme

    def to_json(self):
        return {"point": [x.to_json() for x in self.point], "locus": self.locus, "kind": self.kind}


@dataclass
class Certificate:
    target: str
    field: object
    n: int
    group: GroupSpec
    generators: dict
    scheme: str
    pieces: tuple
    equations: tuple
    region: Region
    loci: tuple
    seeds: tuple
    c_points: tuple = ()
    c_dim: int = 0
    params: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def declared_pieces(self) -> int:
        return len(self.pieces)

    def element(self, name: str) -> AffineMap:
        if name == "1":
            return AffineMap.identity(self.n, self.field)
        return self.generators[name]

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "scheme": self.scheme,
            "pieces": list(self.pieces),
            "piece_count": len(self.pieces),
            "equations": [[list(t) for t in eq] for eq in self.equations],
            "generators": {k: self.generators[k].to_json() for k in sorted(self.generators)},
            "field": field_to_json(self.field),
            "dimension": self.n,
            "group": self.group.to_json(),
            "region": self.region.to_json(),
            "loci": [l.to_json() for l in self.loci],
            "seeds": [s.to_json() for s in self.seeds],
            "c_points": [[x.to_json() for x in c] for c in self.c_points],
            "c_dim": self.c_dim,
            "params": self.params,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        fld = field_from_json(data["field"])
        n = int(data["dimension"])

        def vec(xs):
            return tuple(from_json(fld, x) for x in xs)

        gens = {}
        for name, g in data["generators"].items():
            gens[name] = AffineMap(Mat(fld, [[from_json(fld, x) for x in r] for r in g["linear"]]),
                                   vec(g["translation"]))
        loci = tuple(Locus(region_from_json(fld, l["region"]), l["sigma"], l["tau"], dict(l["labels"]))
                     for l in data["loci"])
        seeds = tuple(Seed(vec(s["point"]), int(s["locus"]), s["kind"]) for s in data["seeds"])
        return cls(
            target=data["target"], field=fld, n=n, group=GroupSpec.from_json(data["group"]),
            generators=gens, scheme=data["scheme"], pieces=tuple(data["pieces"]),
            equations=tuple(tuple(tuple(t) for t in eq) for eq in data["equations"]),
            region=region_from_json(fld, data["region"]), loci=loci, seeds=seeds,
            c_points=tuple(vec(c) for c in data.get("c_points", [])),
            c_dim=int(data.get("c_dim", 0)), params=dict(data.get("params", {})),
            notes=tuple(data.get("notes", ())))

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text))


# --------------------------------------------------------------------------
# generator selection


def _ring_kind(fld) -> str:
    """Z when char K = 0 differs from the residue characteristic, else D."""
    return "Z" if isinstance(fld, RationalsPadic) else "D"


def free_pair(fld, eps: Magnitude) -> tuple[Mat, Mat, str]:
    """A free pair in SL(2, R, eps): Magnus matrices for Q with |.|_p,
    the transcendental pair otherwise."""
    if isinstance(fld, RationalsPadic):
        A, B, (m1, m2) = magnus_eps_pair(eps, fld.p, fld)
        return A, B, f"Magnus pair A_{fld.p}^{m1}, A_{fld.p}^{m2}"
    if isinstance(fld, RationalFunctions):
        A, B, t = transcendental_pair(fld, eps)
        return A, B, f"transcendental pair with t = {t}"
    raise FieldError(f"{fld.name}: only whole-space certificates are available over a "
                     "trivially valued field")


def _unit(fld, n: int, k: int, scale=None):
    one = fld(1) if scale is None else scale
    return tuple(one if i == k else fld(0) for i in range(n))


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vscale(c, v):
    return tuple(c * x for x in v)


def _max_exp(*exps: int) -> int:
    return max(exps)


def _pi(fld):
    return make_field(fld).uniformizer


def _radius(fld, e: int) -> Magnitude:
    return power(fld.base, e)


def _default_center(fld, n: int, target: str):
    if target in ("ball-no-0", "sphere-far"):
        return _unit(fld, n, n - 1)
    return tuple(fld(0) for _ in range(n))


def _anchored_pair(fld, n: int, x, e: int, eps_exp: int, anchor_shift: bool):
    """Generators in K^n acting freely near x: the planar free pair is
    conjugated to fix an anchor in the first coordinate plane (or 0), then
    pushed to K^n through the corner embedding."""
    pi = _pi(fld)
    x12 = tuple(x[:2])
    if anchor_shift:
        shift = pi ** (e - 1)
        anchor = (x12[0] + shift, x12[1])
        if all(c.is_zero() for c in anchor):
            anchor = (x12[0], x12[1] + shift)
        anorm = norm(anchor)
        # eps0 = min(r / ||x - anchor||, 1 / ||anchor||)
        eps0 = _max_exp(1, -anorm.exponent)
    else:
        anchor = (fld(0), fld(0))
        d = norm(x12)
        eps0 = e - d.exponent
    eps1 = _max_exp(eps_exp, eps0)
    A, B, how = free_pair(fld, _radius(fld, eps1))
    if anchor_shift:
        S, T = affinize([A, B], anchor)
    else:
        S, T = AffineMap(A), AffineMap(B)
    S, T = embed(S, n, "corner"), embed(T, n, "corner")
    return S, T, anchor, eps1, how


def build_certificate(target: str, fld, n: int, *, center=None, radius_exp: int | None = None,
                      eps_exp: int = 1, kind: str = "ball", radii: Sequence[int] | None = None,
                      c_point=None) -> Certificate:
    """Construct the certificate for ``target`` in K^n.

    ``radius_exp`` e means r = base^-e; ``eps_exp`` likewise for epsilon.
    ``kind`` selects ball / open-ball / sphere for the ``with-0`` and
    ``ball-no-0`` targets; ``radii`` lists exponents for ``Kn-minus-0``.
    """
    target = canonical_target(target)
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if eps_exp < 0:
        raise ValueError("epsilon must lie in (0, 1]")
    if isinstance(fld, Trivial) and target != "whole-space":
        raise FieldError(f"{fld.name}: target {target} needs a nontrivially valued field")
    if target == "whole-space":
        return _whole_space(fld, n, c_point)
    if center is None:
        center = _default_center(fld, n, target)
    center = tuple(fld(c) for c in center)
    if len(center) != n:
        raise ValueError("center has the wrong dimension")
    if radius_exp is None:
        radius_exp = 1 if target in ("ball-no-0", "sphere-far") else 0
    r = _radius(fld, radius_exp)
    params = {"center": [c.to_json() for c in center], "radius_exp": radius_exp,
              "eps_exp": eps_exp, "kind": kind}
    ring = _ring_kind(fld)
    if target in ("ball-no-0", "sphere-far"):
        return _far_from_zero(target, fld, n, center, radius_exp, eps_exp, kind, params, ring)
    if target == "with-0":
        return _with_zero(fld, n, center, radius_exp, eps_exp, kind, params)
    if target == "sphere0":
        if norm(center).exponent is not None and norm(center) >= r:
            raise ValueError("sphere0 needs ||x|| < r (then S[x,r] = S[0,r])")
        return _spheres_at_zero("sphere0", fld, n, [radius_exp], eps_exp, params, ring)
    radii = list(radii) if radii is not None else [-1, 0, 1, 2]
    params = {"radii": radii, "eps_exp": eps_exp}
    return _spheres_at_zero("Kn-minus-0", fld, n, radii, eps_exp, params, ring)


def _region_of(kind: str, x, r: Magnitude) -> Region:
    if kind == "ball":
        return ClosedBall(tuple(x), r)
    if kind == "open-ball":
        return OpenBall(tuple(x), r)
    if kind == "sphere":
        return Sphere(tuple(x), r)
    raise ValueError(f"unknown region kind {kind!r}")


def _four_piece_locus(region) -> Locus:
    return Locus(region, "s", "t", {k: k for k in FOUR_PIECE})


_FOUR_EQUATIONS = ((("A1", "1"), ("A2", "t")), (("B1", "1"), ("B2", "s")))


def _ball_seeds(fld, n, x, e, kind):
    pi = _pi(fld)
    if kind == "ball":
        pts = [x, _vadd(x, _unit(fld, n, 0, pi ** e)), _vadd(x, _unit(fld, n, n - 1, pi ** e))]
    elif kind == "open-ball":
        pts = [x, _vadd(x, _unit(fld, n, 0, pi ** (e + 1))),
               _vadd(x, _unit(fld, n, n - 1, pi ** (e + 1)))]
    else:
        d = pi ** e
        pts = [_vadd(x, _unit(fld, n, 0, d)), _vadd(x, _unit(fld, n, n - 1, d)),
               _vadd(x, _vadd(_unit(fld, n, 0, d), _unit(fld, n, n - 1, d)))]
        if n == 2:
            pts[2] = _vadd(x, (d, d * pi + d))
    return tuple(Seed(tuple(p)) for p in pts)


def _far_from_zero(target, fld, n, x, e, eps_exp, kind, params, ring) -> Certificate:
    r = _radius(fld, e)
    if target == "sphere-far":
        kind = "sphere"
        params["kind"] = kind
    idx = next((k for k, c in enumerate(x)
                if not c.is_zero() and (norm((c,)) > r if kind != "open-ball" else norm((c,)) >= r)),
               None)
    if idx is None:
        raise ValueError(f"{target} needs some |x_i| > r (the region must avoid 0)")
    gamma = list(range(n))
    gamma[0], gamma[idx] = idx, 0
    z = tuple(x[gamma[j]] for j in range(n))  # z = P^-1 x
    S, T, _, eps1, how = _anchored_pair(fld, n, z, e, eps_exp, anchor_shift=False)
    notes = [how, f"inner epsilon base^-{eps1}"]
    if idx:
        S, T = embed(S, n, "permutation", gamma), embed(T, n, "permutation", gamma)
        notes.append(f"conjugated by the coordinate transposition (1 {idx + 1})")
    region = _region_of(kind, x, r)
    return Certificate(
        target=target, field=fld, n=n,
        group=GroupSpec("SL_eps", n, ring=ring, eps=_radius(fld, eps_exp)),
        generators={"s": S, "t": T}, scheme="four-piece", pieces=FOUR_PIECE,
        equations=_FOUR_EQUATIONS, region=region, loci=(_four_piece_locus(region),),
        seeds=_ball_seeds(fld, n, x, e, kind), params=params, notes=tuple(notes))


def _with_zero(fld, n, x, e, eps_exp, kind, params) -> Certificate:
    r = _radius(fld, e)
    region = _region_of(kind, x, r)
    S, T, anchor, eps1, how = _anchored_pair(fld, n, x, e, eps_exp, anchor_shift=True)
    params["anchor"] = [c.to_json() for c in anchor]
    return Certificate(
        target="with-0", field=fld, n=n, group=GroupSpec("SA_eps", n, eps=_radius(fld, eps_exp)),
        generators={"s": S, "t": T}, scheme="four-piece", pieces=FOUR_PIECE,
        equations=_FOUR_EQUATIONS, region=region, loci=(_four_piece_locus(region),),
        seeds=_ball_seeds(fld, n, x, e, kind), params=params,
        notes=(how, f"affine anchor in the first coordinate plane, inner epsilon base^-{eps1}"))


def _spheres_at_zero(target, fld, n, radii, eps_exp, params, ring) -> Certificate:
    A, B, how = free_pair(fld, _radius(fld, eps_exp))
    zero = tuple(fld(0) for _ in range(n))
    rs = [_radius(fld, e) for e in radii]
    region = Sphere(zero, rs[0]) if len(rs) == 1 else sphere_union(zero, rs)
    pi = _pi(fld)
    group = GroupSpec("SL_eps", n, ring=ring, eps=_radius(fld, eps_exp))
    if n % 2 == 0:
        S, T = embed(AffineMap(A), n, "diagonal"), embed(AffineMap(B), n, "diagonal")
        seeds = []
        for e in radii:
            d = pi ** e
            seeds += [_unit(fld, n, 0, d), _unit(fld, n, n - 1, d),
                      _vadd(_unit(fld, n, 0, d), _unit(fld, n, 1, d))]
        return Certificate(
            target=target, field=fld, n=n, group=group, generators={"s": S, "t": T},
            scheme="four-piece", pieces=FOUR_PIECE, equations=_FOUR_EQUATIONS, region=region,
            loci=(_four_piece_locus(region),), seeds=tuple(Seed(p) for p in seeds),
            params=params, notes=(how, "diagonal embedding on coordinate pairs"))
    k = n // 2
    z2k, z1 = tuple(fld(0) for _ in range(2 * k)), (fld(0),)
    loc1 = [ProductLocus((Sphere(z2k, r), ClosedBall(z1, r))) for r in rs]
    loc2 = [ProductLocus((OpenBall(z2k, r), Sphere(z1, r))) for r in rs]
    L1 = loc1[0] if len(rs) == 1 else RegionUnion(tuple(loc1))
    L2 = loc2[0] if len(rs) == 1 else RegionUnion(tuple(loc2))
    gens = {"s1": embed(AffineMap(A), n, "shifted1"), "t1": embed(AffineMap(B), n, "shifted1"),
            "s2": embed(AffineMap(A), n, "shifted2"), "t2": embed(AffineMap(B), n, "shifted2")}
    loci = (Locus(L1, "s1", "t1", {"B1": "E", "B2": "A12", "A1": "E'", "A2": "A14"}),
            Locus(L2, "s2", "t2", {"B1": "E", "B2": "A22", "A1": "E'", "A2": "A24"}))
    seeds = []
    for e in radii:
        d = pi ** e
        seeds += [Seed(_unit(fld, n, 0, d), 0),
                  Seed(_vadd(_unit(fld, n, 1, d), _unit(fld, n, n - 1, d)), 0),
                  Seed(_unit(fld, n, n - 1, d), 1),
                  Seed(_vadd(_unit(fld, n, 0, d * pi), _unit(fld, n, n - 1, d)), 1)]
    return Certificate(
        target=target, field=fld, n=n, group=group, generators=gens, scheme="six-piece",
        pieces=("E", "A12", "A22", "E'", "A14", "A24"),
        equations=((("E", "1"), ("A12", "s1"), ("A22", "s2")),
                   (("E'", "1"), ("A14", "t1"), ("A24", "t2"))),
        region=region, loci=loci, seeds=tuple(seeds), params=params,
        notes=(how, "loci S^2k[0,r] x B^1[0,r] and B^2k(0,r) x S^1[0,r] with shifted embeddings"))


def _whole_space(fld, n: int, c_point=None) -> Certificate:
    if fld.char == 0:
        A, B = magnus(0, fld), magnus(1, fld)
        how = "Magnus pair A_0, A_1 in SL(2,Z)"
    elif isinstance(fld, (RationalFunctions, Trivial)):
        A, B, t = transcendental_pair(fld, None)
        how = f"transcendental pair with t = {t}"
    else:  # pragma: no cover - every descriptor is covered above
        raise FieldError(f"unsupported field {fld.name}")
    c = tuple(fld(x) for x in c_point) if c_point is not None else (fld(1), fld(0))
    if len(c) != 2 or all(x.is_zero() for x in c):
        raise ValueError("c must be a nonzero point of the plane")
    if not group_membership(AffineMap.translation_by(c), GroupSpec("SA_L", 2)).ok:
        raise ValueError("c must have coordinates in L")
    gens = {"s": AffineMap(A), "t": AffineMap(B),
            "alpha": AffineMap.translation_by(tuple(-x for x in c))}
    base = Certificate(
        target="whole-space", field=fld, n=2, group=GroupSpec("SA_L", 2), generators=gens,
        scheme="zbC", pieces=("A1+Z", "A2", "B1", "B2", "C"),
        equations=((("A1+Z", "1"), ("A2", "s")), (("B1", "1"), ("B2", "t"), ("C", "alpha"))),
        region=WholeSpace(2),
        loci=(Locus(PuncturedSpace(2, 2), "s", "t", dict(_ZBC_GENERIC_LABELS)),),
        seeds=(Seed(c, 0, "C"),) + tuple(Seed(p, 0) for p in _generic_plane_seeds(fld)),
        c_points=(c,), c_dim=2, params={"c": [x.to_json() for x in c]},
        notes=(how, "C = {c}, alpha = translation by -c, Z = alpha(C) = {0}"))
    return lift_certificate(base, n) if n > 2 else base


def _generic_plane_seeds(fld):
    if isinstance(fld, Trivial):
        if fld.char == 0:
            return [(fld(1) / 3, fld(1) / 5), (fld(1) / 7, fld(2) / 11)]
        s = fld.gen()
        return [(fld(1) / (s + 1), s), (s * s, fld(1) / s)]
    pi = _pi(fld)
    # norms differ from |c| = 1, so these orbits avoid the orbit of c
    return [(fld(1) / pi, fld(1)), (pi, pi * pi)]


def _preimage(region: Region, m: int) -> Region:
    if isinstance(region, WholeSpace):
        return WholeSpace(m)
    if isinstance(region, PuncturedSpace):
        return PuncturedSpace(m, region.k)
    return ProductLocus((region, WholeSpace(m - region.n)))


def lift_certificate(cert: Certificate, m: int) -> Certificate:
    """Push the generators through the corner embedding K^n -> K^m; pieces
    become preimages under the projection onto the first n coordinates."""
    if m < cert.n:
        raise ValueError("cannot lift to a smaller dimension")
    if m == cert.n:
        return cert
    fld = cert.field
    pad = tuple(_pi(fld) if not isinstance(fld, Trivial) else fld(1) for _ in range(m - cert.n))
    gens = {k: embed(g, m, "corner") for k, g in cert.generators.items()}
    loci = tuple(replace(l, region=_preimage(l.region, m)) for l in cert.loci)
    seeds = tuple(replace(s, point=tuple(s.point) + pad) for s in cert.seeds)
    params = dict(cert.params)
    params.setdefault("base_n", cert.n)
    return Certificate(
        target=cert.target, field=fld, n=m, group=replace(cert.group, n=m), generators=gens,
        scheme=cert.scheme, pieces=cert.pieces, equations=cert.equations,
        region=_preimage(cert.region, m), loci=loci, seeds=seeds, c_points=cert.c_points,
        c_dim=cert.c_dim, params=params,
        notes=cert.notes + (f"lifted from K^{cert.n} through the corner embedding",))


def covering_bundle(fld, n: int, i: int, j: int) -> dict:
    """Translates covering B[0,|pi|^i] by balls of radius |pi|^j together with
    the paradoxicality certificate of B[0,|pi|^i]."""
    translates = cover_ball(i, j, n, fld)
    report = verify_cover(translates, i, j, n, fld)
    cert = build_certificate("with-0", fld, n, radius_exp=i, kind="ball")
    return {"translates": translates, "cover": report, "certificate": cert,
            "note": "the final absorption (equidecomposability of bounded sets with "
                    "nonempty interior) is a cited result and is not re-proved here"}


# --------------------------------------------------------------------------
# verification


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | boundary-unchecked | error
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {"name": self.name, "status": self.status,
                "counts": dict(sorted(self.counts.items())), "witnesses": list(self.witnesses)}


@dataclass
class VerificationReport:
    target: str
    scheme: str
    pieces: int
    depth: int
    records: list

    @property
    def ok(self) -> bool:
        return all(r.status in ("pass", "boundary-unchecked") for r in self.records)

    def record(self, name: str) -> CheckRecord:
        return next(r for r in self.records if r.name == name)

    def failures(self) -> list:
        return [r for r in self.records if r.status in ("fail", "error")]

    def to_json(self):
        return {"target": self.target, "scheme": self.scheme, "pieces": self.pieces,
                "depth": self.depth, "ok": self.ok,
                "records": [r.to_json() for r in sorted(self.records, key=lambda r: r.name)]}


class StructuralError(ValueError):
    pass


def _status(bad: int) -> str:
    return "pass" if bad == 0 else "fail"


def _letter_maps(cert: Certificate, locus: Locus) -> dict:
    s, t = cert.generators[locus.sigma], cert.generators[locus.tau]
    return {"a": s, "A": s.inverse(), "b": t, "B": t.inverse()}


def _orbit(maps: dict, x, depth: int):
    """(word, point) for every reduced word of length <= depth, built by
    prepending letters: rho(l w) x = rho(l)(rho(w) x)."""
    out = [(EMPTY, tuple(x))]
    level = [("", tuple(x))]
    for _ in range(depth):
        nxt = []
        for w, p in level:
            bad = _INV_LETTER[w[0]] if w else None
            for l in "aAbB":
                if l != bad:
                    nxt.append((l + w, maps[l](p)))
        out.extend((_word(w), p) for w, p in nxt)
        level = nxt
    return out


def _word_maps(maps: dict, depth: int, n: int, fld):
    """Affine maps rho(w) for nonidentity w of length <= depth."""
    level = [("", AffineMap.identity(n, fld))]
    for _ in range(depth):
        nxt = []
        for w, g in level:
            bad = _INV_LETTER[w[0]] if w else None
            for l in "aAbB":
                if l != bad:
                    h = maps[l] @ g
                    nxt.append((l + w, h))
                    yield l + w, h
        level = nxt


def check_structure(cert: Certificate) -> list[str]:
    """Problems with the certificate's declared shape (empty when sound)."""
    problems = []
    base_n = int(cert.params.get("base_n", cert.n))
    try:
        want = expected_pieces(cert.target, base_n)
    except ValueError as exc:
        return [str(exc)]
    if len(cert.pieces) != want:
        problems.append(f"declared {len(cert.pieces)} pieces but target {cert.target} "
                        f"in dimension {base_n} needs {want}")
    if len(set(cert.pieces)) != len(cert.pieces):
        problems.append("duplicate piece labels")
    used = [p for eq in cert.equations for p, _ in eq]
    if sorted(used) != sorted(cert.pieces):
        problems.append("the equations do not use every piece exactly once")
    for eq in cert.equations:
        for _, g in eq:
            if g != "1" and g not in cert.generators:
                problems.append(f"equation cites unknown group element {g!r}")
    for l in cert.loci:
        for g in (l.sigma, l.tau):
            if g not in cert.generators:
                problems.append(f"locus cites unknown generator {g!r}")
        if not set(l.labels.values()) <= set(cert.pieces):
            problems.append("locus labels outside the piece list")
    schemes = {"four-piece": 1, "six-piece": 2, "zbC": 1}
    if cert.scheme not in schemes:
        problems.append(f"unknown scheme {cert.scheme!r}")
    elif len(cert.loci) != schemes[cert.scheme]:
        problems.append(f"scheme {cert.scheme} needs {schemes[cert.scheme]} loci")
    if cert.scheme == "zbC" and ("alpha" not in cert.generators or not cert.c_points):
        problems.append("zbC scheme needs alpha and at least one C point")
    return problems


def verify_certificate(cert: Certificate, seeds: Sequence | None = None, N: int = 5,
                       strict: bool = False) -> VerificationReport:
    """Check the certificate on all orbit points reachable by words of length <= N.

    With ``strict`` a structural mismatch raises :class:`StructuralError`
    instead of being reported.
    """
    if N < 0:
        raise ValueError("depth must be non-negative")
    records: list[CheckRecord] = []
    report = VerificationReport(cert.target, cert.scheme, len(cert.pieces), N, records)
    problems = check_structure(cert)
    if problems:
        if strict:
            raise StructuralError("; ".join(problems))
        records.append(CheckRecord("structure", "error", {"problems": len(problems)}, problems))
        return report
    records.append(CheckRecord("structure", "pass", {"pieces": len(cert.pieces)}))
    fld, n = cert.field, cert.n
    if seeds is None:
        seeds = cert.seeds
    seeds = tuple(s if isinstance(s, Seed) else Seed(tuple(fld(x) for x in s)) for s in seeds)
    for s in seeds:
        if len(s.point) != n:
            raise ValueError("seed has the wrong dimension")

    # group membership of every generator
    bad = []
    for name in sorted(cert.generators):
        g = cert.generators[name]
        spec = cert.group
        if name == "alpha" and spec.kind != "SA_L":
            spec = GroupSpec("SA_L", n)
        rep = group_membership(g, spec)
        if not rep.ok:
            bad.append(f"{name}: " + "; ".join(rep.diagnostics))
    records.append(CheckRecord("group-membership", _status(len(bad)),
                               {"generators": len(cert.generators), "failed": len(bad)}, bad))

    # seeds in the target and in their locus
    c_set = {tuple(c) for c in cert.c_points}
    cd = cert.c_dim

    def proj(p):
        return tuple(p[:cd])

    bad = [f"seed {i}" for i, s in enumerate(seeds)
           if not cert.region.contains(s.point) or s.locus >= len(cert.loci)
           or not cert.loci[s.locus].region.contains(s.point)
           or (s.kind == "C" and proj(s.point) not in c_set)]
    records.append(CheckRecord("seeds", _status(len(bad)), {"seeds": len(seeds)}, bad))
    if bad:
        return report

    # displacement / invariance of the target region
    inv_fail: list[str] = []
    if isinstance(cert.region, _Centered):
        gens = [cert.generators[k] for k in sorted(cert.generators)]
        disp = displacement_audit(gens, cert.region.center, cert.region.radius,
                                  [s.point for s in seeds])
        inv_fail += disp.failures

    # orbits
    lmaps = [_letter_maps(cert, l) for l in cert.loci]
    points: list[dict] = [dict() for _ in cert.loci]  # point -> (seed index, word, label)
    orbit_sizes = []
    dup, overlap, c_viol, outside = [], [], [], []
    interior: list[tuple[int, Word, tuple]] = []
    boundary = 0
    for si, s in enumerate(seeds):
        locus = cert.loci[s.locus]
        table = points[s.locus]
        mine: dict = {}
        orbit = _orbit(lmaps[s.locus], s.point, N)
        orbit_sizes.append(len(orbit))
        for w, p in orbit:
            if p in mine:
                dup.append(f"seed {si}: {w} and {mine[p]} give the same point")
                continue
            mine[p] = w
            if p in table:
                overlap.append(f"seed {si} word {w} meets seed {table[p][0]} word {table[p][1]}")
                continue
            if cert.scheme == "zbC":
                hits_c = proj(p) in c_set
                if s.kind == "C" and w.letters and hits_c:
                    c_viol.append(f"seed {si}: {w} maps c back into C")
                if s.kind != "C" and (hits_c or all(x.is_zero() for x in proj(p))):
                    c_viol.append(f"seed {si}: generic orbit meets C or alpha(C) at {w}")
            if not cert.region.contains(p) or not locus.region.contains(p):
                outside.append(f"seed {si}: {w} leaves the region or its locus")
            if s.kind == "C":
                label = _ZBC_C_LABELS[assign_piece("zbC", w)]
            else:
                label = locus.labels[assign_piece("four-piece", w)]
            table[p] = (si, w, label)
            if len(w) <= N - 1:
                interior.append((s.locus, w, p))
            else:
                boundary += 1
    records.append(CheckRecord("freeness", _status(len(dup)),
                               {"points": sum(orbit_sizes), "duplicates": len(dup)}, dup[:10]))
    records.append(CheckRecord("orbit-separation", _status(len(overlap)),
                               {"overlaps": len(overlap)}, overlap[:10]))
    inv_fail += outside
    records.append(CheckRecord("region-invariance", _status(len(inv_fail)),
                               {"failures": len(inv_fail)}, inv_fail[:10]))
    if cert.scheme == "zbC":
        records.append(CheckRecord("C-condition", _status(len(c_viol)),
                                   {"violations": len(c_viol)}, c_viol[:10]))

    # fixed-point cross-check of freeness
    fp_hits = []
    for li, l in enumerate(cert.loci):
        mine = [s for s in seeds if s.locus == li]
        if not mine:
            continue
        for w, g in _word_maps(lmaps[li], N, n, fld):
            fps = fixed_points(g)
            for s in mine:
                if fps.contains(s.point):
                    fp_hits.append(f"{w} fixes {[str(x) for x in s.point]}")
    consistent = not fp_hits or dup
    records.append(CheckRecord("fixed-points", "pass" if not fp_hits else "fail",
                               {"fixed": len(fp_hits), "consistent": int(bool(consistent))},
                               fp_hits[:10]))

    # partition: every sampled point carries exactly one known label
    labels_ok = all(entry[2] in cert.pieces for t in points for entry in t.values())
    records.append(CheckRecord("partition", "pass" if labels_ok and not overlap and not dup
                               else "fail", {"points": sum(len(t) for t in points)}))

    # identity equations
    checks = list(interior)
    if cert.scheme == "zbC":
        alpha = cert.generators["alpha"]
        for s in seeds:
            if s.kind == "C":
                checks.append((None, EMPTY, alpha(s.point)))
    inverses = {name: cert.element(name).inverse() for eq in cert.equations for _, name in eq}

    def member(piece: str, z) -> bool | None:
        if cert.scheme == "zbC":
            pz = proj(z)
            if all(x.is_zero() for x in pz):
                return piece == "A1+Z"
            if pz in c_set:
                return piece == "C"
            if piece == "C":
                return False
        for li, l in enumerate(cert.loci):
            if piece not in l.pieces or not l.region.contains(z):
                continue
            hit = points[li].get(z)
            if hit is None:
                return None
            return hit[2] == piece
        return False

    for k, eq in enumerate(cert.equations, start=1):
        failed = []
        for li, w, y in checks:
            found = 0
            unresolved = False
            for piece, g in eq:
                m = member(piece, inverses[g](y))
                if m is None:
                    unresolved = True
                elif m:
                    found += 1
            if unresolved or found != 1:
                why = "unresolved lookup" if unresolved else f"covered {found} times"
                failed.append(f"word {w}: {why}")
        records.append(CheckRecord(
            f"equation-{k}", _status(len(failed)),
            {"checked": len(checks), "failed": len(failed), "boundary_unchecked": boundary},
            failed[:10]))
    return report


def verify_four_piece(gens: tuple, seeds: Sequence, N: int, region: Region) -> VerificationReport:
    """Four-piece scheme for the pair ``gens = (sigma, tau)`` on ``region``."""
    sigma, tau = (g if isinstance(g, AffineMap) else AffineMap(g) for g in gens)
    fld, n = sigma.field, sigma.n
    cert = Certificate(
        target="ball-no-0", field=fld, n=n, group=GroupSpec("SA_DK", n),
        generators={"s": sigma, "t": tau}, scheme="four-piece", pieces=FOUR_PIECE,
        equations=_FOUR_EQUATIONS, region=region, loci=(_four_piece_locus(region),),
        seeds=tuple(Seed(tuple(p)) for p in seeds))
    return verify_certificate(cert, N=N)


__all__ = [
    "CheckRecord", "Certificate", "FOUR_PIECE", "Locus", "Seed", "StructuralError", "TARGETS",
    "VerificationReport", "assign_piece", "build_certificate", "canonical_target",
    "check_structure", "combine_counts", "covering_bundle", "expected_pieces", "free_pair",
    "lift_certificate", "verify_certificate", "verify_four_piece",
]
