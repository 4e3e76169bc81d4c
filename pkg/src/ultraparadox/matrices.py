"""Exact matrices and affine maps over a valued field, and the free groups
built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .valued_fields import (
    FieldElement,
    FieldError,
    Magnitude,
    RationalFunctions,
    RationalsPadic,
    Trivial,
    magnitude_place,
    magnitude,
    mag_compare,
    make_field,
    ratfunc,
)
from .words import Word

Vector = tuple  # tuple of FieldElements


class SingularMatrixError(ArithmeticError):
    pass


class Mat:
    """Square matrix with entries in one field."""

    __slots__ = ("field", "rows", "n", "_hash")

    def __init__(self, field, rows: Sequence[Sequence]):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in row) for row in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")
        self._hash = None

    @classmethod
    def _raw(cls, field, rows) -> "Mat":
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        m.n = len(rows)
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int, field) -> "Mat":
        one, zero = field(1), field(0)
        return cls._raw(field, tuple(tuple(one if i == j else zero for j in range(n))
                                     for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            if other.field != self.field:
                raise FieldError("field mismatch")
            cols = list(zip(*other.rows))
            return Mat._raw(self.field, tuple(
                tuple(_dot(row, col) for col in cols) for row in self.rows))
        if isinstance(other, tuple):
            if len(other) != self.n:
                raise ValueError("dimension mismatch")
            return tuple(_dot(row, other) for row in self.rows)
        return NotImplemented

    def __call__(self, v: Vector) -> Vector:
        return self @ v

    def __add__(self, other: "Mat") -> "Mat":
        return Mat._raw(self.field, tuple(tuple(a + b for a, b in zip(r, s))
                                          for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat._raw(self.field, tuple(tuple(a - b for a, b in zip(r, s))
                                          for r, s in zip(self.rows, other.rows)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def trace(self) -> FieldElement:
        acc = self.rows[0][0]
        for i in range(1, self.n):
            acc = acc + self.rows[i][i]
        return acc

    def det(self) -> FieldElement:
        return _det([list(r) for r in self.rows], self.field)

    def minor(self, i: int, j: int) -> list[list]:
        return [list(r[:j] + r[j + 1:]) for k, r in enumerate(self.rows) if k != i]

    def inverse(self) -> "Mat":
        """Adjugate divided by the determinant."""
        d = self.det()
        if d.is_zero():
            raise SingularMatrixError("matrix is singular")
        n = self.n
        if n == 1:
            return Mat._raw(self.field, ((self.field(1) / d,),))
        if n == 2:
            (a, b), (c, e) = self.rows
            return Mat._raw(self.field, ((e / d, -b / d), (-c / d, a / d)))
        cof = [[_det(self.minor(i, j), self.field) * (1 if (i + j) % 2 == 0 else -1)
                for j in range(n)] for i in range(n)]
        return Mat._raw(self.field, tuple(tuple(cof[j][i] / d for j in range(n))
                                          for i in range(n)))

    def sub_identity(self) -> "Mat":
        """M - I."""
        return self - Mat.identity(self.n, self.field)

    def entries(self):
        for r in self.rows:
            yield from r

    def is_integral(self) -> bool:
        """All entries in the image of Z (Q entries with denominator 1)."""
        return all(_is_integer(x) for x in self.entries())

    def to_json(self):
        return [[_elt_json(x) for x in r] for r in self.rows]

    def __repr__(self):
        return "Mat(" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + ")"


def _elt_json(x):
    return x.to_json()


def _dot(row, col):
    acc = row[0] * col[0]
    for a, b in zip(row[1:], col[1:]):
        acc = acc + a * b
    return acc


def _det(rows: list[list], field) -> FieldElement:
    # Gaussian elimination over the field
    n = len(rows)
    if n == 0:
        return field(1)
    a = [list(r) for r in rows]
    det = field(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if pivot is None:
            return field(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det = det * a[c][c]
        inv = a[c][c].inverse()
        for r in range(c + 1, n):
            if a[r][c].is_zero():
                continue
            f = a[r][c] * inv
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _is_integer(x: FieldElement) -> bool:
    if hasattr(x, "value"):
        return x.value.denominator == 1
    # function fields: image of Z is the prime field, i.e. constants
    return x.is_constant()


def vec(field, *xs) -> Vector:
    return tuple(field(x) for x in xs)


def zero_vector(field, n: int) -> Vector:
    z = field(0)
    return (z,) * n


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def mat_arith(op: str, *args):
    """Dispatch for mul, inv, det, trace and sub_identity."""
    if op == "mul":
        a, b = args
        return a @ b
    (m,) = args
    if op == "inv":
        return m.inverse()
    if op == "det":
        return m.det()
    if op == "trace":
        return m.trace()
    if op == "sub_identity":
        return m.sub_identity()
    raise ValueError(f"unknown matrix operation {op!r}")


# --------------------------------------------------------------------------
# affine maps


class AffineMap:
    """x -> L x + tau."""

    __slots__ = ("linear", "translation")

    def __init__(self, linear: Mat, translation: Vector | None = None):
        self.linear = linear
        if translation is None:
            translation = zero_vector(linear.field, linear.n)
        if len(translation) != linear.n:
            raise ValueError("translation has the wrong dimension")
        self.translation = tuple(linear.field(x) for x in translation)

    @property
    def n(self) -> int:
        return self.linear.n

    @property
    def field(self):
        return self.linear.field

    @classmethod
    def identity(cls, n: int, field) -> "AffineMap":
        return cls(Mat.identity(n, field))

    @classmethod
    def translation_by(cls, v: Vector) -> "AffineMap":
        f = v[0].field
        return cls(Mat.identity(len(v), f), v)

    def __call__(self, v: Vector) -> Vector:
        return vadd(self.linear @ v, self.translation)

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        # (self o other)(x) = L1 (L2 x + t2) + t1
        return AffineMap(self.linear @ other.linear, self(other.translation))

    def inverse(self) -> "AffineMap":
        inv = self.linear.inverse()
        return AffineMap(inv, tuple(-x for x in inv @ self.translation))

    def is_linear(self) -> bool:
        return all(x.is_zero() for x in self.translation)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AffineMap) and self.linear == other.linear
                and self.translation == other.translation)

    def __hash__(self):
        return hash((self.linear, self.translation))

    def to_json(self):
        return {"linear": self.linear.to_json(),
                "translation": [_elt_json(x) for x in self.translation]}

    def __repr__(self):
        return f"AffineMap({self.linear!r}, ({', '.join(map(str, self.translation))}))"


def as_affine(g) -> AffineMap:
    return g if isinstance(g, AffineMap) else AffineMap(g)


# --------------------------------------------------------------------------
# words -> group elements


def word_image(w: Word, a, b, identity=None):
    """Product of generator images along ``w`` (``a``, ``b`` support @ and inverse())."""
    imgs = {"a": a, "b": b}
    if "A" in w.letters:
        imgs["A"] = a.inverse()
    if "B" in w.letters:
        imgs["B"] = b.inverse()
    if not w.letters:
        if identity is not None:
            return identity
        return (Mat.identity(a.n, a.field) if isinstance(a, Mat)
                else AffineMap.identity(a.n, a.field))
    out = imgs[w.letters[0]]
    for c in w.letters[1:]:
        out = out @ imgs[c]
    return out


def rho(w: Word, A: Mat, B: Mat) -> Mat:
    """The representation a -> A, b -> B evaluated at ``w``."""
    if A.n != B.n or A.field != B.field:
        raise ValueError("generators must share size and field")
    return word_image(w, A, B)


# --------------------------------------------------------------------------
# generators


def magnus(i: int, field=None) -> Mat:
    """A_0 = [[1,1],[1,2]], A_n = [[4n^2+1, 2n],[2n, 1]]."""
    if i < 0:
        raise ValueError("Magnus index must be non-negative")
    if field is None:
        field = RationalsPadic(2)
    if i == 0:
        return Mat(field, [[1, 1], [1, 2]])
    return Mat(field, [[4 * i * i + 1, 2 * i], [2 * i, 1]])


def magnus_eps_pair(eps: Magnitude, p: int, field=None) -> tuple[Mat, Mat, tuple[int, int]]:
    """Least m with A_{p^m} in SL(2, Z, eps), paired with A_{p^(m+1)}."""
    if field is None:
        field = RationalsPadic(p)
    spec = GroupSpec("SL_eps", 2, ring="Z", eps=eps)
    m = 1
    while not group_membership(magnus(p ** m, field), spec).ok:
        m += 1
        if m > 10_000:
            raise RuntimeError("no admissible Magnus index found")
    A = magnus(p ** m, field)
    B = magnus(p ** (m + 1), field)
    if not group_membership(B, spec).ok:
        raise AssertionError("A_{p^(m+1)} should lie in the same congruence level")
    return A, B, (m, m + 1)


def transcendental_pair(field, eps: Magnitude | None = None):
    """The pair A, B built from q(t^2) with t a power of the uniformizer.

    ``t`` is the least uniformizer power with |t| < eps; for a trivially
    valued F_p(s) the generator s itself is used.
    Returns (A, B, t).
    """
    if not field.is_function_field:
        raise FieldError(f"{field.name} is not a rational function field")
    if isinstance(field, Trivial):
        t = field.gen()
    else:
        ring = make_field(field)
        target = eps if eps is not None else Magnitude(field.base, 0)
        if target.is_zero or target.exponent < 0:
            raise ValueError("eps must lie in (0, 1]")
        e = target.exponent + 1
        t = ring.uniformizer ** e
    qpoly = ratfunc(field, magnitude_place(field.char))
    qt = qpoly.compose(t * t)
    qinv = qt.inverse()
    zero = field(0)
    A = Mat(field, [[qt, t], [zero, qinv]])
    B = Mat(field, [[qt, zero], [qinv * qinv * t, qinv]])
    return A, B, t


# --------------------------------------------------------------------------
# group membership


@dataclass(frozen=True)
class GroupSpec:
    """kind is one of GL, SL, SL_eps, SA_eps, SA_DK, SA_L.

    ``ring`` is ``Z`` (image of the integers) or ``D`` (valuation ring) for
    SL_eps; SA_L uses Z in characteristic 0 and D otherwise.
    """

    kind: str
    n: int
    ring: str = "D"
    eps: Magnitude | None = None

    def __post_init__(self):
        if self.kind not in ("GL", "SL", "SL_eps", "SA_eps", "SA_DK", "SA_L"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind in ("SL_eps", "SA_eps"):
            if self.eps is None or self.eps.is_zero or self.eps.exponent < 0:
                raise ValueError("eps must be a magnitude in (0, 1]")

    def __str__(self):
        eps = f", {self.eps}" if self.eps is not None else ""
        names = {"GL": f"GL({self.n},D)", "SL": f"SL({self.n},D)",
                 "SL_eps": f"SL({self.n},{self.ring}{eps})",
                 "SA_eps": f"SA({self.n},D{eps})", "SA_DK": f"SA({self.n},D,K)",
                 "SA_L": f"SA({self.n},L)"}
        return names[self.kind]

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "ring": self.ring,
                "eps": None if self.eps is None else self.eps.to_json()}

    @classmethod
    def from_json(cls, data) -> "GroupSpec":
        eps = data.get("eps")
        return cls(data["kind"], int(data["n"]), data.get("ring", "D"),
                   None if eps is None else Magnitude(int(eps[0]), int(eps[1])))


@dataclass
class MembershipReport:
    ok: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _in_D(x: FieldElement) -> bool:
    m = magnitude(x)
    return m.is_zero or m.exponent >= 0


def _in_ring(x: FieldElement, ring: str) -> bool:
    return _is_integer(x) if ring == "Z" else _in_D(x)


def group_membership(M, spec: GroupSpec) -> MembershipReport:
    """Check M (a Mat or AffineMap) against ``spec`` entry by entry."""
    diag: list[str] = []
    if isinstance(M, AffineMap):
        L, tau = M.linear, M.translation
    else:
        L, tau = M, None
    if L.n != spec.n:
        return MembershipReport(False, [f"dimension {L.n} != {spec.n}"])
    fld = L.field
    ring = spec.ring
    if spec.kind == "SA_L":
        ring = "Z" if fld.char == 0 else "D"
    elif spec.kind in ("SA_eps", "SA_DK", "SL", "GL"):
        ring = "D"
    det = L.det()
    if spec.kind == "GL":
        if det.is_zero() or magnitude(det) != Magnitude(fld.base, 0):
            diag.append(f"|det| = {magnitude(det)} is not 1")
    elif det != fld(1):
        diag.append(f"det = {det} != 1")
    one = fld(1)
    for i, row in enumerate(L.rows):
        for j, x in enumerate(row):
            if not _in_ring(x, ring):
                diag.append(f"entry ({i},{j}) = {x} not in {ring}")
            if spec.kind in ("SL_eps", "SA_eps"):
                d = x - one if i == j else x
                if mag_compare(magnitude(d), spec.eps) >= 0:
                    label = f"a{i}{j}-1" if i == j else f"a{i}{j}"
                    diag.append(f"|{label}| = {magnitude(d)} not < {spec.eps}")
    if spec.kind in ("SL", "SL_eps", "GL"):
        if tau is not None and not all(x.is_zero() for x in tau):
            diag.append("nonzero translation in a linear group")
    elif spec.kind in ("SA_eps", "SA_L") and tau is not None:
        for i, x in enumerate(tau):
            if not _in_ring(x, ring):
                diag.append(f"translation[{i}] = {x} not in {ring}")
    return MembershipReport(not diag, diag)


# --------------------------------------------------------------------------
# isometries


def vnorm(v: Vector) -> Magnitude:
    from .geometry import norm
    return norm(v)


@dataclass
class IsometryReport:
    conditions: tuple[bool, bool, bool, bool, bool]
    counterexample: Vector | None = None

    @property
    def consistent(self) -> bool:
        """(2)-(5) agree and sampled (1) does not contradict them."""
        c1, *rest = self.conditions
        if len(set(rest)) != 1:
            return False
        return c1 or not rest[0]


def isometry_audit(M: Mat, samples: Sequence[Vector]) -> IsometryReport:
    fld = M.field
    unit = Magnitude(fld.base, 0)
    counter = None
    c1 = True
    for v in samples:
        if vnorm(M @ v) != vnorm(v):
            c1 = False
            counter = v
            break
    det = M.det()
    det_unit = not det.is_zero() and magnitude(det) == unit
    cols = list(zip(*M.rows))
    col_max_one = all(vnorm(tuple(c)) == unit for c in cols)
    c2 = det_unit and col_max_one
    entries_in_D = all(_in_D(x) for x in M.entries())
    c3 = det_unit and entries_in_D
    if det.is_zero():
        c4 = False
    else:
        inv = M.inverse()
        c4 = entries_in_D and all(_in_D(x) for x in inv.entries())
    c5 = group_membership(M, GroupSpec("GL", M.n)).ok
    return IsometryReport((c1, c2, c3, c4, c5), counter)


# --------------------------------------------------------------------------
# affine conjugates and embeddings


def affinize(basis: Sequence[Mat], anchor: Vector) -> list[AffineMap]:
    """T_i(x) = A_i x + (I - A_i) anchor; every T_i fixes the anchor."""
    out = []
    for A in basis:
        if A.sub_identity().det().is_zero():
            raise ValueError(f"{A!r} fixes a nonzero vector (det(A - I) = 0)")
        u = vsub(anchor, A @ anchor)
        out.append(AffineMap(A, u))
    return out


def _block(field, n: int, blocks: list[tuple[int, Mat]]):
    rows = [[field(1) if i == j else field(0) for j in range(n)] for i in range(n)]
    for start, B in blocks:
        for i in range(B.n):
            for j in range(B.n):
                rows[start + i][start + j] = B.rows[i][j]
    return rows


def embed(F, n: int, mode: str = "corner", gamma: Sequence[int] | None = None) -> AffineMap:
    """Push F into dimension ``n``.

    modes: ``corner`` (F on the first coordinates, identity on the rest),
    ``diagonal`` (a copy of F on each coordinate pair, n even),
    ``shifted1`` (copies on pairs, last coordinate fixed, n odd),
    ``shifted2`` (first coordinate fixed, copies on the remaining pairs),
    ``permutation`` (P F P^-1 with P e_j = e_gamma(j); ``gamma`` is 0-based).
    """
    F = as_affine(F)
    fld, k = F.field, F.n
    tau = F.translation
    if mode == "corner":
        if n < k:
            raise ValueError("corner embedding needs target >= source dimension")
        rows = _block(fld, n, [(0, F.linear)])
        return AffineMap(Mat(fld, rows), tau + (fld(0),) * (n - k))
    if mode in ("diagonal", "shifted1", "shifted2"):
        if k != 2:
            raise ValueError(f"{mode} embedding needs a map of K^2")
        if mode == "diagonal" and n % 2:
            raise ValueError("diagonal embedding needs an even target dimension")
        if mode != "diagonal" and n % 2 == 0:
            raise ValueError(f"{mode} embedding needs an odd target dimension")
        start = 1 if mode == "shifted2" else 0
        starts = list(range(start, start + 2 * (n // 2), 2))
        rows = _block(fld, n, [(s, F.linear) for s in starts])
        t = [fld(0)] * n
        for s in starts:
            t[s], t[s + 1] = tau
        return AffineMap(Mat(fld, rows), tuple(t))
    if mode == "permutation":
        if gamma is None or sorted(gamma) != list(range(k)):
            raise ValueError("permutation mode needs gamma, a permutation of range(n)")
        if n != k:
            raise ValueError("permutation conjugation keeps the dimension")
        ginv = [0] * k
        for j, g in enumerate(gamma):
            ginv[g] = j
        L = F.linear.rows
        rows = [[L[ginv[r]][ginv[c]] for c in range(k)] for r in range(k)]
        return AffineMap(Mat(fld, rows), tuple(tau[ginv[r]] for r in range(k)))
    raise ValueError(f"unknown embedding mode {mode!r}")


def permutation_matrix(field, gamma: Sequence[int]) -> Mat:
    """P with P e_j = e_gamma(j)."""
    n = len(gamma)
    rows = [[field(0)] * n for _ in range(n)]
    for j, g in enumerate(gamma):
        rows[g][j] = field(1)
    return Mat(field, rows)


# --------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class FixedPointSet:
    """kind: ``none_nonzero`` (no fixed point other than possibly 0),
    ``unique`` (exactly ``point``), ``subspace`` (``point`` + span(``basis``))."""

    kind: str
    point: Vector | None = None
    basis: tuple = ()

    def contains(self, v: Vector) -> bool:
        if self.kind == "none_nonzero":
            return self.point is not None and all(x.is_zero() for x in v)
        if self.kind == "unique":
            return tuple(v) == tuple(self.point)
        diff = [vsub(v, self.point)]
        return _rank(list(self.basis) + diff) == len(self.basis)


def _rref(rows: list[list]):
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def _rank(vectors: list) -> int:
    if not vectors:
        return 0
    _, piv = _rref([list(v) for v in vectors])
    return len(piv)


def solve_affine(M: Mat, rhs: Vector):
    """Solutions of M x = rhs as (particular, kernel basis), or None."""
    n = M.n
    fld = M.field
    aug = [list(M.rows[i]) + [rhs[i]] for i in range(n)]
    a, piv = _rref(aug)
    if n in piv:
        return None
    x = [fld(0)] * n
    for row, c in zip(a, piv):
        x[c] = row[n]
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [fld(0)] * n
        v[f] = fld(1)
        for row, c in zip(a, piv):
            v[c] = -row[f]
        basis.append(tuple(v))
    return tuple(x), tuple(basis)


def fixed_points(T) -> FixedPointSet:
    """Solve (L - I) x = -tau exactly and classify the solution set."""
    T = as_affine(T)
    sol = solve_affine(T.linear.sub_identity(), tuple(-x for x in T.translation))
    if sol is None:
        return FixedPointSet("none_nonzero")
    x, basis = sol
    if basis:
        return FixedPointSet("subspace", x, basis)
    if all(c.is_zero() for c in x):
        return FixedPointSet("none_nonzero", x)
    return FixedPointSet("unique", x)


__all__ = [
    "AffineMap", "FixedPointSet", "GroupSpec", "IsometryReport", "Mat", "MembershipReport",
    "SingularMatrixError", "Vector", "affinize", "as_affine", "embed", "fixed_points",
    "group_membership", "isometry_audit", "magnus", "magnus_eps_pair", "mat_arith",
    "permutation_matrix", "rho", "solve_affine", "transcendental_pair", "vadd", "vec",
    "vsub", "word_image", "zero_vector", "Fraction",
]
