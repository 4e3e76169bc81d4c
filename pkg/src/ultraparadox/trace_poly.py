"""Trace polynomials of the free group of rank two.

``phi(W)`` is a polynomial in X, Y, Z over Z (or F_p) such that for any
A, B in SL(2, K) and any w in the class W,

    tr(rho_{A,B}(w)) = phi(W)(tr A, tr B, tr AB).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .valued_fields import (
    FieldElement,
    FieldError,
    Magnitude,
    RatFunc,
    Rational,
    magnitude,
    mag_compare,
)
from .words import (
    APower,
    BPower,
    ConjClass,
    Empty,
    Syllables,
    Word,
    canonical_class,
    from_syllables,
    reduce_concat,
)

Monomial = tuple[int, int, int]


class TriPoly:
    """Polynomial in X, Y, Z with coefficients in Z (char 0) or F_p."""

    __slots__ = ("char", "_terms", "_hash")

    def __init__(self, terms: dict[Monomial, int] | None = None, char: int = 0):
        self.char = char
        clean = {}
        for mono, c in (terms or {}).items():
            if char:
                c %= char
            if c:
                clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: int, char: int = 0) -> "TriPoly":
        return cls({(0, 0, 0): c}, char)

    @classmethod
    def var(cls, index: int, char: int = 0) -> "TriPoly":
        mono = [0, 0, 0]
        mono[index] = 1
        return cls({tuple(mono): 1}, char)

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def monomials(self) -> list[Monomial]:
        """Graded lexicographic order, highest first."""
        return sorted(self._terms, key=lambda m: (sum(m), m), reverse=True)

    def _check(self, other: "TriPoly") -> None:
        if self.char != other.char:
            raise FieldError(f"characteristic mismatch: {self.char} vs {other.char}")

    def _lift(self, other) -> "TriPoly":
        if isinstance(other, int):
            return TriPoly.const(other, self.char)
        self._check(other)
        return other

    def __add__(self, other) -> "TriPoly":
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return TriPoly(out, self.char)

    __radd__ = __add__

    def __neg__(self) -> "TriPoly":
        return TriPoly({m: -c for m, c in self._terms.items()}, self.char)

    def __sub__(self, other) -> "TriPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TriPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "TriPoly":
        other = self._lift(other)
        out: dict[Monomial, int] = {}
        for (i1, j1, k1), c1 in self._terms.items():
            for (i2, j2, k2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2, k1 + k2)
                out[m] = out.get(m, 0) + c1 * c2
        return TriPoly(out, self.char)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TriPoly":
        out = TriPoly.const(1, self.char)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TriPoly.const(other, self.char)
        if not isinstance(other, TriPoly):
            return NotImplemented
        return self.char == other.char and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.char, frozenset(self._terms.items())))
        return self._hash

    def reduce_mod(self, p: int) -> "TriPoly":
        if self.char not in (0, p):
            raise FieldError(f"cannot reduce a characteristic {self.char} polynomial mod {p}")
        return TriPoly(self._terms, p)

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def to_quads(self) -> list[list[int]]:
        return [[i, j, k, self._terms[(i, j, k)]] for (i, j, k) in self.monomials()]

    @classmethod
    def from_quads(cls, quads, char: int = 0) -> "TriPoly":
        return cls({(i, j, k): c for i, j, k, c in quads}, char)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in self.monomials():
            c = self._terms[m]
            if self.char == 0:
                neg, mag = c < 0, abs(c)
            else:
                neg, mag = False, c
            factors = [f"{v}^{e}" if e > 1 else v for v, e in zip("XYZ", m) if e]
            body = "*".join(factors)
            if not body:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"TriPoly({self}, char={self.char})"


# --------------------------------------------------------------------------
# phi

_SPECIAL_WORDS = {
    "": "two", "a": "X", "A": "X", "b": "Y", "B": "Y",
    "ab": "Z", "AB": "Z", "Ab": "XY-Z", "aB": "XY-Z",
    "abAB": "comm", "aBAb": "comm",
    "abAb": "mixed", "aBAB": "mixed",
}


def _special_poly(tag: str, char: int) -> TriPoly:
    X, Y, Z = (TriPoly.var(i, char) for i in range(3))
    if tag == "two":
        return TriPoly.const(2, char)
    if tag == "X":
        return X
    if tag == "Y":
        return Y
    if tag == "Z":
        return Z
    if tag == "XY-Z":
        return X * Y - Z
    if tag == "comm":
        return X * X + Y * Y + Z * Z - X * Y * Z - 2
    if tag == "mixed":
        return -(X * X) - Z * Z + X * Y * Z + 2
    raise KeyError(tag)


# canonical representative -> tag
SPECIAL_CLASSES = {canonical_class(Word.parse(w)).rep.letters: tag
                   for w, tag in _SPECIAL_WORDS.items()}

_memo: dict[tuple[str, int], TriPoly] = {}
_memo_lock = threading.Lock()


def clear_phi_cache() -> None:
    with _memo_lock:
        _memo.clear()


def _sgn(n: int) -> int:
    return 1 if n > 0 else -1


def _a_run(n: int) -> str:
    return ("a" if n > 0 else "A") * abs(n)


def _b_run(m: int) -> str:
    return ("b" if m > 0 else "B") * abs(m)


def _cls(letters: str) -> ConjClass:
    return canonical_class(Word.parse(letters))


def phi(W: ConjClass | Word, char: int = 0) -> TriPoly:
    """The trace polynomial of a conjugacy class, over Z or F_char."""
    if isinstance(W, Word):
        W = canonical_class(W)
    key = (W.rep.letters, char)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    result = _phi_uncached(W, char)
    with _memo_lock:
        _memo.setdefault(key, result)
    return result


def _phi_uncached(W: ConjClass, char: int) -> TriPoly:
    tag = SPECIAL_CLASSES.get(W.rep.letters)
    if tag is not None:
        return _special_poly(tag, char)
    X = TriPoly.var(0, char)
    Y = TriPoly.var(1, char)
    form = W.form
    if isinstance(form, APower):
        pairs: list[tuple[int, int]] = []
        n1, m1 = form.n, 0
    elif isinstance(form, BPower):
        pairs = []
        n1, m1 = 0, form.m
    elif isinstance(form, Syllables):
        pairs = list(form.pairs)
        n1, m1 = pairs[0]
    else:  # Empty is special
        raise AssertionError("identity class must be special")

    if abs(n1) >= 2:
        # w = a^n1 u
        u = from_syllables(form).letters[abs(n1):]
        s = _sgn(n1)
        w1 = _cls(_a_run(n1 - s) + u)
        w2 = _cls(_a_run(n1 - 2 * s) + u)
        return X * phi(w1, char) - phi(w2, char)

    if abs(m1) >= 2:
        # [w] = [b^m1 u] with u = a^n2 b^m2 ... a^nk b^mk a^n1
        u = "".join(_a_run(n) + _b_run(m) for n, m in pairs[1:]) + (_a_run(n1) if pairs else "")
        s = _sgn(m1)
        w1 = _cls(_b_run(m1 - s) + u)
        w2 = _cls(_b_run(m1 - 2 * s) + u)
        return Y * phi(w1, char) - phi(w2, char)

    # every exponent is +-1: split at the lexicographically least (i, j), n_i = n_j
    k = len(pairs)
    split = next(((i, j) for i in range(k) for j in range(i + 1, k)
                  if pairs[i][0] == pairs[j][0]), None)
    if split is None:
        raise AssertionError(f"no split pair in non-special class {W}")
    i, j = split
    syl = [_a_run(n) + _b_run(m) for n, m in pairs]
    u = Word.parse("".join(syl[i:j]))
    v = Word.parse("".join(syl[j:] + syl[:i]))
    return (phi(canonical_class(u), char) * phi(canonical_class(v), char)
            - phi(canonical_class(reduce_concat(u.inverse(), v)), char))


# --------------------------------------------------------------------------
# evaluation


class Evaluator:
    """Evaluate many trace polynomials at one point (x, y, z).

    Works over a common denominator so that only one normalisation is done
    per polynomial; products of powers are cached across calls.
    """

    def __init__(self, x: FieldElement, y: FieldElement, z: FieldElement):
        if not (x.field == y.field == z.field):
            raise FieldError("evaluation point must lie in one field")
        self.field = x.field
        self.char = x.field.char
        self._rational = isinstance(x, Rational)
        if self._rational:
            parts = [(v.value.numerator, v.value.denominator) for v in (x, y, z)]
            self._one = 1
        else:
            parts = [(v.num, v.den) for v in (x, y, z)]
            self._one = x.num.__class__([1], *(() if self.char == 0 else (self.char,)))
        self._parts = parts
        self._pow_cache: list[dict[tuple[int, int], object]] = [{}, {}, {}]
        self._xy_cache: dict[tuple[int, int, int, int], object] = {}

    def _factor(self, var: int, e: int, top: int):
        # num^e * den^(top - e)
        cache = self._pow_cache[var]
        key = (e, top)
        hit = cache.get(key)
        if hit is None:
            num, den = self._parts[var]
            hit = num ** e * den ** (top - e) if (e or top) else self._one
            cache[key] = hit
        return hit

    def __call__(self, P: TriPoly) -> FieldElement:
        if P.char != 0 and P.char != self.char:
            raise FieldError(f"polynomial of characteristic {P.char} evaluated in "
                             f"characteristic {self.char}")
        terms = P._terms
        if not terms:
            return self.field(0)
        I = max(m[0] for m in terms)
        J = max(m[1] for m in terms)
        K = max(m[2] for m in terms)
        total = None
        for (i, j, k), c in terms.items():
            xy_key = (i, I, j, J)
            xy = self._xy_cache.get(xy_key)
            if xy is None:
                xy = self._factor(0, i, I) * self._factor(1, j, J)
                self._xy_cache[xy_key] = xy
            term = xy * self._factor(2, k, K) * c
            total = term if total is None else total + term
        den = self._factor(0, 0, I) * self._factor(1, 0, J) * self._factor(2, 0, K)
        if self._rational:
            return Rational(self.field, Fraction(total, den))
        return RatFunc(self.field, total, den)


def poly_eval(P: TriPoly, x: FieldElement, y: FieldElement, z: FieldElement) -> FieldElement:
    return Evaluator(x, y, z)(P)


# --------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class FrickeReport:
    word: Word
    lhs: FieldElement
    rhs: FieldElement

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def verify_fricke(w: Word, A, B, evaluator: Evaluator | None = None) -> FrickeReport:
    """Compare tr(rho_{A,B}(w)) with phi([w]) at (tr A, tr B, tr AB)."""
    from .matrices import rho

    one = A.field(1)
    if A.det() != one or B.det() != one:
        raise ValueError("Fricke identity needs det A = det B = 1")
    if evaluator is None:
        evaluator = Evaluator(A.trace(), B.trace(), (A @ B).trace())
    lhs = rho(w, A, B).trace()
    rhs = evaluator(phi(canonical_class(w), A.field.char))
    return FrickeReport(w, lhs, rhs)


@dataclass(frozen=True)
class PsiReport:
    cls: ConjClass
    actual: Magnitude
    predicted: Magnitude

    @property
    def equal(self) -> bool:
        return self.actual == self.predicted


def check_fgh(f: FieldElement, g: FieldElement, h: FieldElement) -> None:
    """Raise ValueError unless |f| > 1, |g| > 1 and |h| = |fg| = |fg - h|."""
    fld = f.field
    if not fld.is_function_field or fld.trivially_valued:
        raise ValueError("need a rational function field with a nontrivial place")
    one = Magnitude(fld.base, 0)
    mf, mg, mh = magnitude(f), magnitude(g), magnitude(h)
    if not (mag_compare(mf, one) > 0 and mag_compare(mg, one) > 0):
        raise ValueError(f"need |f| > 1 and |g| > 1, got {mf}, {mg}")
    fg = f * g
    if not (mh == magnitude(fg) == magnitude(fg - h)):
        raise ValueError("need |h| = |fg| = |fg - h|")


def psi_magnitude(W: ConjClass, f: FieldElement, g: FieldElement, h: FieldElement,
                  evaluator: Evaluator | None = None, *, checked: bool = False) -> PsiReport:
    """Compare |phi(W)(f, g, h)| with |f|^la(W) * |g|^lb(W)."""
    if W.is_identity:
        raise ValueError("the magnitude law excludes the identity class")
    if not checked:
        check_fgh(f, g, h)
    if evaluator is None:
        evaluator = Evaluator(f, g, h)
    actual = magnitude(evaluator(phi(W, f.field.char)))
    predicted = magnitude(f) ** W.la * magnitude(g) ** W.lb
    return PsiReport(W, actual, predicted)


def fgh_functions(field) -> tuple[FieldElement, FieldElement, FieldElement, FieldElement]:
    """(q, f, g, h) with f = g = q + 1/q and h = (q^4 + X + 1) / q^2.

    ``field`` must be K0(s); q is X^2+X+1 over F_2 and 2X+1 otherwise, as an
    element of K0(s) with X read as s.
    """
    from .valued_fields import magnitude_place, ratfunc

    q = ratfunc(field, magnitude_place(field.char))
    s = field.gen()
    f = q + q.inverse()
    h = (q ** 4 + s + 1) / q ** 2
    return q, f, f, h
