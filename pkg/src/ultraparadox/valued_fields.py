"""Exact non-Archimedean valued fields.

Three kinds of field are supported:

* ``RationalsPadic(p)`` -- Q with the p-adic absolute value.
* ``RationalFunctions(char, place, base)`` -- K0(s) over a prime field K0
  (Q or F_p) with the absolute value attached to an irreducible polynomial
  ``place``: ``|place^k * f1/f2| = base**(-k)``.
* ``Trivial(char)`` -- Q (char 0) or F_p(s) (char p) with the trivial absolute
  value.

Absolute values are kept as :class:`Magnitude` objects holding an integer
exponent, so every comparison is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Union

import flint

INFINITE = math.inf


class FieldError(ValueError):
    """Malformed field descriptor or mixing elements of different fields."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


# --------------------------------------------------------------------------
# magnitudes


@total_ordering
@dataclass(frozen=True, eq=True)
class Magnitude:
    """``base**(-exponent)``, or zero when ``exponent`` is None."""

    base: int
    exponent: int | None

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def _check(self, other: "Magnitude") -> None:
        if not isinstance(other, Magnitude):
            raise TypeError(f"cannot compare Magnitude with {type(other).__name__}")
        if not (self.is_zero or other.is_zero) and self.base != other.base:
            raise FieldError(f"magnitude bases differ: {self.base} vs {other.base}")

    def __lt__(self, other: "Magnitude") -> bool:
        return mag_compare(self, other) < 0

    def __mul__(self, other: "Magnitude") -> "Magnitude":
        self._check(other)
        if self.is_zero or other.is_zero:
            return ZERO
        return Magnitude(self.base, self.exponent + other.exponent)

    def __truediv__(self, other: "Magnitude") -> "Magnitude":
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero magnitude")
        if self.is_zero:
            return ZERO
        return Magnitude(self.base, self.exponent - other.exponent)

    def __pow__(self, k: int) -> "Magnitude":
        if self.is_zero:
            if k <= 0:
                raise ZeroDivisionError("non-positive power of the zero magnitude")
            return ZERO
        return Magnitude(self.base, self.exponent * k)

    @property
    def value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.base) ** (-self.exponent)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.base}^{-self.exponent}"

    def to_json(self):
        return None if self.is_zero else [self.base, self.exponent]


ZERO = Magnitude(0, None)


def power(base: int, exponent: int) -> Magnitude:
    """The magnitude ``base**(-exponent)``."""
    return Magnitude(base, exponent)


def mag_compare(m1: Magnitude, m2: Magnitude) -> int:
    """Three-way comparison of real values; -1, 0 or 1."""
    m1._check(m2)
    if m1.is_zero or m2.is_zero:
        return (not m1.is_zero) - (not m2.is_zero)
    # larger exponent means smaller value
    return (m2.exponent > m1.exponent) - (m2.exponent < m1.exponent)


def mag_max(*mags: Magnitude) -> Magnitude:
    best = ZERO
    for m in mags:
        if mag_compare(m, best) > 0:
            best = m
    return best


# --------------------------------------------------------------------------
# prime-field polynomials (backed by flint)


def _poly(char: int, coeffs=()):
    if char == 0:
        return flint.fmpq_poly([_to_fmpq(c) for c in coeffs])
    return flint.nmod_poly([int(c) % char for c in coeffs], char)


def _to_fmpq(c):
    if isinstance(c, int):
        return c
    if isinstance(c, flint.fmpq):
        return c
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _coeff_to_py(c, char: int):
    if char == 0:
        return Fraction(int(c.p), int(c.q))
    return int(c)


def _poly_key(poly, char: int) -> tuple:
    return tuple(_coeff_to_py(c, char) for c in poly.coeffs())


def _scalar_inverse(c, char: int):
    if char == 0:
        return flint.fmpq(1) / c
    return flint.nmod(1, char) / c


def _format_poly(coeffs: tuple, var: str = "s") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        neg = c < 0
        mag = -c if neg else c
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = f"{mag}"
        if not terms:
            terms.append(("-" if neg else "") + body)
        else:
            terms.append(("- " if neg else "+ ") + body)
    return " ".join(terms) if terms else "0"


def _place_multiplicity(poly, place) -> int:
    k = 0
    while True:
        quo, rem = divmod(poly, place)
        if rem != 0:
            return k
        poly = quo
        k += 1


# --------------------------------------------------------------------------
# field descriptors


@dataclass(frozen=True)
class RationalsPadic:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise FieldError(f"p-adic field needs a prime, got {self.p!r}")

    char = 0
    kind = "padic"

    @property
    def base(self) -> int:
        return self.p

    @property
    def is_function_field(self) -> bool:
        return False

    @property
    def trivially_valued(self) -> bool:
        return False

    def __call__(self, value) -> "FieldElement":
        return coerce(self, value)

    @property
    def name(self) -> str:
        return f"q{self.p}"


@dataclass(frozen=True)
class RationalFunctions:
    """K0(s) with the valuation at an irreducible ``place`` in K0[X].

    ``place`` lists coefficients from the constant term upwards.
    """

    char: int
    place: tuple = (0, 1)
    base: int = 2

    def __post_init__(self):
        if self.char != 0 and not is_prime(self.char):
            raise FieldError(f"characteristic must be 0 or a prime, got {self.char!r}")
        if self.base < 2:
            raise FieldError("magnitude base must be at least 2")
        coeffs = tuple(Fraction(c) if self.char == 0 else int(c) % self.char for c in self.place)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if self.char == 0:
            coeffs = tuple(int(c) if c.denominator == 1 else c for c in coeffs)
        object.__setattr__(self, "place", coeffs)
        poly = self.place_poly
        if poly.degree() < 1:
            raise FieldError("place must have positive degree")
        _, factors = poly.factor()
        if len(factors) != 1 or factors[0][1] != 1:
            raise FieldError(f"place {_format_poly(coeffs)} is reducible")

    kind = "ratfunc"

    @property
    def place_poly(self):
        return _poly(self.char, self.place)

    @property
    def is_function_field(self) -> bool:
        return True

    @property
    def trivially_valued(self) -> bool:
        return False

    def __call__(self, value) -> "FieldElement":
        return coerce(self, value)

    def gen(self) -> "RatFunc":
        """The transcendental generator s."""
        return RatFunc(self, _poly(self.char, (0, 1)), _poly(self.char, (1,)))

    @property
    def name(self) -> str:
        return f"ratfunc(char={self.char}, place={_format_poly(self.place, 'X')}, base={self.base})"


@dataclass(frozen=True)
class Trivial:
    """Trivially valued Q (char 0) or F_p(s) (char p)."""

    char: int

    def __post_init__(self):
        if self.char != 0 and not is_prime(self.char):
            raise FieldError(f"characteristic must be 0 or a prime, got {self.char!r}")

    kind = "trivial"
    base = 2

    @property
    def is_function_field(self) -> bool:
        return self.char != 0

    @property
    def trivially_valued(self) -> bool:
        return True

    def __call__(self, value) -> "FieldElement":
        return coerce(self, value)

    def gen(self) -> "RatFunc":
        if self.char == 0:
            raise FieldError("trivially valued Q has no transcendental generator")
        return RatFunc(self, _poly(self.char, (0, 1)), _poly(self.char, (1,)))

    @property
    def name(self) -> str:
        return f"trivial{self.char}"


FieldDescriptor = Union[RationalsPadic, RationalFunctions, Trivial]


# --------------------------------------------------------------------------
# elements


class FieldElement:
    """Base class; concrete elements are :class:`Rational` or :class:`RatFunc`."""

    __slots__ = ("field",)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field.name} vs {other.field.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return coerce(self.field, other)
        return NotImplemented

    def __radd__(self, other):
        return self + other

    def __rmul__(self, other):
        return self * other

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return (self.field(1) / self) ** (-k)
        result = self.field(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "FieldElement":
        return self.field(1) / self


class Rational(FieldElement):
    __slots__ = ("value",)

    def __init__(self, field: FieldDescriptor, value: Fraction):
        self.field = field
        self.value = value

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.field, self.value + o.value)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.field, self.value - o.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Rational(self.field, self.value * o.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.value == 0:
            raise ZeroDivisionError("division by zero field element")
        return Rational(self.field, self.value / o.value)

    def __neg__(self):
        return Rational(self.field, -self.value)

    def __eq__(self, other):
        if isinstance(other, Rational):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(("Q", self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __repr__(self):
        return f"Rational({self.value}, {self.field.name})"

    def __str__(self):
        return str(self.value)

    def to_json(self):
        return str(self.value)


class RatFunc(FieldElement):
    """``num/den`` over the prime field, gcd 1, ``den`` monic."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, field: FieldDescriptor, num, den, *, canonical: bool = False):
        self.field = field
        if not canonical:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if num == 0:
                num = _poly(field.char, ())
                den = _poly(field.char, (1,))
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num // g
                    den = den // g
                lc = den.coeffs()[-1]
                if lc != 1:
                    inv = _scalar_inverse(lc, field.char)
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den
        self._key = None

    def _new(self, num, den):
        return RatFunc(self.field, num, den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return self._new(self.num + o.num, self.den)
        return self._new(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return self._new(self.num - o.num, self.den)
        return self._new(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.num * o.num, self.den * o.den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num == 0:
            raise ZeroDivisionError("division by zero field element")
        return self._new(self.num * o.den, self.den * o.num)

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den, canonical=True)

    def key(self) -> tuple:
        if self._key is None:
            c = self.field.char
            self._key = (_poly_key(self.num, c), _poly_key(self.den, c))
        return self._key

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == coerce(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash(("K(s)",) + self.key())

    def is_zero(self) -> bool:
        return self.num == 0

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def compose(self, inner: "RatFunc") -> "RatFunc":
        """Substitute ``inner`` for s."""
        num = _eval_poly(self.field, self.num, inner)
        den = _eval_poly(self.field, self.den, inner)
        return num / den

    def __repr__(self):
        return f"RatFunc({self}, {self.field.name})"

    def __str__(self):
        n, d = self.key()
        ns = _format_poly(n)
        if d == (1,):
            return ns
        return f"({ns})/({_format_poly(d)})"

    def to_json(self):
        n, d = self.key()
        return {"num": [str(c) for c in n], "den": [str(c) for c in d]}


def _eval_poly(field, poly, x: FieldElement) -> FieldElement:
    acc = field(0)
    for c in reversed(poly.coeffs()):
        acc = acc * x + field(_coeff_to_py(c, field.char))
    return acc


def coerce(field: FieldDescriptor, value) -> FieldElement:
    """Build an element of ``field`` from an int, Fraction, str or element."""
    if isinstance(value, FieldElement):
        if value.field != field:
            raise FieldError(f"field mismatch: {value.field.name} vs {field.name}")
        return value
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, dict):
        return from_json(field, value)
    if not isinstance(value, (int, Fraction)):
        raise TypeError(f"cannot coerce {type(value).__name__} into {field.name}")
    if isinstance(field, RationalsPadic) or (isinstance(field, Trivial) and field.char == 0):
        return Rational(field, Fraction(value))
    value = Fraction(value)
    if field.char == 0:
        return RatFunc(field, flint.fmpq_poly([_to_fmpq(value)]), flint.fmpq_poly([1]),
                       canonical=True)
    p = field.char
    if value.denominator % p == 0:
        raise ZeroDivisionError(f"{value} has no image in characteristic {p}")
    c = value.numerator * pow(value.denominator, -1, p) % p
    return RatFunc(field, flint.nmod_poly([c], p), flint.nmod_poly([1], p), canonical=True)


def from_json(field: FieldDescriptor, data) -> FieldElement:
    if isinstance(data, dict):
        num = _poly(field.char, [Fraction(c) if field.char == 0 else int(c) for c in data["num"]])
        den = _poly(field.char, [Fraction(c) if field.char == 0 else int(c) for c in data["den"]])
        return RatFunc(field, num, den)
    return coerce(field, Fraction(data))


def ratfunc(field: FieldDescriptor, num: tuple, den: tuple = (1,)) -> RatFunc:
    """Rational function from coefficient lists (constant term first)."""
    if not field.is_function_field:
        raise FieldError(f"{field.name} is not a rational function field")
    return RatFunc(field, _poly(field.char, num), _poly(field.char, den))


# --------------------------------------------------------------------------
# operations


def arith(op: str, x: FieldElement, y: FieldElement) -> FieldElement:
    if x.field != y.field:
        raise FieldError(f"field mismatch: {x.field.name} vs {y.field.name}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def _padic_order(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(x: FieldElement) -> int | None:
    """Integer valuation v(x) with |x| = base**(-v); None for zero."""
    fld = x.field
    if x.is_zero():
        return None
    if fld.trivially_valued:
        return 0
    if isinstance(fld, RationalsPadic):
        return _padic_order(x.numerator, fld.p) - _padic_order(x.denominator, fld.p)
    place = fld.place_poly
    if fld.place == (0, 1):
        # place s: order of vanishing at 0
        num_c = x.num.coeffs()
        den_c = x.den.coeffs()
        return (next(i for i, c in enumerate(num_c) if c != 0)
                - next(i for i, c in enumerate(den_c) if c != 0))
    return _place_multiplicity(x.num, place) - _place_multiplicity(x.den, place)


def magnitude(x: FieldElement) -> Magnitude:
    v = valuation(x)
    if v is None:
        return ZERO
    return Magnitude(x.field.base, v)


# --------------------------------------------------------------------------
# valuation ring data


@dataclass(frozen=True)
class ValuationRingData:
    descriptor: FieldDescriptor
    uniformizer: FieldElement | None
    residue_cardinality: float | int
    residue_digits: tuple = field(default=(), compare=False)

    @property
    def base(self) -> int:
        return self.descriptor.base

    @property
    def residue_finite(self) -> bool:
        return self.residue_cardinality != INFINITE


def make_field(desc: FieldDescriptor) -> ValuationRingData:
    """Uniformizer, residue cardinality and residue digit set for ``desc``."""
    if isinstance(desc, RationalsPadic):
        digits = tuple(desc(i) for i in range(desc.p))
        return ValuationRingData(desc, desc(desc.p), desc.p, digits)
    if isinstance(desc, RationalFunctions):
        pi = RatFunc(desc, desc.place_poly, _poly(desc.char, (1,)))
        if desc.char == 0:
            return ValuationRingData(desc, pi, INFINITE)
        deg = len(desc.place) - 1
        p = desc.char
        digits = []
        for idx in range(p ** deg):
            coeffs = []
            for _ in range(deg):
                coeffs.append(idx % p)
                idx //= p
            digits.append(ratfunc(desc, tuple(coeffs)))
        return ValuationRingData(desc, pi, p ** deg, tuple(digits))
    if isinstance(desc, Trivial):
        # the residue field is the whole field
        return ValuationRingData(desc, None, INFINITE)
    raise FieldError(f"unknown field descriptor {desc!r}")


# --------------------------------------------------------------------------
# shorthand names used on the command line


def magnitude_place(char: int) -> tuple:
    """Coefficients of X^2+X+1 over F_2, 2X+1 otherwise."""
    return (1, 1, 1) if char == 2 else (1, 2)


def parse_field(spec: str) -> FieldDescriptor:
    """Parse a field shorthand.

    ``qP``          Q with |.|_P
    ``fPs``         F_P(s), place s
    ``fPs-q``       F_P(s), place X^2+X+1 (P=2) or 2X+1
    ``qs``/``qs-q`` Q(s) with place s / 2X+1
    ``trivialC``    trivially valued field of characteristic C
    ``ratfunc:C:c0,c1,...``  explicit place coefficients
    """
    s = spec.strip()
    try:
        if s.startswith("trivial"):
            return Trivial(int(s[len("trivial"):]))
        if s.startswith("ratfunc:"):
            _, char, coeffs = s.split(":")
            return RationalFunctions(int(char), tuple(Fraction(c) for c in coeffs.split(",")))
        if s in ("qs", "qs-q"):
            return RationalFunctions(0, (0, 1) if s == "qs" else magnitude_place(0))
        if s.startswith("f") and (s.endswith("s") or s.endswith("s-q")):
            q_place = s.endswith("-q")
            p = int(s[1:s.index("s")])
            return RationalFunctions(p, magnitude_place(p) if q_place else (0, 1))
        if s.startswith("q"):
            return RationalsPadic(int(s[1:]))
    except (ValueError, IndexError) as exc:
        raise FieldError(f"cannot parse field {spec!r}: {exc}") from exc
    raise FieldError(f"unknown field shorthand {spec!r}")


def field_to_json(desc: FieldDescriptor) -> dict:
    if isinstance(desc, RationalsPadic):
        return {"kind": "padic", "p": desc.p}
    if isinstance(desc, RationalFunctions):
        return {"kind": "ratfunc", "char": desc.char, "place": [str(c) for c in desc.place],
                "base": desc.base}
    return {"kind": "trivial", "char": desc.char}


def field_from_json(data: dict) -> FieldDescriptor:
    kind = data["kind"]
    if kind == "padic":
        return RationalsPadic(int(data["p"]))
    if kind == "ratfunc":
        return RationalFunctions(int(data["char"]), tuple(Fraction(c) for c in data["place"]),
                                 int(data.get("base", 2)))
    if kind == "trivial":
        return Trivial(int(data["char"]))
    raise FieldError(f"unknown field kind {kind!r}")
