"""Seeded random elements, vectors and matrices for audits and tests."""

from __future__ import annotations

import random

from .matrices import Mat
from .valued_fields import (
    RationalFunctions,
    RationalsPadic,
    make_field,
    ratfunc,
    valuation,
)


def _raw_nonzero(fld, rng: random.Random):
    if isinstance(fld, RationalsPadic):
        a = rng.choice([k for k in range(-30, 31) if k])
        b = rng.randint(1, 30)
        return fld(a) / fld(b)
    if isinstance(fld, RationalFunctions):
        p = fld.char or 7
        while True:
            num = tuple(rng.randrange(-p + 1 if fld.char == 0 else 0, p) for _ in range(rng.randint(1, 4)))
            den = tuple(rng.randrange(-p + 1 if fld.char == 0 else 0, p) for _ in range(rng.randint(1, 3)))
            if any(num) and any(den):
                return ratfunc(fld, num, den)
    raise TypeError(f"no sampler for {fld.name}")


def random_element(fld, rng: random.Random, vmin: int = -2, vmax: int = 2, zero_prob: float = 0.0):
    """Nonzero element with valuation uniform in [vmin, vmax] (or zero with
    probability ``zero_prob``)."""
    if zero_prob and rng.random() < zero_prob:
        return fld(0)
    x = _raw_nonzero(fld, rng)
    pi = make_field(fld).uniformizer
    return x * pi ** (rng.randint(vmin, vmax) - valuation(x))


def random_unit(fld, rng: random.Random):
    return random_element(fld, rng, 0, 0)


def random_vector(fld, n: int, rng: random.Random, vmin: int = -2, vmax: int = 2) -> tuple:
    return tuple(random_element(fld, rng, vmin, vmax, zero_prob=0.2) for _ in range(n))


def random_isometry(fld, n: int, rng: random.Random) -> Mat:
    """L * diag(units) * U * P with unitriangular L, U over the valuation ring."""
    zero, one = fld(0), fld(1)

    def d():
        return random_element(fld, rng, 0, 3, zero_prob=0.3)

    L = Mat(fld, [[d() if j < i else (one if i == j else zero) for j in range(n)] for i in range(n)])
    U = Mat(fld, [[d() if j > i else (one if i == j else zero) for j in range(n)] for i in range(n)])
    D = Mat(fld, [[random_unit(fld, rng) if i == j else zero for j in range(n)] for i in range(n)])
    perm = list(range(n))
    rng.shuffle(perm)
    P = Mat(fld, [[one if perm[i] == j else zero for j in range(n)] for i in range(n)])
    return L @ D @ U @ P


MATRIX_KINDS = ("isometry", "unit-det-outside-D", "nonunit-det", "scaled", "generic")


def random_matrix(fld, n: int, rng: random.Random, kind: str | None = None) -> Mat:
    """A matrix of the requested kind; ``None`` picks one of MATRIX_KINDS."""
    kind = kind or rng.choice(MATRIX_KINDS)
    zero, one = fld(0), fld(1)
    pi = make_field(fld).uniformizer
    if kind == "isometry":
        return random_isometry(fld, n, rng)
    if kind == "unit-det-outside-D":
        E = Mat(fld, [[one if i == j else (one / pi if (i, j) == (0, 1) else zero)
                       for j in range(n)] for i in range(n)])
        return random_isometry(fld, n, rng) @ E
    if kind == "nonunit-det":
        Dg = Mat(fld, [[(pi if i == 0 else one) if i == j else zero for j in range(n)]
                       for i in range(n)])
        return Dg @ random_isometry(fld, n, rng)
    if kind == "scaled":
        s = one / pi if rng.random() < 0.5 else pi
        return Mat(fld, [[s * x for x in r] for r in random_isometry(fld, n, rng).rows])
    if kind == "generic":
        return Mat(fld, [[random_element(fld, rng, -1, 2, zero_prob=0.2) for _ in range(n)]
                         for _ in range(n)])
    raise ValueError(f"unknown matrix kind {kind!r}")


def audit_vectors(fld, n: int, rng: random.Random, count: int = 12) -> list[tuple]:
    """Basis vectors, all-ones, and random vectors of mixed magnitudes."""
    zero, one = fld(0), fld(1)
    basis = [tuple(one if i == k else zero for i in range(n)) for k in range(n)]
    return basis + [tuple(one for _ in range(n))] + [random_vector(fld, n, rng) for _ in range(count)]


__all__ = ["MATRIX_KINDS", "audit_vectors", "random_element", "random_isometry", "random_matrix",
           "random_unit", "random_vector"]

