from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraparadox.geometry import (
    ClosedBall,
    OpenBall,
    ProductLocus,
    PuncturedBall,
    PuncturedSpace,
    Sphere,
    WholeSpace,
    coset_representatives,
    cover_ball,
    displacement_audit,
    distance,
    norm,
    region_from_json,
    sphere_union,
    verify_cover,
)
from ultraparadox.matrices import AffineMap, magnus, magnus_eps_pair
from ultraparadox.valued_fields import FieldError, Magnitude, RationalsPadic, ZERO, mag_compare, mag_max, power

Q2 = RationalsPadic(2)
fr = st.fractions(min_value=-64, max_value=64, max_denominator=16)
vec2 = st.tuples(fr, fr).map(lambda t: tuple(Q2(x) for x in t))


def v(*xs):
    return tuple(Q2(Fraction(x)) for x in xs)


class TestNorm:
    def test_examples(self):
        assert norm(v("1/2", 4)) == Magnitude(2, -1)
        assert norm(v(0, 0)) == ZERO
        assert norm(()) == ZERO

    @given(vec2, vec2, vec2)
    def test_strong_triangle(self, x, y, z):
        assert mag_compare(distance(x, z), mag_max(distance(x, y), distance(y, z))) <= 0

    @given(vec2, vec2, vec2)
    def test_isosceles(self, x, y, z):
        d = sorted([distance(x, y), distance(y, z), distance(x, z)],
                   key=lambda m: (not m.is_zero, -(m.exponent or 0)))
        assert d[1] == d[2]


class TestRegions:
    def test_ball_sphere(self):
        c, r = v(0, 0), power(2, 1)
        assert ClosedBall(c, r).contains(v(2, 4))
        assert not OpenBall(c, r).contains(v(2, 4))
        assert Sphere(c, r).contains(v(2, 4))
        assert not Sphere(c, r).contains(v(4, 4))
        assert not PuncturedBall(c, r).contains(c)

    @given(vec2)
    def test_every_point_of_a_closed_ball_is_a_center(self, y):
        B = ClosedBall(v(1, 1), power(2, 1))
        if B.contains(y):
            assert all(B.contains(p) == ClosedBall(y, power(2, 1)).contains(p)
                       for p in (v(1, 1), v(3, 1), v(0, 0), v(5, 9)))

    def test_product_locus(self):
        L = ProductLocus((Sphere(v(0, 0), power(2, 0)), ClosedBall(v(0), power(2, 0))))
        assert L.n == 3
        assert L.contains(v(1, 0, 2))
        assert not L.contains(v(2, 0, 1))

    def test_punctured_space(self):
        P = PuncturedSpace(3, 2)
        assert P.contains(v(0, 1, 0)) and not P.contains(v(0, 0, 5))
        assert WholeSpace(2).contains(v(0, 0))

    def test_json(self):
        for R in (ClosedBall(v(1, 2), power(2, 3)),
                  ProductLocus((OpenBall(v(0, 0), power(2, 0)), Sphere(v(0), power(2, 0)))),
                  sphere_union(v(0, 0), [power(2, 0), power(2, 1)]), PuncturedSpace(3, 2)):
            assert region_from_json(Q2, R.to_json()) == R


class TestDisplacement:
    def test_small_generators_preserve_ball(self):
        A, B, _ = magnus_eps_pair(power(2, 3), 2)
        x = v(0, 1)
        rep = displacement_audit([AffineMap(A), AffineMap(B)], x, power(2, 1),
                                 [v(0, 1), v(2, 1), v(0, 3), v(4, 5)])
        assert rep.ok

    def test_large_displacement_reported(self):
        rep = displacement_audit([AffineMap(magnus(0, Q2))], v(0, 1), power(2, 2))
        assert not rep.ok and rep.failures


class TestCover:
    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("gap", [1, 2])
    def test_counts_and_partition(self, p, n, gap):
        fld = RationalsPadic(p)
        T = cover_ball(0, gap, n, fld)
        rep = verify_cover(T, 0, gap, n, fld)
        assert rep.count == p ** (n * gap)
        assert rep.ok

    def test_listing(self):
        assert cover_ball(0, 1, 2, Q2) == [v(0, 0), v(0, 1), v(1, 0), v(1, 1)]

    def test_shifted_levels(self):
        rep = verify_cover(cover_ball(-1, 1, 2, Q2), -1, 1, 2, Q2)
        assert rep.ok and rep.count == 16

    def test_function_field(self, f2s_q):
        T = cover_ball(0, 1, 2, f2s_q)
        assert len(T) == 16 and verify_cover(T, 0, 1, 2, f2s_q).ok

    def test_missing_translate_detected(self):
        T = cover_ball(0, 1, 2, Q2)[:-1]
        assert not verify_cover(T, 0, 1, 2, Q2).ok

    def test_overlapping_translates_detected(self):
        T = cover_ball(0, 1, 2, Q2)
        T[0] = v(2, 0)  # same class as (0, 0) modulo 2
        assert not verify_cover(T, 0, 1, 2, Q2).ok

    def test_infinite_residue_field(self, qs_q):
        with pytest.raises(FieldError):
            coset_representatives(0, 1, qs_q)

    def test_j_below_i(self):
        with pytest.raises(ValueError):
            cover_ball(2, 1, 2, Q2)
