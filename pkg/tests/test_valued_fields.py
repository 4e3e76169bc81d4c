from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraparadox.valued_fields import (
    ZERO,
    FieldError,
    Magnitude,
    RationalFunctions,
    RationalsPadic,
    Trivial,
    field_from_json,
    field_to_json,
    from_json,
    mag_compare,
    mag_max,
    magnitude,
    make_field,
    parse_field,
    power,
    ratfunc,
    valuation,
)

Q2 = RationalsPadic(2)
F2S = RationalFunctions(2, (0, 1))

nonzero_fractions = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)


def padic_val(x: Fraction, p: int) -> int:
    """Independent oracle: strip factors of p from numerator and denominator."""
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


class TestMagnitude:
    def test_zero_is_smallest(self):
        assert ZERO.is_zero
        assert mag_compare(ZERO, power(2, 40)) < 0
        assert mag_max(ZERO, ZERO) == ZERO

    def test_ordering_follows_exponent(self):
        # |x| = base^(-exponent): a larger exponent is a smaller magnitude
        assert power(2, 3) < power(2, 1)
        assert mag_compare(power(3, -1), power(3, 0)) > 0

    def test_str(self):
        assert str(power(2, 1)) == "2^-1"
        assert str(Magnitude(2, -1)) == "2^1"

    def test_value(self):
        assert power(3, 2).value == Fraction(1, 9)


class TestRationalsPadic:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_valuation_matches_oracle_examples(self, p):
        fld = RationalsPadic(p)
        for x in (Fraction(12), Fraction(1, 18), Fraction(-50, 7), Fraction(p ** 5, 3)):
            assert valuation(fld(x)) == padic_val(x, p)

    @given(nonzero_fractions, st.sampled_from([2, 3, 5, 7]))
    def test_valuation_oracle(self, x, p):
        assert valuation(RationalsPadic(p)(x)) == padic_val(x, p)

    @given(nonzero_fractions, nonzero_fractions)
    def test_multiplicative(self, x, y):
        a, b = Q2(x), Q2(y)
        assert magnitude(a * b) == magnitude(a) * magnitude(b)

    @given(nonzero_fractions, nonzero_fractions)
    def test_ultrametric(self, x, y):
        a, b = Q2(x), Q2(y)
        assert mag_compare(magnitude(a + b), mag_max(magnitude(a), magnitude(b))) <= 0

    @given(nonzero_fractions, nonzero_fractions)
    def test_isosceles(self, x, y):
        a, b = Q2(x), Q2(y)
        if magnitude(a) != magnitude(b):
            assert magnitude(a + b) == mag_max(magnitude(a), magnitude(b))

    def test_zero(self):
        assert valuation(Q2(0)) is None
        assert magnitude(Q2(0)) == ZERO

    def test_non_prime_rejected(self):
        with pytest.raises((FieldError, ValueError)):
            RationalsPadic(6)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            Q2(1) / Q2(0)


class TestRationalFunctions:
    def test_place_at_s(self):
        s = F2S.gen()
        assert valuation(s ** 3 / (s + 1)) == 3
        assert magnitude(1 / s) == Magnitude(2, -1)
        assert str(s * s + 1) == "s^2 + 1"

    def test_place_q_in_char_2(self, f2s_q):
        s = f2s_q.gen()
        q = s * s + s + 1
        assert valuation(q) == 1
        assert valuation(q ** 3 / (s + 1)) == 3
        assert valuation(s) == 0

    def test_char_0_place(self, qs_q):
        s = qs_q.gen()
        assert valuation(2 * s + 1) == 1
        assert valuation((4 * s * s - 1) / (s - 1)) == 1  # (2s-1)(2s+1)

    def test_char_2_arithmetic(self):
        s = F2S.gen()
        assert (s + 1) * (s + 1) == s * s + 1
        assert F2S(1) + F2S(1) == F2S(0)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=6),
           st.lists(st.integers(0, 1), min_size=1, max_size=6))
    def test_multiplicative(self, a, b):
        if not any(a) or not any(b):
            return
        x, y = ratfunc(F2S, tuple(a)), ratfunc(F2S, tuple(b))
        assert valuation(x * y) == valuation(x) + valuation(y)
        assert valuation(x / y) == valuation(x) - valuation(y)

    def test_compose(self):
        s = F2S.gen()
        q = s * s + s + 1
        assert q.compose(s * s) == s ** 4 + s * s + 1


class TestTrivial:
    def test_everything_has_magnitude_one(self, trivial0):
        assert valuation(trivial0(Fraction(7, 3))) == 0
        assert magnitude(trivial0(0)) == ZERO


class TestRingData:
    def test_padic(self):
        ring = make_field(RationalsPadic(3))
        assert ring.residue_cardinality == 3
        assert ring.uniformizer == RationalsPadic(3)(3)
        assert ring.residue_finite

    def test_function_field(self, f2s_q):
        ring = make_field(f2s_q)
        assert ring.residue_cardinality == 4  # F_2[X]/(X^2+X+1)
        assert len(ring.residue_digits) == 4

    def test_char0_function_field_infinite_residue(self, qs_q):
        assert not make_field(qs_q).residue_finite


class TestParsingAndJson:
    @pytest.mark.parametrize("name", ["q2", "q3", "f2s", "f2s-q", "qs", "qs-q", "trivial0",
                                      "trivial3", "ratfunc:3:1,0,1"])
    def test_round_trip(self, name):
        fld = parse_field(name)
        assert field_from_json(field_to_json(fld)) == fld

    def test_bad_shorthand(self):
        with pytest.raises(FieldError):
            parse_field("z7")

    def test_element_json(self, f2s_q):
        s = f2s_q.gen()
        x = (s ** 3 + 1) / (s * s + s + 1)
        assert from_json(f2s_q, x.to_json()) == x
        assert from_json(Q2, Q2(Fraction(-5, 12)).to_json()) == Q2(Fraction(-5, 12))

    def test_trivial_is_not_function_field_with_place(self):
        assert Trivial(2).trivially_valued
