from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraparadox.matrices import Mat, magnus, rho, transcendental_pair
from ultraparadox.trace_poly import (
    SPECIAL_CLASSES,
    TriPoly,
    check_fgh,
    fgh_functions,
    phi,
    poly_eval,
    psi_magnitude,
    verify_fricke,
)
from ultraparadox.valued_fields import Magnitude, RationalFunctions, RationalsPadic, magnitude, power
from ultraparadox.words import EMPTY, Word, canonical_class, conjugacy_classes

Q2 = RationalsPadic(2)
words = st.text(alphabet="aAbB", max_size=9).map(Word.parse)


def P(w):
    return str(phi(canonical_class(Word.parse(w))))


class TestSpecialClasses:
    @pytest.mark.parametrize("w, expected", [
        ("1", "2"),
        ("a", "X"),
        ("b", "Y"),
        ("ab", "Z"),
        ("Ab", "X*Y - Z"),
        ("aa", "X^2 - 2"),
        ("abAB", "-X*Y*Z + X^2 + Y^2 + Z^2 - 2"),
        ("abAb", "X*Y*Z - X^2 - Z^2 + 2"),
    ])
    def test_table(self, w, expected):
        assert P(w) == expected

    def test_inverse_classes_agree(self):
        assert P("A") == P("a")
        assert P("AB") == P("ab")
        assert P("aB") == P("Ab")

    def test_special_table_is_keyed_by_canonical_reps(self):
        for rep in SPECIAL_CLASSES:
            assert canonical_class(Word.parse(rep or "1")).rep.letters == rep


class TestTriPoly:
    def test_arithmetic(self):
        X, Y, Z = (TriPoly.var(i) for i in range(3))
        assert str((X + Y) * (X - Y)) == "X^2 - Y^2"
        assert (X * Y - Z).degree() == 2

    def test_char_reduction(self):
        X = TriPoly.var(0)
        assert str((X * X - 2).reduce_mod(2)) == "X^2"

    def test_quads_round_trip(self):
        p = phi(canonical_class(Word.parse("aabAB")))
        assert TriPoly.from_quads(p.to_quads()) == p


class TestFricke:
    @given(words)
    def test_magnus_pair(self, w):
        assert verify_fricke(w, magnus(0, Q2), magnus(1, Q2)).equal

    @given(words)
    def test_rational_pair(self, w):
        A = Mat(Q2, [[2, Fraction(1, 3)], [3, 1]])
        B = Mat(Q2, [[Fraction(1, 2), 0], [5, 2]])
        assert verify_fricke(w, A, B).equal

    @given(st.text(alphabet="aAbB", max_size=6).map(Word.parse))
    def test_transcendental_pair(self, w):
        A, B, _ = transcendental_pair(RationalFunctions(2, (0, 1)), power(2, 1))
        assert verify_fricke(w, A, B).equal

    def test_conjugation_invariant(self):
        A, B = magnus(0, Q2), magnus(1, Q2)
        w, g = Word.parse("aabAb"), Word.parse("bA")
        assert rho(g * w * g.inverse(), A, B).trace() == rho(w, A, B).trace()

    def test_requires_unimodular(self):
        with pytest.raises(ValueError):
            verify_fricke(EMPTY, Mat(Q2, [[2, 0], [0, 1]]), magnus(0, Q2))

    def test_commutator_evaluation(self):
        # tr[A, B] for the Magnus pair, computed from the matrices directly
        A, B = magnus(0, Q2), magnus(1, Q2)
        direct = rho(Word.parse("abAB"), A, B).trace()
        x, y, z = A.trace(), B.trace(), (A @ B).trace()
        assert poly_eval(phi(canonical_class(Word.parse("abAB"))), x, y, z) == direct


class TestMagnitudeLaw:
    @pytest.mark.parametrize("fixture", ["f2s_q", "qs_q"])
    def test_fgh_values(self, fixture, request):
        fld = request.getfixturevalue(fixture)
        q, f, g, h = fgh_functions(fld)
        assert magnitude(q) == power(2, 1)
        assert magnitude(f) == Magnitude(2, -1)
        assert magnitude(h) == Magnitude(2, -2)
        check_fgh(f, g, h)

    @pytest.mark.parametrize("fixture", ["f2s_q", "qs_q"])
    def test_law_up_to_length_6(self, fixture, request):
        fld = request.getfixturevalue(fixture)
        _, f, g, h = fgh_functions(fld)
        for W in conjugacy_classes(6):
            if W.is_identity:
                continue
            rep = psi_magnitude(W, f, g, h)
            assert rep.equal, W

    def test_specific_values(self, f2s_q):
        _, f, g, h = fgh_functions(f2s_q)
        assert psi_magnitude(canonical_class(Word.parse("aab")), f, g, h).actual == Magnitude(2, -3)
        assert psi_magnitude(canonical_class(Word.parse("aabAB")), f, g, h).actual == Magnitude(2, -5)

    def test_identity_excluded(self, f2s_q):
        _, f, g, h = fgh_functions(f2s_q)
        with pytest.raises(ValueError):
            psi_magnitude(canonical_class(EMPTY), f, g, h)

    def test_bad_fgh_rejected(self, f2s_q):
        s = f2s_q.gen()
        with pytest.raises(ValueError):
            check_fgh(s, s, s)
