import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultraparadox.words import (
    EMPTY,
    APower,
    BPower,
    Empty,
    Syllables,
    Word,
    canonical_class,
    conjugacy_classes,
    count_reduced,
    cyclic_reduce,
    enumerate_reduced,
    from_syllables,
    to_syllables,
)

raw_words = st.text(alphabet="aAbB", max_size=14)
reduced = raw_words.map(Word.parse)


def brute_force_count(n):
    return sum(1 for k in range(n + 1) for t in itertools.product("aAbB", repeat=k)
               if Word.parse("".join(t)).letters == "".join(t))


def all_rotations(w: Word):
    s = cyclic_reduce(w).letters
    return {Word.parse(s[i:] + s[:i]) for i in range(max(len(s), 1))}


class TestReduction:
    def test_parse(self):
        assert Word.parse("aAb").letters == "b"
        assert Word.parse("1") == EMPTY
        assert str(EMPTY) == "1"

    def test_unreduced_constructor_rejected(self):
        with pytest.raises(ValueError):
            Word("aA")

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            Word.parse("abc")

    @given(reduced, reduced, reduced)
    def test_associative(self, u, v, w):
        assert (u * v) * w == u * (v * w)

    @given(reduced)
    def test_inverse(self, w):
        assert w * w.inverse() == EMPTY
        assert w.inverse().inverse() == w

    def test_power(self):
        assert Word.parse("ab") ** -2 == Word.parse("BABA")


class TestEnumeration:
    @pytest.mark.parametrize("n", range(6))
    def test_count_matches_brute_force(self, n):
        assert count_reduced(n) == len(enumerate_reduced(n)) == brute_force_count(n)

    def test_count_closed_form(self):
        assert count_reduced(8) == 13121
        assert count_reduced(10) == 118097

    def test_order(self):
        words = [str(w) for w in enumerate_reduced(2)]
        assert words[:5] == ["1", "a", "A", "b", "B"]
        assert words[5:8] == ["aa", "ab", "aB"]


class TestSyllables:
    def test_forms(self):
        assert to_syllables(EMPTY) == Empty()
        assert to_syllables(Word.parse("AAA")) == APower(-3)
        assert to_syllables(Word.parse("bb")) == BPower(2)
        assert to_syllables(Word.parse("aaBab")) == Syllables(((2, -1), (1, 1)))

    @given(st.lists(st.tuples(st.integers(-3, 3).filter(bool), st.integers(-3, 3).filter(bool)),
                    min_size=1, max_size=4))
    def test_round_trip(self, pairs):
        form = Syllables(tuple(pairs))
        assert to_syllables(from_syllables(form)) == form


class TestConjugacy:
    @given(reduced, reduced)
    def test_invariant_under_conjugation(self, w, g):
        assert canonical_class(g * w * g.inverse()) == canonical_class(w)

    @given(reduced)
    def test_rep_is_a_rotation(self, w):
        c = canonical_class(w)
        assert canonical_class(c.rep) == c
        if w.letters:
            assert c.rep in all_rotations(w)

    @given(reduced)
    def test_lengths(self, w):
        c = canonical_class(w)
        core = cyclic_reduce(w).letters
        assert c.la == sum(ch in "aA" for ch in core)
        assert c.lb == sum(ch in "bB" for ch in core)

    def test_examples(self):
        assert canonical_class(Word.parse("baba")).rep == Word.parse("abab")
        assert canonical_class(Word.parse("bA")).rep == Word.parse("Ab")
        assert canonical_class(EMPTY).is_identity

    def test_classes_are_distinct_and_complete(self):
        classes = conjugacy_classes(6)
        reps = [c.rep for c in classes]
        assert len(set(reps)) == len(reps)
        covered = {canonical_class(w).rep for w in enumerate_reduced(6)}
        assert covered == set(reps)
