"""Free group words: reduction, parsing, exponent sums."""

import hypothesis.strategies as st
import pytest
from hypothesis import given

from kanform.words import (Alphabet, Generator, Word, WordError, commutator,
                           gen_word, identity)


X = Generator("x")
Y = Generator("y")
AB = Alphabet.of([X, Y])


def word_of(*pairs):
    w = identity()
    for g, e in pairs:
        w = w * gen_word(g, e)
    return w


class TestReduction:
    def test_inverse_cancels(self):
        w = word_of((X, 1), (X, -1))
        assert w.is_identity

    def test_partial_cancellation(self):
        w = word_of((X, 1), (Y, 1), (Y, -1), (X, 1))
        assert str(w) == "x*x"

    def test_no_cancellation_across_distinct_generators(self):
        w = word_of((X, 1), (Y, -1))
        assert str(w) == "x*y^-1"

    def test_identity_renders_as_one(self):
        assert str(identity()) == "1"

    def test_inverse_word(self):
        w = word_of((X, 1), (Y, 1))
        assert str(w.inverse()) == "y^-1*x^-1"
        assert (w * w.inverse()).is_identity

    def test_commutator(self):
        c = commutator(gen_word(X), gen_word(Y))
        assert str(c) == "x*y*x^-1*y^-1"


class TestExponentSums:
    def test_commutator_has_zero_sums(self):
        c = commutator(gen_word(X), gen_word(Y))
        sums = c.exponent_sums()
        assert all(v == 0 for v in sums.values())

    def test_sums_keyed_by_generator(self):
        w = word_of((X, 1), (Y, 1), (X, 1))
        assert w.exponent_sums()[X] == 2
        assert w.exponent_sums()[Y] == 1


class TestParsing:
    def test_round_trip(self):
        w = word_of((X, 1), (Y, -1), (X, 1))
        assert AB.parse(str(w)) == w

    def test_parse_identity(self):
        assert AB.parse("1").is_identity

    def test_unknown_generator_rejected(self):
        with pytest.raises(WordError):
            AB.parse("z")


letters = st.lists(st.tuples(st.sampled_from([X, Y]),
                             st.sampled_from([-1, 1])), max_size=8)


@given(letters, letters)
def test_concatenation_is_associative_after_reduction(ls1, ls2):
    a, b = word_of(*ls1), word_of(*ls2)
    assert (a * b).inverse() == b.inverse() * a.inverse()


@given(letters)
def test_round_trip_arbitrary(ls):
    w = word_of(*ls)
    assert AB.parse(str(w)) == w


@given(letters)
def test_reduced_words_never_contain_adjacent_inverses(ls):
    w = word_of(*ls)
    for (g1, e1), (g2, e2) in zip(w.letters, w.letters[1:]):
        assert not (g1 == g2 and e1 == -e2)
