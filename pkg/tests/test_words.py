import numpy as np
import pytest
from hypothesis import given, strategies as st

from autoseq.catalog import sigma2, sigma3
from autoseq.substitution import fixed_point_prefix
from autoseq.words import (Alphabet, Morphism, Word, apply_morphism, compose, count_occurrences,
                           factor_counts, factors, identity, incidence_matrix)

AB = Alphabet.of("ab")
TM = Morphism.from_rules({"a": "ab", "b": "ba"})
S2 = Morphism.from_rules({"a": "ab", "b": "bc", "c": "cc"})


def w(s, alphabet=AB):
    return Word.of(alphabet, s)


words_ab = st.text(alphabet="ab", max_size=30).map(w)


def test_count_occurrences_overlapping():
    assert count_occurrences(w("aa"), w("aaa")) == 2
    assert count_occurrences(w("ab"), w("abba")) == 1
    assert count_occurrences(w("a"), w("abbabaabba")) == 5


def test_count_longer_pattern_is_zero():
    assert count_occurrences(w("abab"), w("ab")) == 0


def test_empty_pattern_rejected():
    with pytest.raises(ValueError):
        count_occurrences(Word.empty(AB), w("ab"))


def test_word_rejects_foreign_letter():
    with pytest.raises(ValueError):
        w("abc")


def test_apply_morphism_examples():
    assert str(apply_morphism(TM, w("ab"))) == "abba"
    assert len(apply_morphism(TM, Word.empty(AB))) == 0
    abc = Alphabet.of("abc")
    assert str(apply_morphism(S2, w("abc", abc))) == "abbccc"


def test_compose_and_matrix_product():
    tm2 = compose(TM, TM)
    assert str(tm2.image("a")) == "abba"
    assert incidence_matrix(tm2).tolist() == [[2, 2], [2, 2]]
    assert compose(identity(AB), TM) == TM


def test_incidence_matrices():
    assert incidence_matrix(TM).tolist() == [[1, 1], [1, 1]]
    assert incidence_matrix(S2).tolist() == [[1, 0, 0], [1, 1, 0], [0, 1, 2]]
    assert incidence_matrix(identity(AB)).tolist() == [[1, 0], [0, 1]]


def test_factors_examples():
    assert {str(u) for u in factors(w("abba"), 2)} == {"ab", "bb", "ba"}
    x = fixed_point_prefix(sigma3(), 20)
    assert {str(u) for u in factors(x, 2)} == {"ab", "ba", "aa", "bb"}
    assert factors(w("abba"), 4) == {w("abba")}
    assert factors(w("ab"), 3) == set()


def test_morphism_needs_all_rules():
    with pytest.raises(ValueError):
        Morphism.from_rules({"a": "ab"}, source=AB)


@given(words_ab, words_ab)
def test_morphism_is_a_monoid_map(u, v):
    assert apply_morphism(TM, u + v) == apply_morphism(TM, u) + apply_morphism(TM, v)


@given(words_ab)
def test_matrix_counts_letters(u):
    # M · (letter counts of u) = letter counts of σ(u)
    counts = np.array([u.letters.count(a) for a in AB])
    image = apply_morphism(TM, u)
    assert (incidence_matrix(TM) @ counts).tolist() == [image.letters.count(a) for a in AB]


@given(words_ab, st.integers(1, 5))
def test_factor_counts_total(u, n):
    total = sum(factor_counts(u, n).values())
    assert total == max(len(u) - n + 1, 0)


@given(words_ab, words_ab)
def test_count_matches_naive(u, v):
    if len(u) == 0:
        return
    naive = sum(v.letters[i:i + len(u)] == u.letters for i in range(len(v) - len(u) + 1))
    assert count_occurrences(u, v) == naive


def test_composition_matrix_is_product():
    m = compose(S2, S2)
    assert (incidence_matrix(m) == incidence_matrix(S2) @ incidence_matrix(S2)).all()
    assert sigma2().matrix().tolist() == incidence_matrix(S2).tolist()
