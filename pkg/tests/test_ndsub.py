from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from autoseq import catalog
from autoseq.automata import automaton_to_substitution
from autoseq.ndsub import (ArrayWindow, NdSubstitution, Pattern, count_pattern, cube_exponent,
                           cube_frequencies, ensure_seed, expand, fixed_array, pattern_frequency,
                           spacing_and_repetitivity_check, two_cube_substitution, verify_freq_array)
from autoseq.perron import word_frequencies
from autoseq.substitution import fixed_point_prefix
from autoseq.words import apply_morphism

TM2 = catalog.thue_morse_2d()
AB = TM2.alphabet


def digit_sum_window(side):
    s = np.array([bin(i).count("1") % 2 for i in range(side)])
    return (s[:, None] + s[None, :]) % 2


def test_expand_single_cell_and_twice():
    a = ArrayWindow.from_letters(AB, [["a"]])
    once = expand(TM2, a)
    assert once.letters().tolist() == [["a", "b"], ["b", "a"]]
    assert (expand(TM2, once).codes == digit_sum_window(4)).all()


def test_expand_d1_is_apply_morphism():
    s = catalog.sigma3()
    S1 = NdSubstitution(s.alphabet, 2, np.array([img.codes() for img in s.images]), "a")
    x = fixed_point_prefix(s, 16)
    w = ArrayWindow(s.alphabet, x.codes())
    assert expand(S1, w).codes.tolist() == apply_morphism(s.morphism, x).codes().tolist()


def test_fixed_array_examples():
    assert (fixed_array(TM2, 2).codes == digit_sum_window(4)).all()
    assert fixed_array(TM2, 0).letters().tolist() == [["a"]]
    assert (fixed_array(TM2, 8).codes == digit_sum_window(256)).all()


def test_diagonal_fixed_array():
    S, _ = automaton_to_substitution(catalog.diagonal_automaton())
    w = fixed_array(S, 3)
    assert w.shape == (8, 8)
    letters = w.letters()
    e = letters[0, 0]
    assert all((letters[i, j] == e) == (i == j) for i in range(8) for j in range(8))


def test_ensure_seed_uses_power_when_corner_map_cycles():
    S = NdSubstitution.from_rules({"a": [["b", "a"], ["a", "a"]], "b": [["a", "b"], ["b", "b"]]}, 2, seed="a")
    T, m = ensure_seed(S)
    assert m == 2 and T.side == 4
    w = fixed_array(S, 2)
    assert w.shape == (16, 16)
    assert (expand(T, fixed_array(S, 1)).codes == w.codes).all()


def test_count_pattern_examples():
    w = fixed_array(TM2, 2)
    assert count_pattern(w, Pattern.cube(AB, [["a"]])) == 8
    assert count_pattern(w, Pattern.from_window(w)) == 1
    assert count_pattern(fixed_array(TM2, 1), Pattern.from_window(w)) == 0


def test_pattern_frequency():
    assert pattern_frequency(TM2, Pattern.cube(AB, [["a"]])) == F(1, 2)
    block = Pattern.cube(AB, [["a", "b"], ["b", "a"]])
    exact = pattern_frequency(TM2, block)
    assert exact == F(2, 9)
    emp = pattern_frequency(TM2, block, mode="empirical", max_side=1 << 10)
    assert abs(emp.value - float(exact)) < 1e-2
    assert sum(pattern_frequency(TM2, Pattern.cube(AB, [[a]])) for a in "ab") == 1


def test_non_cubic_pattern_frequency():
    # a horizontal domino "ab" along axis 1
    P = Pattern(((0, 0), (1, 0)), ("a", "b"))
    f = pattern_frequency(TM2, P)
    w = fixed_array(TM2, 9)
    assert abs(count_pattern(w, P) / w.codes.size - float(f)) < 1e-2


def test_cube_exponent():
    assert [cube_exponent(2, R) for R in (1, 2, 3, 4, 5)] == [1, 2, 2, 3, 3]


def test_two_cube_substitution_is_primitive_and_sums():
    S2, cubes = two_cube_substitution(TM2)
    assert len(cubes) == 8
    assert sum(cube_frequencies(TM2, 2).values()) == 1


def test_freq_array_tm2d():
    rep = verify_freq_array(TM2, 4, 2)
    assert rep.stable and not rep.periodic
    assert rep.values == (F(8, 9), F(16, 9), F(2), F(32, 9))
    assert rep.counts == {1: 2, 2: 8, 3: 18, 4: 50}


def test_freq_array_d1_matches_words():
    s = catalog.sigma3()
    S1 = NdSubstitution(s.alphabet, 2, np.array([img.codes() for img in s.images]), "a")
    for R in range(1, 7):
        nd = {tuple(w.letters().tolist()): f for w, f in cube_frequencies(S1, R).items()}
        assert nd == dict(word_frequencies(s, R).items())


def test_spacing_tm2d():
    rep = spacing_and_repetitivity_check(TM2, 4)
    assert rep.stable and not rep.periodic
    assert all(k >= 1 for k in rep.k_hat + rep.k_prime_hat)


def test_spacing_periodic_flag():
    S = NdSubstitution.from_rules({"a": [["a", "b"], ["b", "a"]], "b": [["a", "b"], ["b", "a"]]}, 2, seed="a")
    assert spacing_and_repetitivity_check(S, 3).periodic
    assert verify_freq_array(S, 3).periodic


def test_spacing_d1_reports_both():
    s = catalog.sigma3()
    S1 = NdSubstitution(s.alphabet, 2, np.array([img.codes() for img in s.images]), "a")
    rep = spacing_and_repetitivity_check(S1, 8)
    assert rep.k_hat[0] >= 1 and rep.k_prime_hat[0] >= 1


def test_window_rejects_bad_codes():
    with pytest.raises(ValueError):
        ArrayWindow(AB, np.array([[0, 2]]))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255))
def test_fixed_array_cells_follow_automaton(i, j):
    w = fixed_array(TM2, 8)
    assert w.codes[i, j] == (bin(i).count("1") + bin(j).count("1")) % 2


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3))
def test_cube_frequencies_sum_to_one(R):
    assert sum(cube_frequencies(TM2, R).values()) == 1
