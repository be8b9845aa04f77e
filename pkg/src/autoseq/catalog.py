"""The standard example sets, automata and substitutions.

E1 = even numbers, E2 = powers of two, E3 = numbers whose binary digit sum
is even (Thue-Morse support). Automata states are named after the
substitution letters they become.
"""
from __future__ import annotations

from .automata import Automaton, RecognizableSet
from .numeration import digit_alphabet, tuple_alphabet
from .substitution import Substitution

__all__ = [
    "e1_automaton",
    "e2_automaton",
    "e3_automaton",
    "diagonal_automaton",
    "even_sum_automaton",
    "recognizable",
    "sigma1",
    "sigma1_bar",
    "sigma2",
    "sigma3",
    "thue_morse_2d",
]


def _automaton(p, rows: dict, initial, terminals, d: int = 1) -> Automaton:
    alphabet = digit_alphabet(p) if d == 1 else tuple_alphabet(p, d)
    states = tuple(rows)
    table = tuple(tuple(states.index(r) for r in rows[q]) for q in states)
    return Automaton(states, alphabet, table, initial, frozenset(terminals))


def e1_automaton(p: int = 2) -> Automaton:
    """Even numbers in base 2 (last digit 0) or base 3 (digit sum even)."""
    if p == 2:
        return _automaton(2, {"a": "ab", "b": "ab"}, "a", {"a"})
    if p == 3:
        return _automaton(3, {"a": "aba", "b": "bab"}, "a", {"a"})
    raise ValueError("E1 example automata exist for bases 2 and 3")


def e2_automaton() -> Automaton:
    return _automaton(2, {"a": "ab", "b": "bc", "c": "cc"}, "a", {"b"})


def e3_automaton() -> Automaton:
    return _automaton(2, {"a": "ab", "b": "ba"}, "a", {"a"})


def diagonal_automaton() -> Automaton:
    """{(n, n)} in base 2: e while both digits agree, s after a mismatch."""
    return _automaton(2, {"e": "esse", "s": "ssss"}, "e", {"e"}, d=2)


def even_sum_automaton() -> Automaton:
    """{(i, j) : i + j even} in base 2: parity of the two last digits."""
    return _automaton(2, {"a": "abba", "b": "abba"}, "a", {"a"}, d=2)


def recognizable(name: str) -> RecognizableSet:
    table = {
        "E1": (e1_automaton(2), 2, 1),
        "E1_3": (e1_automaton(3), 3, 1),
        "E2": (e2_automaton(), 2, 1),
        "E3": (e3_automaton(), 2, 1),
        "diagonal": (diagonal_automaton(), 2, 2),
        "even_sum": (even_sum_automaton(), 2, 2),
    }
    a, p, d = table[name]
    return RecognizableSet(a, p, d)


def sigma1() -> Substitution:
    return Substitution.from_rules({"a": "ab", "b": "ab"}, seed="a")


def sigma1_bar() -> Substitution:
    return Substitution.from_rules({"a": "aba", "b": "bab"}, seed="a")


def sigma2() -> Substitution:
    return Substitution.from_rules({"a": "ab", "b": "bc", "c": "cc"}, seed="a")


def sigma3() -> Substitution:
    return Substitution.from_rules({"a": "ab", "b": "ba"}, seed="a")


def thue_morse_2d():
    """S(a) = [a b / b a], S(b) = [b a / a b]; cell (i, j) is a iff i + j has even binary digit sum."""
    from .ndsub import NdSubstitution

    return NdSubstitution.from_rules({"a": [["a", "b"], ["b", "a"]], "b": [["b", "a"], ["a", "b"]]},
                                     side=2, seed="a")
