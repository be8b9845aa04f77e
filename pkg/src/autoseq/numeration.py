"""Numeration systems, greedy representations and digit-tuple encodings.

Representations are words over a digit alphabet, most significant digit
first. The representation of 0 is the empty word.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Sequence

from .words import Alphabet, Word

__all__ = [
    "NumerationSystem",
    "greedy_rep",
    "value",
    "pad",
    "digit_alphabet",
    "tuple_alphabet",
    "encode_tuple",
    "decode_tuple",
]

_RATIO_SAMPLE = 64


def digit_alphabet(p: int) -> Alphabet:
    if p < 2:
        raise ValueError("base must be at least 2")
    return Alphabet(tuple(range(p)))


def tuple_alphabet(p: int, d: int) -> Alphabet:
    """All d-tuples of base-p digits, in lexicographic order."""
    if p < 2:
        raise ValueError("base must be at least 2")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return Alphabet(tuple(itertools.product(range(p), repeat=d)))


@dataclass(frozen=True)
class NumerationSystem:
    """A strictly increasing sequence U with U_0 = 1 and bounded ratios.

    ``terms`` is a finite table; ``extend`` (optional) computes the next term
    from the list of all previous ones, so the sequence is unbounded.
    """

    terms: tuple
    extend: Callable[[list], int] | None = None
    _cache: list = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        terms = tuple(int(t) for t in self.terms)
        if not terms or terms[0] != 1:
            raise ValueError("a numeration system starts with U_0 = 1")
        if any(b <= a for a, b in zip(terms, terms[1:])):
            raise ValueError("numeration system must be strictly increasing")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_cache", list(terms))

    @classmethod
    def base(cls, p: int) -> "NumerationSystem":
        if p < 2:
            raise ValueError("base must be at least 2")
        return cls((1, p), lambda u: u[-1] * p)

    @classmethod
    def linear(cls, initial: Sequence[int], coefficients: Sequence[int]) -> "NumerationSystem":
        """U_n = sum_i coefficients[i] * U_{n-1-i} once ``initial`` runs out."""
        coeffs = tuple(coefficients)
        return cls(tuple(initial), lambda u: sum(c * u[-1 - i] for i, c in enumerate(coeffs)))

    def term(self, n: int) -> int:
        cache = self._cache
        while len(cache) <= n:
            if self.extend is None:
                raise IndexError(f"numeration table has only {len(cache)} terms")
            nxt = int(self.extend(cache))
            if nxt <= cache[-1]:
                raise ValueError("extension rule broke strict monotonicity")
            cache.append(nxt)
        return cache[n]

    def _available(self, n: int) -> bool:
        try:
            self.term(n)
        except IndexError:
            return False
        return True

    @cached_property
    def digit_bound(self) -> int:
        """Upper integer part of sup U_{n+1}/U_n, sampled on the first terms."""
        ratios = []
        n = 0
        while n < _RATIO_SAMPLE and self._available(n + 1):
            ratios.append(-(-self.term(n + 1) // self.term(n)))
            n += 1
        return max(ratios) if ratios else 2

    @cached_property
    def digits(self) -> Alphabet:
        return Alphabet(tuple(range(max(self.digit_bound, 2))))


@lru_cache(maxsize=None)
def _base_system(p: int) -> NumerationSystem:
    return NumerationSystem.base(p)


def _system(U: NumerationSystem | int) -> NumerationSystem:
    return _base_system(U) if isinstance(U, int) else U


def greedy_rep(U: NumerationSystem | int, x: int) -> Word:
    """Greedy (Euclidean division) representation of ``x``; ``U`` may be a base."""
    U = _system(U)
    if x < 0:
        raise ValueError("only nonnegative integers have representations")
    digits = U.digits
    if x == 0:
        return Word.empty(digits)
    i = 0
    while U._available(i + 1) and U.term(i + 1) <= x:
        i += 1
    if not U._available(i + 1):
        raise ValueError(f"{x} exceeds the finite numeration table")
    out = []
    rest = x
    for j in range(i, -1, -1):
        q, rest = divmod(rest, U.term(j))
        out.append(q)
    return Word(tuple(out), digits)


def value(U: NumerationSystem | int, r: Word | Sequence[int]) -> int:
    U = _system(U)
    ds = list(r.letters if isinstance(r, Word) else r)
    bound = len(U.digits)
    total = 0
    for j, a in enumerate(reversed(ds)):
        if not isinstance(a, int) or not 0 <= a < bound:
            raise ValueError(f"digit {a!r} out of range [0, {bound})")
        total += a * U.term(j)
    return total


def pad(r: Word, n: int) -> Word:
    """Prepend zeros (the all-zero symbol for tuple words) up to length ``n``."""
    if n < len(r):
        raise ValueError(f"cannot pad a length-{len(r)} representation to {n}")
    zero = r.alphabet.symbols[0]
    return Word((zero,) * (n - len(r)) + r.letters, r.alphabet)


def _base_digits(p: int, x: int) -> list:
    out = []
    while x:
        x, d = divmod(x, p)
        out.append(d)
    return out[::-1]


def encode_tuple(p: int, v: Sequence[int]) -> Word:
    """Base-p digits of each coordinate, zero-padded to a common length."""
    v = tuple(int(c) for c in v)
    if p < 2:
        raise ValueError("base must be at least 2")
    if not v:
        raise ValueError("need at least one coordinate")
    if any(c < 0 for c in v):
        raise ValueError("coordinates must be nonnegative")
    cols = [_base_digits(p, c) for c in v]
    width = max(len(c) for c in cols)
    cols = [[0] * (width - len(c)) + c for c in cols]
    return Word(tuple(zip(*cols)) if width else (), tuple_alphabet(p, len(v)))


def decode_tuple(p: int, t: Word | Sequence[tuple]) -> tuple:
    letters = list(t.letters if isinstance(t, Word) else t)
    if isinstance(t, Word):
        d = len(t.alphabet.symbols[0])
    elif letters:
        d = len(letters[0])
    else:
        raise ValueError("cannot infer dimension of an empty tuple word")
    out = [0] * d
    for sym in letters:
        if len(sym) != d:
            raise ValueError("tuple word mixes dimensions")
        for i, digit in enumerate(sym):
            if not 0 <= digit < p:
                raise ValueError(f"digit {digit} out of range for base {p}")
            out[i] = out[i] * p + digit
    return tuple(out)


def rep_length(p: int, x: int) -> int:
    """Length of the base-p representation (0 for x = 0)."""
    return len(_base_digits(p, x))
