"""Alphabets, words, morphisms and incidence matrices.

Symbols are opaque hashable tokens. Every matrix and vector in the package
is indexed by the order in which an :class:`Alphabet` lists its symbols.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Alphabet",
    "Word",
    "Morphism",
    "AlphabetMismatch",
    "count_occurrences",
    "apply_morphism",
    "compose",
    "incidence_matrix",
    "factors",
    "factor_counts",
    "identity",
    "symbol_str",
]


class AlphabetMismatch(ValueError):
    """Two objects that must share an alphabet do not."""


def symbol_str(symbol: Hashable) -> str:
    if isinstance(symbol, tuple):
        if all(isinstance(s, str) and len(s) == 1 for s in symbol):
            return "(" + "".join(symbol) + ")"
        return "(" + ",".join(symbol_str(s) for s in symbol) + ")"
    return str(symbol)


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("alphabet must be non-empty")
        index = {s: i for i, s in enumerate(symbols)}
        if len(index) != len(symbols):
            raise ValueError(f"duplicate symbols in alphabet {symbols!r}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", index)

    @classmethod
    def of(cls, symbols: Iterable[Hashable] | str) -> "Alphabet":
        """Build from an iterable; a plain string gives one symbol per character."""
        return cls(tuple(symbols))

    def index(self, symbol: Hashable) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {self}") from None

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __str__(self) -> str:
        return "{" + " ".join(symbol_str(s) for s in self.symbols) + "}"


@dataclass(frozen=True)
class Word:
    letters: tuple
    alphabet: Alphabet

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        unknown = set(letters).difference(self.alphabet.symbols)
        if unknown:
            raise ValueError(
                f"letters {sorted(map(symbol_str, unknown))} not in alphabet {self.alphabet}"
            )

    @classmethod
    def of(cls, alphabet: Alphabet, letters: Iterable[Hashable] | str) -> "Word":
        return cls(tuple(letters), alphabet)

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Word":
        return cls((), alphabet)

    @classmethod
    def from_codes(cls, alphabet: Alphabet, codes: Iterable[int]) -> "Word":
        symbols = alphabet.symbols
        return cls(tuple(symbols[int(c)] for c in codes), alphabet)

    def codes(self) -> np.ndarray:
        """Letter indices as an int64 array."""
        index = self.alphabet._index
        return np.fromiter((index[a] for a in self.letters), dtype=np.int64, count=len(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item], self.alphabet)
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        _same_alphabet(self.alphabet, other.alphabet)
        return Word(self.letters + other.letters, self.alphabet)

    def __mul__(self, n: int) -> "Word":
        return Word(self.letters * n, self.alphabet)

    def __str__(self) -> str:
        parts = [symbol_str(a) for a in self.letters]
        if all(len(p) == 1 for p in parts):
            return "".join(parts)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


def _same_alphabet(a: Alphabet, b: Alphabet) -> None:
    if a != b:
        raise AlphabetMismatch(f"alphabet mismatch: {a} vs {b}")


@dataclass(frozen=True)
class Morphism:
    """A map from ``source`` letters to words over ``target``.

    ``images[i]`` is the image of ``source.symbols[i]``. Images may be empty.
    """

    source: Alphabet
    target: Alphabet
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.source):
            raise ValueError("a morphism needs exactly one rule per source letter")
        for img in images:
            _same_alphabet(img.alphabet, self.target)

    @classmethod
    def from_rules(
        cls,
        rules: Mapping[Hashable, Iterable[Hashable] | str],
        source: Alphabet | None = None,
        target: Alphabet | None = None,
    ) -> "Morphism":
        """``from_rules({"a": "ab", "b": "ba"})`` builds the Thue-Morse morphism.

        Without explicit alphabets the source is the key order and the target
        is the source followed by any new letters in order of appearance.
        """
        if source is None:
            source = Alphabet.of(rules.keys())
        missing = [a for a in source if a not in rules]
        extra = [a for a in rules if a not in source]
        if missing or extra:
            raise ValueError(f"rules do not match the source alphabet (missing {missing}, extra {extra})")
        if target is None:
            seen = dict.fromkeys(source.symbols)
            for a in source:
                seen.update(dict.fromkeys(rules[a]))
            target = Alphabet.of(seen)
        return cls(source, target, tuple(Word.of(target, rules[a]) for a in source))

    def image(self, symbol: Hashable) -> Word:
        return self.images[self.source.index(symbol)]

    def __call__(self, w: Word) -> Word:
        return apply_morphism(self, w)

    @property
    def rules(self) -> dict:
        return dict(zip(self.source.symbols, self.images))

    @property
    def is_letter_to_letter(self) -> bool:
        return all(len(img) == 1 for img in self.images)

    def __str__(self) -> str:
        return ", ".join(f"{symbol_str(a)}->{img}" for a, img in zip(self.source, self.images))


def identity(alphabet: Alphabet) -> Morphism:
    return Morphism(alphabet, alphabet, tuple(Word((a,), alphabet) for a in alphabet))


def apply_morphism(m: Morphism, w: Word) -> Word:
    _same_alphabet(w.alphabet, m.source)
    index = m.source._index
    images = [img.letters for img in m.images]
    out: list = []
    for a in w.letters:
        out.extend(images[index[a]])
    return Word(tuple(out), m.target)


def compose(m1: Morphism, m2: Morphism) -> Morphism:
    """The morphism ``a -> m1(m2(a))``."""
    _same_alphabet(m2.target, m1.source)
    return Morphism(m2.source, m1.target, tuple(apply_morphism(m1, img) for img in m2.images))


def incidence_matrix(m: Morphism) -> np.ndarray:
    """Entry ``(i, j)`` counts target letter ``i`` in the image of source letter ``j``."""
    mat = np.zeros((len(m.target), len(m.source)), dtype=np.int64)
    index = m.target._index
    for j, img in enumerate(m.images):
        for a in img.letters:
            mat[index[a], j] += 1
    return mat


def _window_codes(codes: np.ndarray, n: int, base: int) -> np.ndarray | None:
    """Integer code of every length-n window, or None if it would overflow int64."""
    if n <= 0 or len(codes) < n:
        return np.zeros(0, dtype=np.int64)
    if base ** n >= 2 ** 62:
        return None
    m = len(codes) - n + 1
    out = np.zeros(m, dtype=np.int64)
    for j in range(n):
        out = out * base + codes[j:j + m]
    return out


def factor_counts(w: Word, n: int) -> Counter:
    """Occurrence count of every length-n factor of ``w``, keyed by letter tuples."""
    if n < 1:
        raise ValueError("factor length must be positive")
    if n > len(w):
        return Counter()
    codes = w.codes()
    base = max(len(w.alphabet), 2)
    keys = _window_codes(codes, n, base)
    if keys is None:
        letters = w.letters
        return Counter(letters[i:i + n] for i in range(len(letters) - n + 1))
    values, first, counts = np.unique(keys, return_index=True, return_counts=True)
    letters = w.letters
    return Counter({letters[i:i + n]: int(c) for i, c in zip(first.tolist(), counts.tolist())})


def factors(w: Word, n: int) -> set:
    """Distinct length-n factors of ``w`` as words; empty if ``n > |w|``."""
    if n < 1:
        raise ValueError("factor length must be positive")
    return {Word(f, w.alphabet) for f in factor_counts(w, n)}


def count_occurrences(u: Word, v: Word) -> int:
    """Number of (possibly overlapping) occurrences of ``u`` in ``v``."""
    if len(u) == 0:
        raise ValueError("empty pattern")
    _same_alphabet(u.alphabet, v.alphabet)
    n, m = len(u), len(v)
    if n > m:
        return 0
    vc = v.codes()
    hit = np.ones(m - n + 1, dtype=bool)
    for j, c in enumerate(u.codes().tolist()):
        hit &= vc[j:j + m - n + 1] == c
    return int(hit.sum())


def as_word(alphabet: Alphabet, w: Word | Sequence | str) -> Word:
    """Coerce a string/sequence of symbols into a word (no-op for words)."""
    if isinstance(w, Word):
        _same_alphabet(w.alphabet, alphabet)
        return w
    return Word.of(alphabet, w)
