"""One-dimensional substitutions and the constructions built on them.

A :class:`Substitution` is an endomorphism with a seed letter. Its fixed
point is only ever exposed as a finite prefix.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple

import numpy as np

from .words import (
    Alphabet,
    Morphism,
    Word,
    apply_morphism,
    as_word,
    compose,
    incidence_matrix,
    symbol_str,
)

__all__ = [
    "Substitution",
    "Coding",
    "ValidityReport",
    "InvalidSubstitution",
    "PrimitiveComponent",
    "validate",
    "fixed_point_prefix",
    "fixed_point_codes",
    "coded_prefix",
    "language",
    "k_block_substitution",
    "primitive_component",
    "periodic_to_substitution",
    "indicator_coding",
    "non_growing_letters",
]


class InvalidSubstitution(ValueError):
    pass


@dataclass(frozen=True)
class Coding(Morphism):
    """A letter-to-letter morphism."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_letter_to_letter:
            raise ValueError("a coding maps every letter to exactly one letter")

    @classmethod
    def from_map(cls, mapping: Mapping[Hashable, Hashable], source: Alphabet | None = None,
                 target: Alphabet | None = None) -> "Coding":
        if source is None:
            source = Alphabet.of(mapping.keys())
        if target is None:
            target = Alphabet.of(dict.fromkeys(mapping[a] for a in source))
        return cls(source, target, tuple(Word((mapping[a],), target) for a in source))

    def letter(self, a: Hashable) -> Hashable:
        return self.image(a).letters[0]


@dataclass(frozen=True)
class Substitution:
    morphism: Morphism
    seed: Hashable = None

    def __post_init__(self):
        m = self.morphism
        if m.source != m.target:
            raise ValueError("a substitution maps an alphabet to words over itself")
        if self.seed is None:
            starts = [a for a, img in zip(m.source, m.images) if len(img) and img[0] == a]
            object.__setattr__(self, "seed", starts[0] if starts else m.source.symbols[0])
        elif self.seed not in m.source:
            raise ValueError(f"seed {self.seed!r} not in alphabet {m.source}")

    @classmethod
    def from_rules(cls, rules: Mapping[Hashable, Iterable | str], seed: Hashable = None,
                   alphabet: Alphabet | None = None) -> "Substitution":
        if alphabet is None:
            alphabet = Alphabet.of(rules.keys())
        return cls(Morphism.from_rules(rules, alphabet, alphabet), seed)

    @property
    def alphabet(self) -> Alphabet:
        return self.morphism.source

    @property
    def images(self) -> tuple:
        return self.morphism.images

    def image(self, a: Hashable) -> Word:
        return self.morphism.image(a)

    def __call__(self, w: Word) -> Word:
        return apply_morphism(self.morphism, w)

    @property
    def constant_length(self) -> int | None:
        lengths = {len(img) for img in self.images}
        return lengths.pop() if len(lengths) == 1 else None

    def matrix(self) -> np.ndarray:
        return incidence_matrix(self.morphism)

    def power(self, n: int) -> "Substitution":
        if n < 1:
            raise ValueError("power must be positive")
        m = self.morphism
        for _ in range(n - 1):
            m = compose(self.morphism, m)
        return Substitution(m, self.seed)

    def word(self, letters) -> Word:
        return as_word(self.alphabet, letters)

    def __str__(self) -> str:
        return ", ".join(f"{symbol_str(a)}->{img}" for a, img in zip(self.alphabet, self.images))


# --------------------------------------------------------------------------
# validity


def _mortal_letters(images: list[list[int]]) -> set[int]:
    mortal: set[int] = set()
    changed = True
    while changed:
        changed = False
        for b, img in enumerate(images):
            if b not in mortal and all(c in mortal for c in img):
                mortal.add(b)
                changed = True
    return mortal


def _reachable(graph: list[set[int]], start: int) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        for c in graph[todo.pop()]:
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return seen


def non_growing_letters(s: Substitution) -> tuple:
    """Letters b for which |σⁿ(b)| does not tend to infinity.

    Mortal letters (eventually erased) are dropped first. After that every
    image is non-empty and b grows iff some letter on a cycle reachable
    from b has an image of length at least 2.
    """
    images = [img.codes().tolist() for img in s.images]
    mortal = _mortal_letters(images)
    reduced = [[c for c in img if c not in mortal] for img in images]
    graph = [set(img) for img in reduced]
    n = len(images)
    reach = [_reachable(graph, b) for b in range(n)]
    cyclic = {c for c in range(n) if any(c in reach[d] for d in graph[c])}
    expanding = {c for c in cyclic if len(reduced[c]) >= 2}
    out = []
    for b in range(n):
        if b in mortal or not (reach[b] & expanding):
            out.append(s.alphabet.symbols[b])
    return tuple(out)


@dataclass(frozen=True)
class ValidityReport:
    seed: Hashable
    seed_starts_image: bool
    self_starting: tuple
    non_growing: tuple

    @property
    def valid(self) -> bool:
        return self.seed_starts_image and not self.non_growing

    @property
    def violations(self) -> list[str]:
        out = []
        if not self.seed_starts_image:
            if self.self_starting:
                out.append(
                    f"seed {symbol_str(self.seed)} is not the first letter of its image "
                    f"(candidates: {' '.join(map(symbol_str, self.self_starting))})"
                )
            else:
                out.append("no letter is the first letter of its own image")
        if self.non_growing:
            out.append("non-growing letters: " + " ".join(map(symbol_str, self.non_growing)))
        return out


def validate(s: Substitution) -> ValidityReport:
    starts = tuple(a for a, img in zip(s.alphabet, s.images) if len(img) and img[0] == a)
    return ValidityReport(s.seed, s.seed in starts, starts, non_growing_letters(s))


def _require_valid(s: Substitution) -> None:
    report = validate(s)
    if not report.valid:
        raise InvalidSubstitution("; ".join(report.violations))


# --------------------------------------------------------------------------
# fixed points


def fixed_point_codes(s: Substitution, n: int, check: bool = True) -> np.ndarray:
    """Letter indices of the first ``n`` letters of the fixed point."""
    if check:
        _require_valid(s)
    seed = s.alphabet.index(s.seed)
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    p = s.constant_length
    if p is not None:
        table = np.array([img.codes() for img in s.images], dtype=np.int64)
        w = np.array([seed], dtype=np.int64)
        while len(w) < n:
            need = -(-n // p)
            w = table[w[:need]].ravel()
        return w[:n].copy()
    images = [img.codes().tolist() for img in s.images]
    w = [seed]
    while len(w) < n:
        out: list[int] = []
        for c in w:
            out.extend(images[c])
            if len(out) >= n:
                break
        if len(out) <= len(w):
            raise InvalidSubstitution("fixed point iteration does not grow")
        w = out
    return np.array(w[:n], dtype=np.int64)


def fixed_point_prefix(s: Substitution, n: int) -> Word:
    """The first ``n`` letters of the fixed point starting with the seed."""
    return Word.from_codes(s.alphabet, fixed_point_codes(s, n))


def coded_prefix(s: Substitution, coding: Morphism, n: int) -> Word:
    """First ``n`` letters of the image of the fixed point under a coding."""
    if coding.source != s.alphabet:
        raise ValueError("coding source must be the substitution alphabet")
    table = [img.letters[0] for img in coding.images]
    return Word(tuple(table[c] for c in fixed_point_codes(s, n).tolist()), coding.target)


# --------------------------------------------------------------------------
# factor languages and the k-block substitution


def _iterate_codes(images: list[list[int]], w: list[int]) -> list[int]:
    out: list[int] = []
    for c in w:
        out.extend(images[c])
    return out


def language(s: Substitution, k: int) -> list[tuple]:
    """Length-k factors of the fixed point, as letter tuples in lexicographic order.

    Closure: start from the k-factors of σᵐ(seed) with |σᵐ(seed)| >= k and
    add the k-factors of σ(u) for every u found so far. Each k-factor of
    σⁿ⁺¹(seed) lies inside σ(v) for a k-factor v of σⁿ(seed), so the closure
    is exactly the set of k-factors of the fixed point.
    """
    if k < 1:
        raise ValueError("factor length must be positive")
    _require_valid(s)
    images = [img.codes().tolist() for img in s.images]
    w = [s.alphabet.index(s.seed)]
    while len(w) < k:
        w = _iterate_codes(images, w)
    found = {tuple(w[i:i + k]) for i in range(len(w) - k + 1)}
    todo = deque(found)
    while todo:
        v = _iterate_codes(images, list(todo.popleft()))
        for i in range(len(v) - k + 1):
            f = tuple(v[i:i + k])
            if f not in found:
                found.add(f)
                todo.append(f)
    sym = s.alphabet.symbols
    return [tuple(sym[c] for c in f) for f in sorted(found)]


def k_block_substitution(s: Substitution, k: int) -> Substitution:
    """The substitution σ_k on length-k factors.

    σ_k((u)) lists the first |σ(u₁)| length-k factors of σ(u).
    """
    blocks = language(s, k)
    alphabet = Alphabet(tuple(blocks))
    images = []
    for u in blocks:
        v = s(Word(u, s.alphabet)).letters
        p = len(s.image(u[0]))
        images.append(Word(tuple(v[i:i + k] for i in range(p)), alphabet))
    seed = tuple(fixed_point_prefix(s, k).letters)
    return Substitution(Morphism(alphabet, alphabet, tuple(images)), seed)


def indicator_coding(s: Substitution, k: int, u: Word | str) -> tuple[Substitution, Coding]:
    """σ_k together with the coding that marks the block equal to ``u``.

    The coded fixed point is the occurrence indicator of ``u`` in the fixed
    point of ``s``.
    """
    u = as_word(s.alphabet, u)
    if len(u) != k:
        raise ValueError(f"indicator word must have length {k}")
    sk = k_block_substitution(s, k)
    if u.letters not in sk.alphabet:
        raise ValueError(f"{u} is not a factor of the fixed point")
    bits = Alphabet((0, 1))
    coding = Coding.from_map({b: int(b == u.letters) for b in sk.alphabet}, sk.alphabet, bits)
    return sk, coding


# --------------------------------------------------------------------------
# primitive component


class PrimitiveComponent(NamedTuple):
    power: int
    alphabet: Alphabet
    substitution: Substitution


def _strong_components(graph: list[set[int]]) -> list[set[int]]:
    n = len(graph)
    reach = [_reachable(graph, b) for b in range(n)]
    comps: list[set[int]] = []
    done: set[int] = set()
    for b in range(n):
        if b in done:
            continue
        comp = {c for c in reach[b] if b in reach[c]}
        comps.append(comp)
        done |= comp
    return comps


def _restrict(images: list[list[int]], letters: list[int]) -> list[list[int]]:
    return [images[c] for c in letters]


def primitive_component(s: Substitution) -> PrimitiveComponent:
    """A power k and a sub-alphabet on which σᵏ restricts to a primitive substitution.

    Takes the first closed (terminal) strongly connected component of the
    letter graph reachable from the seed, keeps one cyclic class of it
    (raising σ to the period), then raises further so the restriction has a
    letter starting its own image.
    """
    _require_valid(s)
    images = [img.codes().tolist() for img in s.images]
    graph = [set(img) for img in images]
    from_seed = _reachable(graph, s.alphabet.index(s.seed))
    terminal = [c for c in _strong_components(graph)
                if c <= from_seed and all(graph[b] <= c for b in c)]
    comp = min(terminal, key=min)
    start = min(comp)
    level = {start: 0}
    todo = deque([start])
    period = 0
    while todo:
        b = todo.popleft()
        for c in graph[b]:
            if c not in level:
                level[c] = level[b] + 1
                todo.append(c)
            else:
                period = math.gcd(period, level[b] + 1 - level[c])
    period = abs(period) or 1
    cls = sorted(c for c in comp if level[c] % period == 0)

    def power_images(w: list[int], n: int) -> list[int]:
        for _ in range(n):
            w = _iterate_codes(images, w)
        return w

    h_images = {c: power_images([c], period) for c in cls}
    first = {c: h_images[c][0] for c in cls}
    seen: dict[int, int] = {}
    c = start
    while c not in seen:
        seen[c] = len(seen)
        c = first[c]
    cycle_len = len(seen) - seen[c]
    new_seed = c
    k = period * cycle_len
    sym = s.alphabet.symbols
    sub_alphabet = Alphabet(tuple(sym[c] for c in cls))
    rules = {}
    for b in cls:
        w = [b]
        for _ in range(cycle_len):
            w = [x for y in w for x in h_images[y]]
        rules[sym[b]] = [sym[x] for x in w]
    sub = Substitution.from_rules(rules, seed=sym[new_seed], alphabet=sub_alphabet)
    return PrimitiveComponent(k, sub_alphabet, sub)


# --------------------------------------------------------------------------
# ultimately periodic sequences are p-substitutive


def periodic_to_substitution(u: Word, v: Word, p: int) -> tuple[Substitution, Coding]:
    """A constant-length-p substitution and coding generating u v v v ...

    The preperiod and period are re-blocked into words of a common length
    L = p*l, the least multiple of lcm(p, |v|) that is at least |u| (and at
    least 1). Letters a_0..a_{2L-1} index the positions of those two blocks.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if len(v) == 0:
        raise ValueError("the periodic part must be non-empty")
    if u.alphabet != v.alphabet:
        raise ValueError("u and v must share an alphabet")
    step = p * len(v) // math.gcd(p, len(v))
    L = max(1, -(-len(u) // step)) * step
    l = L // p
    target = u.letters + v.letters * (-(-(2 * L - len(u)) // len(v)))
    target = target[:2 * L]
    letters = tuple(f"a{k}" for k in range(2 * L))
    alphabet = Alphabet(letters)
    rules = {}
    for k in range(2 * L):
        if k < l:
            start = k * p
        else:
            start = L + (k % l) * p
        rules[letters[k]] = letters[start:start + p]
    sub = Substitution.from_rules(rules, seed=letters[0], alphabet=alphabet)
    coding = Coding.from_map(dict(zip(letters, target)), alphabet, u.alphabet)
    return sub, coding
