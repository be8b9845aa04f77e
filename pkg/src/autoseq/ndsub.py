"""Substitutions on ℕ^d, finite windows of their fixed arrays, and pattern frequencies.

Windows store letter indices in an integer array whose axis i is the i-th
coordinate. A block of an :class:`NdSubstitution` of side s sends the cell
j to the cells s·j + k, k in [0, s)^d.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, NamedTuple, Sequence

import numpy as np

from .perron import NotPrimitive, is_primitive, perron_data
from .words import Alphabet, symbol_str

__all__ = [
    "ArrayWindow",
    "Pattern",
    "NdSubstitution",
    "EmpiricalFrequency",
    "FreqArrayReport",
    "SpacingReport",
    "expand",
    "fixed_array",
    "ensure_seed",
    "count_pattern",
    "occurrence_mask",
    "pattern_frequency",
    "cube_frequencies",
    "two_cube_substitution",
    "cube_exponent",
    "verify_freq_array",
    "spacing_and_repetitivity_check",
]


@dataclass(frozen=True, eq=False)
class ArrayWindow:
    """Letters on the box origin + [0, shape)."""

    alphabet: Alphabet
    codes: np.ndarray
    origin: tuple = None

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int64)
        if codes.ndim < 1:
            raise ValueError("a window has at least one axis")
        if codes.size and (codes.min() < 0 or codes.max() >= len(self.alphabet)):
            raise ValueError("window entries must be letter indices of the alphabet")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        origin = (0,) * codes.ndim if self.origin is None else tuple(int(c) for c in self.origin)
        if len(origin) != codes.ndim:
            raise ValueError("origin dimension does not match the window")
        object.__setattr__(self, "origin", origin)

    @classmethod
    def from_letters(cls, alphabet: Alphabet, letters, origin=None) -> "ArrayWindow":
        """``letters`` is a nested sequence indexed [x1][x2]...; a string that is not a symbol is split into characters."""
        arr = np.array(_nested(letters, alphabet), dtype=object)
        codes = np.vectorize(alphabet.index, otypes=[np.int64])(arr) if arr.size else arr.astype(np.int64)
        return cls(alphabet, codes, origin)

    @property
    def d(self) -> int:
        return self.codes.ndim

    @property
    def shape(self) -> tuple:
        return self.codes.shape

    def __getitem__(self, pos) -> Hashable:
        local = tuple(int(p) - o for p, o in zip(pos, self.origin))
        if any(not 0 <= c < n for c, n in zip(local, self.shape)):
            raise IndexError(f"{tuple(pos)} outside the window")
        return self.alphabet.symbols[self.codes[local]]

    def letters(self) -> np.ndarray:
        return np.array(self.alphabet.symbols, dtype=object)[self.codes]

    def restrict(self, origin: Sequence[int], shape: Sequence[int]) -> "ArrayWindow":
        local = [o - so for o, so in zip(origin, self.origin)]
        if any(l < 0 or l + n > m for l, n, m in zip(local, shape, self.shape)):
            raise IndexError("restriction box leaves the window")
        sl = tuple(slice(l, l + n) for l, n in zip(local, shape))
        return ArrayWindow(self.alphabet, self.codes[sl], tuple(origin))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ArrayWindow) and self.alphabet == other.alphabet
                and self.origin == other.origin and np.array_equal(self.codes, other.codes))

    def __hash__(self):
        return hash((self.alphabet, self.origin, self.codes.shape, self.codes.tobytes()))

    def __str__(self) -> str:
        if self.d != 2:
            return repr(self.letters().tolist())
        sym = [symbol_str(a) for a in self.alphabet]
        sep = "" if all(len(x) == 1 for x in sym) else " "
        # one line per axis-2 index, axis 1 along the line
        return "\n".join(sep.join(sym[c] for c in row) for row in self.codes.T)


def _is_symbol(x, alphabet: Alphabet) -> bool:
    try:
        return x in alphabet
    except TypeError:
        return False


def _nested(x, alphabet: Alphabet):
    # a string that is not itself a symbol is a row of one-character symbols
    if _is_symbol(x, alphabet):
        return x
    if isinstance(x, str):
        return list(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_nested(y, alphabet) for y in x]
    return x


@dataclass(frozen=True)
class Pattern:
    """Letters on a finite support containing the origin."""

    support: tuple
    values: tuple

    def __post_init__(self):
        support = tuple(tuple(int(c) for c in v) for v in self.support)
        values = tuple(self.values)
        if len(support) != len(values):
            raise ValueError("one value per support vector")
        if len(set(support)) != len(support):
            raise ValueError("support vectors must be distinct")
        if not support:
            raise ValueError("a pattern has non-empty support")
        d = len(support[0])
        if any(len(v) != d for v in support):
            raise ValueError("support vectors must share a dimension")
        if (0,) * d not in support:
            raise ValueError("support must contain the zero vector")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_window(cls, w: ArrayWindow) -> "Pattern":
        support = list(itertools.product(*(range(n) for n in w.shape)))
        return cls(tuple(support), tuple(w.alphabet.symbols[w.codes[v]] for v in support))

    @classmethod
    def cube(cls, alphabet: Alphabet, letters) -> "Pattern":
        return cls.from_window(ArrayWindow.from_letters(alphabet, letters))

    @property
    def d(self) -> int:
        return len(self.support[0])

    def __len__(self) -> int:
        return len(self.support)

    def bounds(self) -> tuple[tuple, tuple]:
        arr = np.array(self.support)
        return tuple(arr.min(axis=0).tolist()), tuple(arr.max(axis=0).tolist())

    def is_cubic(self) -> bool:
        lo, hi = self.bounds()
        sides = {h - l + 1 for l, h in zip(lo, hi)}
        return len(sides) == 1 and len(self) == sides.pop() ** self.d


@dataclass(frozen=True, eq=False)
class NdSubstitution:
    """``blocks[b]`` is the side-s block S(b), as letter indices with one axis per coordinate."""

    alphabet: Alphabet
    side: int
    blocks: np.ndarray
    seed: Hashable = None

    def __post_init__(self):
        blocks = np.array(self.blocks, dtype=np.int64)
        n = len(self.alphabet)
        if self.side < 2:
            raise ValueError("side must be at least 2")
        if blocks.ndim < 2 or blocks.shape[0] != n or any(x != self.side for x in blocks.shape[1:]):
            raise ValueError(f"need one block of side {self.side} per letter")
        if blocks.min() < 0 or blocks.max() >= n:
            raise ValueError("block entries must be letters of the alphabet")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)
        if self.seed is None:
            corner = self.corner_map()
            fixed = [a for i, a in enumerate(self.alphabet) if corner[i] == i]
            object.__setattr__(self, "seed", fixed[0] if fixed else self.alphabet.symbols[0])
        elif self.seed not in self.alphabet:
            raise ValueError(f"seed {self.seed!r} not in alphabet")

    @classmethod
    def from_rules(cls, rules: Mapping, side: int, seed: Hashable = None,
                   alphabet: Alphabet | None = None) -> "NdSubstitution":
        """``rules[a]`` is a nested sequence indexed [k1][k2]... giving S(a)(k)."""
        if alphabet is None:
            alphabet = Alphabet.of(rules.keys())
        blocks = [ArrayWindow.from_letters(alphabet, rules[a]).codes for a in alphabet]
        return cls(alphabet, side, np.stack(blocks), seed)

    @property
    def d(self) -> int:
        return self.blocks.ndim - 1

    @property
    def theta(self) -> int:
        return self.side ** self.d

    def corner_map(self) -> list[int]:
        origin = (0,) * (self.blocks.ndim - 1)
        return [int(self.blocks[(i,) + origin]) for i in range(len(self.alphabet))]

    def block(self, a: Hashable) -> ArrayWindow:
        return ArrayWindow(self.alphabet, self.blocks[self.alphabet.index(a)])

    def matrix(self) -> np.ndarray:
        """M[a, b] = number of cells of S(b) carrying a."""
        n = len(self.alphabet)
        flat = self.blocks.reshape(n, -1)
        M = np.zeros((n, n), dtype=np.int64)
        for b in range(n):
            M[:, b] = np.bincount(flat[b], minlength=n)
        return M

    def power(self, m: int) -> "NdSubstitution":
        if m < 1:
            raise ValueError("power must be positive")
        cells = np.arange(len(self.alphabet)).reshape((-1,) + (1,) * self.d)
        out = np.stack([_expand_codes(self.blocks, c, m) for c in cells])
        return NdSubstitution(self.alphabet, self.side ** m, out, self.seed)

    def with_seed(self, seed: Hashable) -> "NdSubstitution":
        return NdSubstitution(self.alphabet, self.side, self.blocks, seed)

    def __eq__(self, other) -> bool:
        return (isinstance(other, NdSubstitution) and self.alphabet == other.alphabet
                and self.side == other.side and self.seed == other.seed
                and np.array_equal(self.blocks, other.blocks))

    def __hash__(self):
        return hash((self.alphabet, self.side, self.seed, self.blocks.tobytes()))


def _expand_codes(blocks: np.ndarray, codes: np.ndarray, times: int = 1) -> np.ndarray:
    d = blocks.ndim - 1
    s = blocks.shape[1]
    for _ in range(times):
        big = blocks[codes]  # shape (*codes.shape, s, ..., s)
        order = [ax for i in range(d) for ax in (i, d + i)]
        codes = big.transpose(order).reshape(tuple(n * s for n in codes.shape))
    return codes


def expand(S: NdSubstitution, w: ArrayWindow) -> ArrayWindow:
    """S(w): the cell m = s·j + k of the result is S(w(j))(k)."""
    if w.alphabet != S.alphabet:
        raise ValueError("window alphabet differs from the substitution alphabet")
    if w.d != S.d:
        raise ValueError("window dimension differs from the substitution dimension")
    origin = tuple(o * S.side for o in w.origin)
    return ArrayWindow(S.alphabet, _expand_codes(S.blocks, w.codes), origin)


def ensure_seed(S: NdSubstitution) -> tuple[NdSubstitution, int]:
    """A power S^m whose seed letter sits at the origin of its own block.

    Returns (S^m, m); m = 1 and S itself when the seed already qualifies.
    Otherwise m is the least cycle length of the corner map a -> S(a)(0),
    and the seed becomes the first letter on such a cycle.
    """
    corner = S.corner_map()
    seed = S.alphabet.index(S.seed)
    if corner[seed] == seed:
        return S, 1
    n = len(corner)
    for m in range(2, n + 1):
        for a in range(n):
            b = a
            for _ in range(m):
                b = corner[b]
            if b == a:
                return S.power(m).with_seed(S.alphabet.symbols[a]), m
    raise ValueError("no power of the substitution has a seed letter")


def fixed_array(S: NdSubstitution, n: int) -> ArrayWindow:
    """The window Sⁿ(seed) of side sⁿ (using S^m from :func:`ensure_seed` if needed)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    T, _ = ensure_seed(S)
    cell = np.full((1,) * S.d, T.alphabet.index(T.seed), dtype=np.int64)
    return ArrayWindow(S.alphabet, _expand_codes(T.blocks, cell, n))


# --------------------------------------------------------------------------
# counting


def occurrence_mask(w: ArrayWindow, P: Pattern) -> tuple[np.ndarray, tuple]:
    """Boolean array over admissible anchors v, plus the offset of its first entry."""
    if P.d != w.d:
        raise ValueError("pattern and window dimensions differ")
    lo, hi = P.bounds()
    shape = tuple(n - (h - l) for n, l, h in zip(w.shape, lo, hi))
    offset = tuple(o - l for o, l in zip(w.origin, lo))
    if any(x <= 0 for x in shape):
        return np.zeros((0,) * w.d, dtype=bool), offset
    hit = np.ones(shape, dtype=bool)
    for x, a in zip(P.support, P.values):
        if a not in w.alphabet:
            return np.zeros(shape, dtype=bool), offset
        c = w.alphabet.index(a)
        sl = tuple(slice(xi - l, xi - l + m) for xi, l, m in zip(x, lo, shape))
        hit &= w.codes[sl] == c
    return hit, offset


def count_pattern(w: ArrayWindow, P: Pattern) -> int:
    """Number of v with v + supp(P) inside the window and w(v + x) = P(x)."""
    hit, _ = occurrence_mask(w, P)
    return int(hit.sum())


def _cube_keys(codes: np.ndarray, R: int, anchors: Sequence[int] | None = None) -> dict:
    """Count side-R subcubes of ``codes`` (anchored in [0, anchors) per axis), keyed by bytes."""
    d = codes.ndim
    if anchors is None:
        anchors = tuple(n - R + 1 for n in codes.shape)
    if any(a <= 0 for a in anchors):
        return {}
    windows = np.lib.stride_tricks.sliding_window_view(codes, (R,) * d)
    windows = windows[tuple(slice(0, a) for a in anchors)]
    flat = np.ascontiguousarray(windows.reshape(-1, R ** d)).astype(np.int16)
    keys, counts = np.unique(flat, axis=0, return_counts=True)
    return {k.tobytes(): (k, int(c)) for k, c in zip(keys, counts)}


def _cube_from_flat(alphabet: Alphabet, flat: np.ndarray, R: int, d: int) -> ArrayWindow:
    return ArrayWindow(alphabet, flat.astype(np.int64).reshape((R,) * d))


def cube_exponent(side: int, R: int) -> int:
    """Smallest k with side^(k-1) <= R < side^k."""
    if R < 1:
        raise ValueError("R must be positive")
    k = 1
    while side ** k <= R:
        k += 1
    return k


def _require_primitive(S: NdSubstitution) -> None:
    if not is_primitive(S.matrix()):
        raise NotPrimitive("substitution is not primitive")


def two_cube_substitution(S: NdSubstitution) -> tuple[NdSubstitution, list[ArrayWindow]]:
    """The induced substitution on side-2 cubes.

    Its alphabet is the set of side-2 cubes of the fixed array, found by
    closure; the image of B lists the side-2 cubes of S(B) anchored at
    k in [0, s)^d. Returns the substitution and the cubes in alphabet order.
    """
    d, s = S.d, S.side
    start = _expand_codes(S.blocks, np.full((1,) * d, S.alphabet.index(S.seed)), 1)
    found = {k: v for k, (v, _) in _cube_keys(start, 2).items()}
    todo = list(found)
    while todo:
        key = todo.pop()
        cube = found[key].astype(np.int64).reshape((2,) * d)
        for k2, (v, _) in _cube_keys(_expand_codes(S.blocks, cube), 2, (s,) * d).items():
            if k2 not in found:
                found[k2] = v
                todo.append(k2)
    keys = sorted(found, key=lambda k: tuple(found[k].tolist()))
    index = {k: i for i, k in enumerate(keys)}
    cubes = [_cube_from_flat(S.alphabet, found[k], 2, d) for k in keys]
    blocks = []
    for cube in cubes:
        big = _expand_codes(S.blocks, cube.codes)
        windows = np.lib.stride_tricks.sliding_window_view(big, (2,) * d)[tuple(slice(0, s) for _ in range(d))]
        flat = np.ascontiguousarray(windows.reshape((s,) * d + (2 ** d,))).astype(np.int16)
        img = np.empty((s,) * d, dtype=np.int64)
        for pos in itertools.product(range(s), repeat=d):
            img[pos] = index[flat[pos].tobytes()]
        blocks.append(img)
    letters = Alphabet(tuple(range(len(cubes))))
    return NdSubstitution(letters, s, np.stack(blocks), 0), cubes


def cube_frequencies(S: NdSubstitution, R: int) -> dict:
    """Exact frequencies of all side-R cubic patterns, keyed by their windows.

    freq(P) = Σ_B N(k, P, B) freq(B) θ^{-k}, with B ranging over side-2
    cubes, freq(B) from the Perron vector of the induced substitution,
    k = cube_exponent(s, R) and N counting occurrences of P in Sᵏ(B)
    anchored in [0, sᵏ)^d.
    """
    _require_primitive(S)
    d, s = S.d, S.side
    S2, cubes = two_cube_substitution(S)
    weights = perron_data(S2.matrix()).right
    k = cube_exponent(s, R)
    scale = Fraction(S.theta) ** k
    totals: dict = {}
    for cube, f in zip(cubes, weights):
        big = _expand_codes(S.blocks, cube.codes, k)
        for key, (flat, c) in _cube_keys(big, R, (s ** k,) * d).items():
            if key in totals:
                totals[key][1] += c * f
            else:
                totals[key] = [flat, c * f]
    out = {}
    for key in sorted(totals, key=lambda k: tuple(totals[k][0].tolist())):
        flat, f = totals[key]
        out[_cube_from_flat(S.alphabet, flat, R, d)] = f / scale
    return out


class EmpiricalFrequency(NamedTuple):
    value: float
    previous: float
    n: int


def pattern_frequency(S: NdSubstitution, P: Pattern, mode: str = "exact", max_side: int = 1 << 10):
    """Frequency of a pattern in the fixed array.

    ``exact`` returns a Fraction (the pattern is placed in its bounding cube
    and the frequencies of the cubes extending it are summed). ``empirical``
    divides the count in Sⁿ(seed) by θⁿ for the largest n with sⁿ <= max_side.
    """
    _require_primitive(S)
    if P.d != S.d:
        raise ValueError("pattern and substitution dimensions differ")
    if mode == "empirical":
        n = 0
        while S.side ** (n + 1) <= max_side:
            n += 1
        prev = count_pattern(fixed_array(S, n - 1), P) / S.theta ** (n - 1) if n else float("nan")
        value = count_pattern(fixed_array(S, n), P) / S.theta ** n
        return EmpiricalFrequency(value, prev, n)
    if mode != "exact":
        raise ValueError("mode must be 'exact' or 'empirical'")
    lo, hi = P.bounds()
    R = max(h - l + 1 for l, h in zip(lo, hi))
    total = Fraction(0)
    for cube, f in cube_frequencies(S, R).items():
        if all(a in S.alphabet for a in P.values):
            if all(cube.codes[tuple(x - l for x, l in zip(v, lo))] == S.alphabet.index(a)
                   for v, a in zip(P.support, P.values)):
                total += f
    return total


@dataclass(frozen=True)
class FreqArrayReport:
    max_r: int
    compare_r: int
    theta: int
    exponents: dict
    counts: dict
    values: tuple
    values_at_compare: tuple
    periodic: bool

    @property
    def cardinality(self) -> int:
        return len(self.values)

    @property
    def stable(self) -> bool:
        return self.values == self.values_at_compare


def verify_freq_array(S: NdSubstitution, max_r: int, compare_r: int | None = None) -> FreqArrayReport:
    """{freq(P) θ^{k(R)} : P a side-R cube, R <= max_r} and its stabilization."""
    _require_primitive(S)
    if compare_r is None:
        compare_r = max(1, max_r // 2)
    exponents, counts = {}, {}
    seen: set = set()
    snapshot = ()
    periodic = False
    for R in range(1, max_r + 1):
        k = cube_exponent(S.side, R)
        exponents[R] = k
        freqs = cube_frequencies(S, R)
        counts[R] = len(freqs)
        if len(freqs) <= R:
            periodic = True
        seen |= {f * S.theta ** k for f in freqs.values()}
        if R == compare_r:
            snapshot = tuple(sorted(seen))
    return FreqArrayReport(max_r, compare_r, S.theta, exponents, counts, tuple(sorted(seen)),
                           snapshot, periodic)


# --------------------------------------------------------------------------
# repetitivity


def _box_any(mask: np.ndarray, width: int) -> np.ndarray:
    """For each v with v + [0, width)^d inside, whether mask is true somewhere in that box."""
    c = mask.astype(np.int64)
    for ax in range(mask.ndim):
        c = np.cumsum(c, axis=ax)
        pad = [(0, 0)] * mask.ndim
        pad[ax] = (1, 0)
        c = np.pad(c, pad)
        n = c.shape[ax]
        upper = np.take(c, range(width, n), axis=ax)
        lower = np.take(c, range(0, n - width), axis=ax)
        c = upper - lower
    return c > 0


def _min_window(mask: np.ndarray, R: int, limit: int) -> int | None:
    """Least W such that every side-W window of the array contains an occurrence (side-R pattern)."""
    for W in range(R, limit + 1):
        if W - R + 1 > mask.shape[0]:
            return None
        if _box_any(mask, W - R + 1).all():
            return W
    return None


def _min_distance(mask: np.ndarray, R: int) -> int:
    """Least sup-norm distance between two distinct occurrences, capped at R."""
    d = mask.ndim
    for dist in range(1, R):
        for delta in itertools.product(range(-dist, dist + 1), repeat=d):
            if max(abs(x) for x in delta) != dist:
                continue
            a = tuple(slice(max(0, -x), mask.shape[i] - max(0, x)) for i, x in enumerate(delta))
            b = tuple(slice(max(0, x), mask.shape[i] - max(0, -x)) for i, x in enumerate(delta))
            if (mask[a] & mask[b]).any():
                return dist
    return R


@dataclass(frozen=True)
class SpacingReport:
    max_r: int
    window_sides: tuple
    k_hat: tuple
    k_prime_hat: tuple
    per_r: dict
    periodic: bool

    @property
    def stable(self) -> bool:
        return len(set(self.k_hat)) == 1 and len(set(self.k_prime_hat)) == 1


def _is_window_periodic(codes: np.ndarray, reach: int = 2) -> bool:
    d = codes.ndim
    for delta in itertools.product(range(0, reach + 1), repeat=d):
        if not any(delta):
            continue
        a = tuple(slice(0, n - x) for n, x in zip(codes.shape, delta))
        b = tuple(slice(x, n) for n, x in zip(codes.shape, delta))
        if np.array_equal(codes[a], codes[b]):
            return True
    return False


def spacing_and_repetitivity_check(S: NdSubstitution, max_r: int, n: int | None = None) -> SpacingReport:
    """Empirical repetitivity constant K and spacing constant K'.

    K: least constant with every side-K·R window containing every side-R
    cube of the language. K': least constant with distinct occurrences of a
    side-R cube at sup-distance >= R/K'. Both are measured on Sⁿ(seed) and
    S^{n+1}(seed); the report keeps both values.
    """
    _require_primitive(S)
    if n is None:
        n = 1
        while S.side ** n < 16 * max_r:
            n += 1
        while S.side ** (n * S.d) > 1 << 20 and n > 1:
            n -= 1
    sides, ks, kps = [], [], []
    per_r: dict = {}
    periodic = False
    for level in (n, n + 1):
        w = fixed_array(S, level)
        sides.append(w.shape[0])
        periodic = periodic or _is_window_periodic(w.codes)
        K, Kp = Fraction(0), Fraction(0)
        for R in range(1, max_r + 1):
            worst_w, worst_d = 0, R
            for cube in cube_frequencies(S, R):
                mask, _ = occurrence_mask(w, Pattern.from_window(cube))
                W = _min_window(mask, R, w.shape[0])
                if W is None:
                    raise ValueError("window too small to measure repetitivity; raise n")
                worst_w = max(worst_w, W)
                worst_d = min(worst_d, _min_distance(mask, R))
            per_r.setdefault(R, []).append((worst_w, worst_d))
            K = max(K, Fraction(worst_w, R))
            Kp = max(Kp, Fraction(R, worst_d))
        ks.append(K)
        kps.append(Kp)
    return SpacingReport(max_r, tuple(sides), tuple(ks), tuple(kps), per_r, periodic)
