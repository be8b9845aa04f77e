"""Sliding block codes, their preimages and factor frequencies, and the
frequency side of the Cobham argument.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

from .ndsub import ArrayWindow
from .perron import NotPrimitive, is_primitive, scaling_exponent, word_frequencies
from .recurrence import gap_table, is_ultimately_periodic, multiplicatively_independent
from .substitution import Coding, Substitution, coded_prefix, fixed_point_codes, k_block_substitution, language
from .words import Alphabet, Word, as_word, symbol_str

__all__ = [
    "BlockMap",
    "NdBlockMap",
    "FactorLRReport",
    "CobhamReport",
    "apply_block_map",
    "preimages",
    "factor_frequencies",
    "factor_frequency_table",
    "check_factor_lr",
    "recode",
    "cobham_demo",
]


@dataclass(frozen=True)
class BlockMap:
    """f: A^{2r+1} -> B given as a table; (f(u))_i = f(u[i, i+2r])."""

    radius: int
    source: Alphabet
    target: Alphabet
    table: Mapping

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        table = {tuple(k): v for k, v in dict(self.table).items()}
        width = 2 * self.radius + 1
        for k, v in table.items():
            if len(k) != width:
                raise ValueError(f"block {k} does not have length {width}")
            if any(a not in self.source for a in k):
                raise ValueError(f"block {k} uses letters outside {self.source}")
            if v not in self.target:
                raise ValueError(f"image {v!r} not in {self.target}")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, radius: int, source: Alphabet, target: Alphabet,
                      f: Callable[[tuple], Hashable]) -> "BlockMap":
        blocks = itertools.product(source.symbols, repeat=2 * radius + 1)
        return cls(radius, source, target, {b: f(b) for b in blocks})

    @classmethod
    def from_coding(cls, coding: Coding) -> "BlockMap":
        return cls(0, coding.source, coding.target,
                   {(a,): img.letters[0] for a, img in zip(coding.source, coding.images)})

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def __call__(self, block) -> Hashable:
        try:
            return self.table[tuple(block)]
        except KeyError:
            raise ValueError(f"block map undefined on {''.join(map(symbol_str, block))}") from None


@dataclass(frozen=True)
class NdBlockMap:
    """f on side-R patterns B(0, R); keys are the letters in row-major (axis 0 slowest) order."""

    side: int
    dim: int
    source: Alphabet
    target: Alphabet
    table: Mapping

    def __post_init__(self):
        table = {tuple(k): v for k, v in dict(self.table).items()}
        for k, v in table.items():
            if len(k) != self.side ** self.dim:
                raise ValueError("block size does not match side^dim")
            if v not in self.target:
                raise ValueError(f"image {v!r} not in {self.target}")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_function(cls, side: int, dim: int, source: Alphabet, target: Alphabet,
                      f: Callable[[tuple], Hashable]) -> "NdBlockMap":
        blocks = itertools.product(source.symbols, repeat=side ** dim)
        return cls(side, dim, source, target, {b: f(b) for b in blocks})


def apply_block_map(f: BlockMap | NdBlockMap, w: Word | ArrayWindow):
    """Slide f over w; the result is shorter by 2r (or by R - 1 per axis)."""
    if isinstance(f, NdBlockMap):
        if not isinstance(w, ArrayWindow) or w.d != f.dim:
            raise ValueError("a d-dimensional block map needs a window of the same dimension")
        if any(n < f.side for n in w.shape):
            raise ValueError("window smaller than the block map side")
        windows = np.lib.stride_tricks.sliding_window_view(w.codes, (f.side,) * f.dim)
        out_shape = windows.shape[:f.dim]
        flat = windows.reshape(-1, f.side ** f.dim)
        sym = w.alphabet.symbols
        cache: dict = {}
        out = np.empty(len(flat), dtype=np.int64)
        for i, row in enumerate(map(tuple, flat.tolist())):
            if row not in cache:
                key = tuple(sym[c] for c in row)
                if key not in f.table:
                    raise ValueError("block map undefined on a pattern of the window")
                cache[row] = f.target.index(f.table[key])
            out[i] = cache[row]
        return ArrayWindow(f.target, out.reshape(out_shape), w.origin)
    if not isinstance(w, Word):
        raise ValueError("a one-dimensional block map applies to words")
    if w.alphabet != f.source:
        raise ValueError("word alphabet differs from the block map source")
    if len(w) < f.width:
        raise ValueError(f"input shorter than the block width {f.width}")
    letters = w.letters
    return Word(tuple(f(letters[i:i + f.width]) for i in range(len(letters) - f.width + 1)), f.target)


def preimages(f: BlockMap, u: Word | str, language_words: Iterable) -> set:
    """Words v of the given language (length |u| + 2r) with f(v) = u."""
    u = as_word(f.target, u)
    out = set()
    for v in language_words:
        v = v if isinstance(v, Word) else Word(tuple(v), f.source)
        if len(v) != len(u) + 2 * f.radius:
            continue
        if apply_block_map(f, v).letters == u.letters:
            out.add(v)
    return out


def _require_primitive(s: Substitution) -> None:
    if not is_primitive(s.matrix()):
        raise NotPrimitive("substitution is not primitive")


def factor_frequencies(s: Substitution, f: BlockMap, u: Word | str) -> Fraction | float:
    """freq_Y(u) as the sum of freq_σ(v) over the preimages v of u."""
    _require_primitive(s)
    u = as_word(f.target, u)
    n = len(u) + 2 * f.radius
    table = word_frequencies(s, n)
    return sum((table[v] for v in preimages(f, u, language(s, n))), Fraction(0) if table.exact else 0.0)


def factor_frequency_table(s: Substitution, f: BlockMap, n: int) -> dict:
    """freq_Y(u) for every length-n factor u of the image sequence, by summing preimage frequencies."""
    _require_primitive(s)
    m = n + 2 * f.radius
    table = word_frequencies(s, m)
    out: dict = {}
    for v, fr in table.items():
        u = apply_block_map(f, Word(v, s.alphabet)).letters
        out[u] = out.get(u, 0) + fr
    return out


@dataclass(frozen=True)
class FactorLRReport:
    status: str
    K: int
    n1: int | None
    threshold: int
    max_len: int
    failures: tuple = ()

    def __str__(self) -> str:
        if self.status == "SKIPPED":
            return "SKIPPED: coded sequence is periodic"
        return (f"{self.status} K = {self.K}, bounds hold for {self.n1} <= |u| <= {self.max_len}"
                f" (block-map threshold 2r = {self.threshold})")


def check_factor_lr(s: Substitution, f: BlockMap, max_len: int, K: int,
                    prefix_len: int = 1 << 15) -> FactorLRReport:
    """|u|/2K <= |w| <= 2K|u| and #R_u <= 2K(2K+1)^2 on the coded sequence for |u| >= n1.

    n1 is the least length from which both bounds hold through ``max_len``.
    """
    _require_primitive(s)
    x = Word.from_codes(s.alphabet, fixed_point_codes(s, prefix_len))
    y = apply_block_map(f, x)
    if is_ultimately_periodic(y[: 1 << 14]).status == "PERIODIC":
        return FactorLRReport("SKIPPED", K, None, 2 * f.radius, max_len)
    codes = y.codes()
    base = max(len(f.target), 2)
    bad = []
    for n in range(1, max_len + 1):
        st = gap_table(codes, n, base, count_words=True)
        ok = (st.min_gap * 2 * K >= n and st.max_gap <= 2 * K * n
              and st.max_returns <= 2 * K * (2 * K + 1) ** 2)
        if not ok:
            bad.append(n)
    n1 = (max(bad) + 1) if bad else 1
    status = "PASS" if n1 <= max_len else "FAIL"
    return FactorLRReport(status, K, n1 if n1 <= max_len else None, 2 * f.radius, max_len, tuple(bad))


def recode(s: Substitution, f: BlockMap) -> tuple[Substitution, Coding]:
    """σ_{2r+1} together with the coding (v) -> f(v), which generates f(x)."""
    sk = k_block_substitution(s, f.width)
    coding = Coding.from_map({v: f(v) for v in sk.alphabet}, sk.alphabet, f.target)
    return sk, coding


# --------------------------------------------------------------------------
# Cobham demonstration


@dataclass(frozen=True)
class CobhamReport:
    p: int
    q: int
    independent: bool
    dependence: tuple | None
    status: str
    period: int | None = None
    preperiod: int | None = None
    certified: bool = False
    scaled_p: tuple = ()
    scaled_q: tuple = ()
    frequencies_agree: bool | None = None
    pigeonhole: tuple | None = None
    note: str = ""

    def __str__(self) -> str:
        lines = [f"bases {self.p} and {self.q}: "
                 + ("multiplicatively independent" if self.independent
                    else f"dependent, {self.p}^{self.dependence[0]} = {self.q}^{self.dependence[1]}")]
        if self.status == "PERIODIC":
            cert = ", certified by return words" if self.certified else ""
            lines.append(f"PERIODIC period {self.period} preperiod {self.preperiod}{cert}")
        elif self.status == "ALIGNED":
            lines.append("frequencies agree: " + ("yes" if self.frequencies_agree else "no"))
            lines.append("scaled by p^k: " + " ".join(map(str, self.scaled_p)))
            lines.append("scaled by q^k: " + " ".join(map(str, self.scaled_q)))
            if self.pigeonhole:
                dk, dl = self.pigeonhole
                lines.append(f"pigeonhole: {self.p}^{dk} = {self.q}^{dl}")
        else:
            lines.append(self.status)
        if self.note:
            lines.append(self.note)
        return "\n".join(lines)


def _coded_symbols(s: Substitution, c: Coding, n: int) -> tuple:
    return coded_prefix(s, c, n).letters


def cobham_demo(s1: Substitution, c1: Coding, s2: Substitution, c2: Coding, max_len: int = 16,
                prefix_len: int = 100_000) -> CobhamReport:
    """Check what the Cobham argument predicts for a sequence generated in two ways.

    Independent lengths: the sequence must be ultimately periodic. Dependent
    lengths: both substitutions give the same factor frequencies, and the
    scaled values freq(u) p^k(|u|) and freq(u) q^k'(|u|) repeat as a pair at
    two lengths, exhibiting p^Δk = q^Δl.
    """
    p, q = s1.constant_length, s2.constant_length
    if p is None or q is None:
        raise ValueError("both substitutions must have constant length")
    y1 = _coded_symbols(s1, c1, prefix_len)
    y2 = _coded_symbols(s2, c2, prefix_len)
    if y1 != y2:
        raise ValueError("inputs generate different sequences")
    ind = multiplicatively_independent(p, q)
    if ind.independent:
        seq = Word(y1, c1.target)
        verdict = is_ultimately_periodic(seq[: 1 << 14])
        if verdict.status == "PERIODIC":
            return CobhamReport(p, q, True, None, "PERIODIC", verdict.period, verdict.preperiod,
                                verdict.certified)
        return CobhamReport(p, q, True, None, "COUNTEREXAMPLE CANDIDATE",
                            note="the theorem forces periodicity here, so this points to an implementation error")
    f1, f2 = BlockMap.from_coding(c1), BlockMap.from_coding(c2)
    agree = True
    pairs: dict = {}
    witness = None
    set_p, set_q = set(), set()
    for n in range(1, max_len + 1):
        t1 = factor_frequency_table(s1, f1, n)
        t2 = factor_frequency_table(s2, f2, n)
        agree &= t1 == t2
        k1, k2 = scaling_exponent(s1, n), scaling_exponent(s2, n)
        for fr in t1.values():
            a, b = fr * p ** k1, fr * q ** k2
            set_p.add(a)
            set_q.add(b)
            prev = pairs.setdefault((a, b), (k1, k2))
            if witness is None and prev[0] != k1:
                dk, dl = k1 - prev[0], k2 - prev[1]
                if Fraction(p) ** dk == Fraction(q) ** dl:
                    witness = (dk, dl)
    return CobhamReport(p, q, False, ind.witness, "ALIGNED", scaled_p=tuple(sorted(set_p)),
                        scaled_q=tuple(sorted(set_q)), frequencies_agree=agree, pigeonhole=witness)
