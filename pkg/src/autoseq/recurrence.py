"""Return words, linear recurrence, complexity, periodicity, and the
multiplicative facts behind the density argument.

Everything here looks at finite prefixes. Quantities that describe the
infinite sequence are recomputed on a doubled prefix and reported as stable
only when both agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .perron import NotPrimitive, is_primitive
from .substitution import Substitution, fixed_point_codes, language
from .words import Word, _window_codes, as_word, count_occurrences

__all__ = [
    "ReturnWordIndex",
    "LRReport",
    "LinrecReport",
    "PeriodicityVerdict",
    "Independence",
    "occurrences",
    "return_words",
    "complexity",
    "complexity_table",
    "gap_table",
    "lr_constant_estimate",
    "check_linrec_props",
    "max_power_exponent",
    "is_ultimately_periodic",
    "multiplicatively_independent",
    "density_search",
]


def occurrences(prefix: Word, u: Word | str) -> list[int]:
    """Ascending start positions of ``u`` in ``prefix``."""
    u = as_word(prefix.alphabet, u)
    if len(u) == 0:
        raise ValueError("empty pattern")
    n, m = len(u), len(prefix)
    if n > m:
        return []
    vc = prefix.codes()
    hit = np.ones(m - n + 1, dtype=bool)
    for j, c in enumerate(u.codes().tolist()):
        hit &= vc[j:j + m - n + 1] == c
    return np.flatnonzero(hit).tolist()


@dataclass(frozen=True)
class ReturnWordIndex:
    target: Word
    positions: tuple
    words: tuple

    @property
    def max_gap(self) -> int:
        return max(len(w) for w in self.words)

    def __len__(self) -> int:
        return len(self.words)

    def characterization_holds(self, prefix: Word) -> bool:
        """Each w: wu is a factor, u is a prefix of wu, and wu has exactly two occurrences of u."""
        u = self.target
        for w in self.words:
            wu = w + u
            if not occurrences(prefix, wu):
                return False
            if wu.letters[:len(u)] != u.letters:
                return False
            if count_occurrences(u, wu) != 2:
                return False
        return True


def return_words(prefix: Word, u: Word | str) -> ReturnWordIndex:
    """R_u from consecutive occurrences of u in the prefix, sorted by length then letters."""
    u = as_word(prefix.alphabet, u)
    pos = occurrences(prefix, u)
    if len(pos) < 2:
        raise ValueError("insufficient data: fewer than two occurrences")
    letters = prefix.letters
    found = {letters[j:k] for j, k in zip(pos, pos[1:])}
    order = sorted(found, key=lambda w: (len(w), [prefix.alphabet.index(a) for a in w]))
    return ReturnWordIndex(u, tuple(pos), tuple(Word(w, prefix.alphabet) for w in order))


def _window_ids(codes: np.ndarray, n: int, base: int) -> np.ndarray:
    """An id per length-n window such that equal windows share ids."""
    keys = _window_codes(codes, n, base)
    if keys is not None:
        return keys
    windows = np.lib.stride_tricks.sliding_window_view(codes.astype(np.int16), n)
    rows = np.ascontiguousarray(windows).view(np.dtype((np.void, 2 * n))).ravel()
    _, inverse = np.unique(rows, return_inverse=True)
    return inverse.ravel()


def complexity(prefix: Word, n: int) -> int:
    """Number of distinct length-n factors of the prefix (1 for n = 0)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    if n > len(prefix):
        return 0
    ids = _window_ids(prefix.codes(), n, max(len(prefix.alphabet), 2))
    return len(np.unique(ids))


def complexity_table(prefix: Word, max_n: int) -> list[int]:
    return [complexity(prefix, n) for n in range(max_n + 1)]


class GapStats(NamedTuple):
    factors: int
    max_gap: int
    min_gap: int
    max_returns: int
    single: int


def gap_table(codes: np.ndarray, n: int, base: int, count_words: bool = False) -> GapStats:
    """Return-word statistics for all length-n factors of a code array.

    ``single`` counts factors seen only once; their gaps are unknown.
    ``max_returns`` (the largest #R_u) is only computed with ``count_words``.
    """
    ids = _window_ids(codes, n, base)
    pos = np.arange(len(ids))
    order = np.lexsort((pos, ids))
    sid, spos = ids[order], pos[order]
    same = sid[1:] == sid[:-1]
    gaps = np.diff(spos)[same]
    starts = np.flatnonzero(np.r_[True, ~same])
    factors = len(starts)
    single = int(np.sum(np.diff(np.r_[starts, len(sid)]) == 1))
    if gaps.size == 0:
        return GapStats(factors, 0, 0, 0, single)
    distinct = 0
    if count_words:
        owners = sid[1:][same]
        begins = spos[:-1][same]
        per_factor: dict = {}
        for o, b, g in zip(owners.tolist(), begins.tolist(), gaps.tolist()):
            per_factor.setdefault(o, set()).add(codes[b:b + g].tobytes())
        distinct = max(len(v) for v in per_factor.values())
    return GapStats(factors, int(gaps.max()), int(gaps.min()), distinct, single)


def _require_primitive(s: Substitution) -> None:
    if not is_primitive(s.matrix()):
        raise NotPrimitive("substitution is not primitive")


@dataclass(frozen=True)
class LRReport:
    k_hat: int
    method: str
    prefix_len: int
    stable: bool
    per_length: tuple

    def __str__(self) -> str:
        state = "stable" if self.stable else "not stable"
        return f"K = {self.k_hat} ({self.method}, prefix {self.prefix_len}, {state} under doubling)"


def _lr_on_prefix(codes: np.ndarray, s: Substitution, max_len: int) -> tuple | None:
    base = max(len(s.alphabet), 2)
    per = []
    for n in range(1, max_len + 1):
        stats = gap_table(codes, n, base)
        if stats.single or stats.factors < len(language(s, n)):
            return None
        per.append(-(-stats.max_gap // n))
    return tuple(per)


def lr_constant_estimate(s: Substitution, max_len: int, prefix_len: int | None = None) -> LRReport:
    """Empirical linear-recurrence constant max ⌈|w|/|u|⌉ over u in L(x), |u| <= max_len, w in R_u.

    The prefix is doubled until every factor of the language occurs at least
    twice and the value agrees with the one on the doubled prefix.
    """
    _require_primitive(s)
    n = prefix_len or 1 << 12
    for _ in range(12):
        small = _lr_on_prefix(fixed_point_codes(s, n), s, max_len)
        if small is not None:
            big = _lr_on_prefix(fixed_point_codes(s, 2 * n), s, max_len)
            if big == small:
                return LRReport(max(small), "empirical", n, True, small)
        n *= 2
    if small is None:
        raise ValueError("insufficient data: language not covered by the prefix")
    return LRReport(max(small), "empirical", n, False, small)


def max_power_exponent(codes: np.ndarray, max_period: int | None = None) -> tuple[Fraction, int, int]:
    """Largest e = run/period over factors with a period, as (e, period, start).

    A factor of length L with period m has exponent L/m.
    """
    N = len(codes)
    best = (Fraction(1), 1, 0)
    top = max_period or N // 2
    for m in range(1, min(top, N // 2) + 1):
        bad = np.flatnonzero(codes[:-m] != codes[m:])
        edges = np.r_[-1, bad, N - m]
        runs = np.diff(edges) - 1
        i = int(np.argmax(runs))
        e = Fraction(int(runs[i]) + m, m)
        if e > best[0]:
            best = (e, m, int(edges[i]) + 1)
    return best


@dataclass(frozen=True)
class LinrecCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class LinrecReport:
    K: int
    max_len: int
    prefix_len: int
    checks: tuple
    skipped: str = ""

    @property
    def passed(self) -> bool:
        return not self.skipped and all(c.passed for c in self.checks)


def check_linrec_props(s: Substitution, K: int, max_len: int, prefix_len: int | None = None,
                       power_prefix: int = 100_000, complexity_len: int | None = None) -> LinrecReport:
    """Complexity <= Kn, (K+1)-power freeness, |u|/K < |w| <= K|u| and #R_u <= K(K+1)^2."""
    _require_primitive(s)
    n_pref = prefix_len or max(1 << 15, 8 * K * max_len)
    codes = fixed_point_codes(s, n_pref)
    prefix = Word.from_codes(s.alphabet, codes[:min(n_pref, 1 << 16)])
    verdict = is_ultimately_periodic(prefix)
    if verdict.status == "PERIODIC":
        return LinrecReport(K, max_len, n_pref, (), "periodic fixed point")
    base = max(len(s.alphabet), 2)
    checks = []
    bad = [n for n in range(1, (complexity_len or max_len) + 1) if len(language(s, n)) > K * n]
    checks.append(LinrecCheck("complexity <= K n", not bad, f"n = {bad[0]}" if bad else ""))
    # a (K+1)-power with period m has length (K+1)m, so longer periods cannot fit
    e, m, start = max_power_exponent(fixed_point_codes(s, power_prefix), power_prefix // (K + 1))
    free = e < K + 1
    checks.append(LinrecCheck(f"{K + 1}-power free", free,
                              "" if free else f"period {m} at {start} with exponent {e}"))
    upper, lower, count = [], [], []
    for n in range(1, max_len + 1):
        stats = gap_table(codes, n, base, count_words=True)
        if stats.max_gap > K * n:
            upper.append(n)
        if not stats.min_gap * K > n:
            lower.append(n)
        if stats.max_returns > K * (K + 1) ** 2:
            count.append(n)
    checks.append(LinrecCheck("|w| <= K|u|", not upper, f"|u| = {upper[0]}" if upper else ""))
    checks.append(LinrecCheck("|w| > |u|/K", not lower, f"|u| = {lower[0]}" if lower else ""))
    checks.append(LinrecCheck("#R_u <= K(K+1)^2", not count, f"|u| = {count[0]}" if count else ""))
    return LinrecReport(K, max_len, n_pref, tuple(checks))


# --------------------------------------------------------------------------
# periodicity


@dataclass(frozen=True)
class PeriodicityVerdict:
    status: str
    period: int | None = None
    preperiod: int | None = None
    certified: bool = False
    witness_n: int | None = None
    witness_count: int | None = None
    prefix_len: int = 0

    def __str__(self) -> str:
        if self.status == "PERIODIC":
            cert = "certified: R_u = {u}" if self.certified else "not certified"
            return f"PERIODIC period {self.period} preperiod {self.preperiod} ({cert})"
        if self.status == "NON-PERIODIC":
            return (f"NON-PERIODIC p({self.witness_n}) = {self.witness_count} > {self.witness_n}"
                    f" (rules out preperiod + period <= {self.witness_n})")
        return "INCONCLUSIVE"


def _least_period(codes: np.ndarray) -> tuple[int, int] | None:
    # the periodic tail must cover half the prefix and show at least four periods
    N = len(codes)
    for p in range(1, N // 8 + 1):
        bad = np.flatnonzero(codes[:-p] != codes[p:])
        q = int(bad[-1]) + 1 if bad.size else 0
        if q <= N // 2:
            return p, q
    return None


def is_ultimately_periodic(prefix: Word, max_n: int = 64) -> PeriodicityVerdict:
    """Period search on the prefix, certified through return words to the period word.

    A period p with preperiod q counts only if it holds on at least the last
    half of the prefix and p is at most an eighth of the prefix. Certification: every return word to u = x[q, q+p)
    in the tail equals u, so the tail is u u u ...
    """
    codes = prefix.codes()
    N = len(codes)
    found = _least_period(codes) if N >= 8 else None
    if found is not None:
        p, q = found
        tail = prefix[q:]
        u = tail[:p]
        certified = False
        if len(tail) >= 2 * p:
            rw = return_words(tail, u)
            certified = rw.words == (u,)
        return PeriodicityVerdict("PERIODIC", p, q, certified, prefix_len=N)
    for n in range(min(max_n, N), 0, -1):
        c = complexity(prefix, n)
        if c > n:
            return PeriodicityVerdict("NON-PERIODIC", witness_n=n, witness_count=c, prefix_len=N)
    return PeriodicityVerdict("INCONCLUSIVE", prefix_len=N)


# --------------------------------------------------------------------------
# multiplicative independence and density


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Independence(NamedTuple):
    independent: bool
    witness: tuple | None

    def __bool__(self) -> bool:
        return self.independent


def multiplicatively_independent(p: int, q: int) -> Independence:
    """p^k = q^l only for k = l = 0; otherwise the least (k, l) with p^k = q^l."""
    if p < 2 or q < 2:
        raise ValueError("p and q must be at least 2")
    fp, fq = _factorize(p), _factorize(q)
    if set(fp) != set(fq):
        return Independence(True, None)
    primes = sorted(fp)
    # p^k = q^l iff k * fp = l * fq
    a, b = fp[primes[0]], fq[primes[0]]
    g = math.gcd(a, b)
    k, l = b // g, a // g
    if all(k * fp[r] == l * fq[r] for r in primes):
        return Independence(False, (k, l))
    return Independence(True, None)


def _exact(x) -> Fraction | None:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    return None


def density_search(alpha, beta, t, eps, bound: int = 64) -> tuple[int, int]:
    """Least n + m (then least n), (n, m) != (0, 0), with |alpha^n / beta^m - t| < eps.

    Integers, fractions and decimal strings are compared exactly; floats are
    read as their shortest decimal representation.
    """
    A, B, T, E = (_exact(x) for x in (alpha, beta, t, eps))
    if min(A, B) <= 1 or T <= 0 or E <= 0:
        raise ValueError("need alpha, beta > 1 and t, eps > 0")
    for total in range(1, bound + 1):
        for n in range(total + 1):
            m = total - n
            bm = B ** m
            if abs(A ** n - T * bm) < E * bm:
                return n, m
    raise ValueError("no witness within bound")
