"""Primitivity, Perron data and exact frequencies of factors.

For constant-length substitutions every column of the incidence matrix sums
to the length, so the Perron eigenvalue is that integer and the eigenvectors
are rational: they are computed exactly with :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .substitution import Substitution, k_block_substitution
from .words import Word, symbol_str

__all__ = [
    "EigenData",
    "FrequencyTable",
    "ThetaScalingReport",
    "NotPrimitive",
    "is_primitive",
    "perron_data",
    "letter_frequencies",
    "word_frequencies",
    "two_block_frequencies",
    "verify_theta_scaling",
    "scaling_exponent",
    "exact_kernel_vector",
    "empirical_frequencies",
]


class NotPrimitive(ValueError):
    pass


def _support_graph(M: np.ndarray) -> list[list[int]]:
    # edge j -> i when letter i occurs in the image of letter j
    return [list(np.nonzero(M[:, j])[0]) for j in range(M.shape[1])]


def _bfs_levels(graph: list[list[int]], start: int) -> dict[int, int]:
    level = {start: 0}
    todo = deque([start])
    while todo:
        b = todo.popleft()
        for c in graph[b]:
            if c not in level:
                level[c] = level[b] + 1
                todo.append(c)
    return level


def is_primitive(M) -> bool:
    """Some power of M is positive: strongly connected support with period 1."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("incidence matrix must be square")
    if (M < 0).any():
        raise ValueError("incidence matrix must be nonnegative")
    n = M.shape[0]
    graph = _support_graph(M)
    reverse = _support_graph(M.T)
    level = _bfs_levels(graph, 0)
    if len(level) != n or len(_bfs_levels(reverse, 0)) != n:
        return False
    g = 0
    for b in range(n):
        for c in graph[b]:
            g = math.gcd(g, level[b] + 1 - level[c])
    return abs(g) == 1


def exact_kernel_vector(A: Sequence[Sequence]) -> list[Fraction]:
    """A nonzero vector spanning the (one-dimensional) kernel of A, over the rationals."""
    rows = [[Fraction(x) for x in row] for row in A]
    n = len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ArithmeticError(f"kernel has dimension {len(free)}, expected 1")
    f = free[0]
    x = [Fraction(0)] * n
    x[f] = Fraction(1)
    for i, c in enumerate(pivots):
        x[c] = -rows[i][f]
    return x


@dataclass(frozen=True)
class EigenData:
    theta: Fraction | float
    right: tuple
    left: tuple
    exact: bool
    theta_bounds: tuple = ()
    secondary_radius: float = float("nan")

    @property
    def theta_float(self) -> float:
        return float(self.theta)


def _secondary_radius(M: np.ndarray) -> float:
    mods = sorted(np.abs(np.linalg.eigvals(M.astype(float))), reverse=True)
    return float(mods[1]) if len(mods) > 1 else 0.0


def _power_vector(M: np.ndarray, tol: float = 1e-14, max_iter: int = 100000):
    x = np.full(M.shape[0], 1.0 / M.shape[0])
    # M + I has the same Perron vector and is aperiodic, which speeds convergence
    A = M.astype(float) + np.eye(M.shape[0])
    for _ in range(max_iter):
        y = A @ x
        y /= y.sum()
        if np.abs(y - x).max() < tol:
            return y
        x = y
    return x


def perron_data(M) -> EigenData:
    M = np.asarray(M, dtype=np.int64)
    if not is_primitive(M):
        raise NotPrimitive("Perron data requires primitivity")
    n = M.shape[0]
    cols = set(M.sum(axis=0).tolist())
    rows = set(M.sum(axis=1).tolist())
    second = _secondary_radius(M)
    if len(cols) == 1:
        theta = Fraction(cols.pop())
        r = exact_kernel_vector((M - int(theta) * np.eye(n, dtype=np.int64)).tolist())
        total = sum(r)
        r = tuple(x / total for x in r)
        left = tuple(Fraction(1) for _ in range(n))
        return EigenData(theta, r, left, True, (theta, theta), second)
    if len(rows) == 1:
        theta = Fraction(rows.pop())
        l = exact_kernel_vector((M.T - int(theta) * np.eye(n, dtype=np.int64)).tolist())
        r = tuple(Fraction(1, n) for _ in range(n))
        scale = sum(a * b for a, b in zip(r, l))
        return EigenData(theta, r, tuple(x / scale for x in l), True, (theta, theta), second)
    r = _power_vector(M)
    l = _power_vector(M.T)
    ratios = (M @ r) / r
    lo, hi = float(ratios.min()), float(ratios.max())
    theta = float((M @ r).sum())
    l = l / float(r @ l)
    return EigenData(theta, tuple(r.tolist()), tuple(l.tolist()), False, (lo, hi), second)


# --------------------------------------------------------------------------
# frequency tables


@dataclass(frozen=True)
class FrequencyTable:
    """Frequencies of the length-``length`` factors, keyed by letter tuples."""

    length: int
    values: dict = field(hash=False)
    exact: bool = True

    def _key(self, u) -> tuple:
        if isinstance(u, Word):
            return u.letters
        return tuple(u)

    def __getitem__(self, u) -> Fraction | float:
        return self.values.get(self._key(u), Fraction(0) if self.exact else 0.0)

    def __contains__(self, u) -> bool:
        return self._key(u) in self.values

    def __len__(self) -> int:
        return len(self.values)

    def items(self):
        return self.values.items()

    def total(self):
        return sum(self.values.values())

    def __str__(self) -> str:
        return "\n".join(f"{''.join(map(symbol_str, u))} {v}" for u, v in self.values.items())


def _require_primitive(s: Substitution) -> None:
    if not is_primitive(s.matrix()):
        raise NotPrimitive("substitution is not primitive")


def letter_frequencies(s: Substitution) -> FrequencyTable:
    _require_primitive(s)
    data = perron_data(s.matrix())
    return FrequencyTable(1, {(a,): v for a, v in zip(s.alphabet, data.right)}, data.exact)


def word_frequencies(s: Substitution, k: int) -> FrequencyTable:
    """Frequencies of length-k factors from the Perron vector of σ_k."""
    _require_primitive(s)
    if k == 1:
        return letter_frequencies(s)
    sk = k_block_substitution(s, k)
    data = perron_data(sk.matrix())
    return FrequencyTable(k, dict(zip(sk.alphabet.symbols, data.right)), data.exact)


def _image_lengths(s: Substitution, n: int) -> np.ndarray:
    """|σⁿ(a)| for every letter, from the column sums of Mⁿ."""
    M = s.matrix().astype(object)
    P = np.identity(M.shape[0], dtype=object)
    for _ in range(n):
        P = M.dot(P)
    return P.sum(axis=0)


def scaling_exponent(s: Substitution, n: int) -> int:
    """k(n) = min{k : n <= min_a |σᵏ(a)|}."""
    k = 0
    while min(_image_lengths(s, k)) < n:
        k += 1
    return k


def two_block_frequencies(s: Substitution, n: int) -> FrequencyTable:
    """Length-n frequencies from length-2 frequencies.

    freq(u) = θ^{-k} Σ_{ab} (|σᵏ(ab)|_u - |σᵏ(b)|_u) freq(ab), where k is
    the least exponent with n <= min_a |σᵏ(a)|; the bracket counts the
    occurrences of u that start inside σᵏ(a).
    """
    _require_primitive(s)
    pairs = word_frequencies(s, 2)
    theta = perron_data(s.matrix()).theta
    k = scaling_exponent(s, n)
    power = s.power(k) if k else None
    counts: dict = {}
    for ab, f in pairs.items():
        if power is None:
            img_ab = Word(ab, s.alphabet)
        else:
            img_ab = power(Word(ab, s.alphabet))
        lead = len(power.image(ab[0])) if power is not None else 1
        letters = img_ab.letters
        for i in range(lead):
            u = letters[i:i + n]
            if len(u) == n:
                counts[u] = counts.get(u, 0) + f
    scale = theta ** k
    order = sorted(counts, key=lambda u: [s.alphabet.index(a) for a in u])
    return FrequencyTable(n, {u: counts[u] / scale for u in order}, isinstance(theta, Fraction))


# --------------------------------------------------------------------------
# scaled frequency sets


@dataclass(frozen=True)
class ThetaScalingReport:
    max_len: int
    compare_from: int
    theta: Fraction | float
    exponents: dict
    values: tuple
    values_at_compare: tuple
    periodic: bool

    @property
    def cardinality(self) -> int:
        return len(self.values)

    @property
    def stable(self) -> bool:
        return self.values == self.values_at_compare


def verify_theta_scaling(s: Substitution, max_len: int, compare_from: int | None = None) -> ThetaScalingReport:
    """The set {freq(u) θ^{k(|u|)} : 1 <= |u| <= max_len} and its stabilization."""
    _require_primitive(s)
    if compare_from is None:
        compare_from = max(1, max_len // 2)
    theta = perron_data(s.matrix()).theta
    exponents = {}
    found: list[set] = []
    seen: set = set()
    periodic = False
    for n in range(1, max_len + 1):
        table = word_frequencies(s, n) if n < 3 else two_block_frequencies(s, n)
        if len(table) <= n:
            periodic = True
        k = scaling_exponent(s, n)
        exponents[n] = k
        seen |= {f * theta ** k for _, f in table.items()}
        found.append(set(seen))
    return ThetaScalingReport(max_len, compare_from, theta, exponents, tuple(sorted(found[-1])),
                              tuple(sorted(found[compare_from - 1])), periodic)


def empirical_frequencies(w: Word, n: int) -> dict:
    """Occurrence counts of length-n factors divided by the number of positions."""
    from .words import factor_counts

    counts = factor_counts(w, n)
    total = len(w) - n + 1
    return {u: c / total for u, c in counts.items()}
