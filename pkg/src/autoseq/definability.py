"""Local periodicity, sections, pseudo-periodicity and semilinear sets on
finite windows of ℕ^d.

A membership window is a boolean array over [0, n)^d with axis i the i-th
coordinate. Every verdict records the bound it was checked up to; a PASS
says nothing beyond the window.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ndsub import ArrayWindow

__all__ = [
    "Box",
    "Verdict",
    "LocalPeriodicityWitness",
    "PseudoWitness",
    "SemilinearSet",
    "is_v_periodic_inside",
    "check_locally_periodic",
    "find_local_witness",
    "sections",
    "check_pseudo_periodic",
    "semilinear_members",
    "muchnik_equivalence",
    "window_from_points",
]


@dataclass(frozen=True)
class Box:
    origin: tuple
    side: int

    def slices(self) -> tuple:
        return tuple(slice(o, o + self.side) for o in self.origin)


@dataclass(frozen=True)
class Verdict:
    status: str
    bound: int
    witness: object = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status in ("PASS", "EQUAL")

    def __str__(self) -> str:
        text = f"{self.status} (checked up to {self.bound})"
        if self.witness is not None:
            text += f" witness {self.witness}"
        if self.detail:
            text += f": {self.detail}"
        return text


def _as_window(Z) -> np.ndarray:
    arr = np.asarray(Z, dtype=bool)
    if arr.ndim < 1:
        raise ValueError("membership window must have at least one axis")
    return arr


def window_from_points(points: Iterable, n: int, d: int) -> np.ndarray:
    """Boolean window of [0, n)^d marking the given points (ints allowed for d = 1)."""
    win = np.zeros((n,) * d, dtype=bool)
    for p in points:
        p = (p,) if isinstance(p, (int, np.integer)) else tuple(p)
        if all(0 <= c < n for c in p):
            win[p] = True
    return win


# --------------------------------------------------------------------------
# local periodicity


def _mismatch(Z: np.ndarray, v: Sequence[int]) -> np.ndarray:
    """mis[u] = (u in Z) xor (u + v in Z), for u with both points in the window; padded with False."""
    a = tuple(slice(max(0, -x), n - max(0, x)) for n, x in zip(Z.shape, v))
    b = tuple(slice(max(0, x), n - max(0, -x)) for n, x in zip(Z.shape, v))
    out = np.zeros(Z.shape, dtype=bool)
    out[a] = Z[a] ^ Z[b]
    return out


def is_v_periodic_inside(Z, v: Sequence[int], X: Box) -> Verdict:
    """For all u in X with u + v in X: u in Z iff u + v in Z."""
    Z = _as_window(Z)
    v = tuple(int(x) for x in v)
    if len(v) != Z.ndim or len(X.origin) != Z.ndim:
        raise ValueError("dimension mismatch")
    if any(o < 0 or o + X.side > n for o, n in zip(X.origin, Z.shape)):
        raise ValueError("box exceeds the window")
    sub = Z[X.slices()]
    mis = _mismatch(sub, v)
    bad = np.argwhere(mis)
    if bad.size:
        u = tuple(int(c) + o for c, o in zip(bad[0], X.origin))
        return Verdict("FAIL", X.side, u, f"{u} and {tuple(a + b for a, b in zip(u, v))} disagree")
    return Verdict("PASS", X.side)


def _box_sums(arr: np.ndarray, lo: Sequence[int], hi: Sequence[int], count: Sequence[int]) -> np.ndarray:
    """S[j] = sum of arr over j + [lo, hi) for j in [0, count), with an all-zero result for empty ranges."""
    c = arr.astype(np.int64)
    for ax in range(arr.ndim):
        c = np.cumsum(c, axis=ax)
        pad = [(0, 0)] * arr.ndim
        pad[ax] = (1, 0)
        c = np.pad(c, pad)
    out = np.zeros(tuple(count), dtype=np.int64)
    if any(h <= l for l, h in zip(lo, hi)):
        return out
    d = arr.ndim
    for corner in itertools.product((0, 1), repeat=d):
        sl = tuple(slice((h if c else l), (h if c else l) + n) for c, l, h, n in zip(corner, lo, hi, count))
        sign = (-1) ** (d - sum(corner))
        out += sign * c[sl]
    return out


@dataclass(frozen=True)
class LocalPeriodicityWitness:
    V: tuple
    K: int
    L: int = 0

    def __post_init__(self):
        V = tuple(tuple(int(c) for c in v) for v in self.V)
        if not V:
            raise ValueError("V must be non-empty")
        if any(not any(v) for v in V):
            raise ValueError("vectors of V must be non-zero")
        if self.K <= max(max(abs(c) for c in v) for v in V):
            raise ValueError("K must exceed the length of every vector of V")
        if self.L < 0:
            raise ValueError("L must be nonnegative")
        object.__setattr__(self, "V", V)


def _ok_boxes(Z: np.ndarray, v: tuple, K: int, count: Sequence[int]) -> np.ndarray:
    """ok[j] iff Z is v-periodic inside the box j + [0, K)^d."""
    mis = _mismatch(Z, v)
    lo = [max(0, -x) for x in v]
    hi = [K - max(0, x) for x in v]
    return _box_sums(mis, lo, hi, count) == 0


def _local_failures(Z: np.ndarray, V, K: int, bound: int) -> np.ndarray:
    count = (bound + 1,) * Z.ndim
    ok = np.zeros(count, dtype=bool)
    for v in V:
        ok |= _ok_boxes(Z, v, K, count)
    return ~ok


def _norms(shape) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(n) for n in shape], indexing="ij")
    return np.maximum.reduce(grids) if len(grids) > 1 else grids[0]


def check_locally_periodic(Z, w: LocalPeriodicityWitness, bound: int) -> Verdict:
    """Every j with L <= |j| <= bound (sup norm) has some v in V with Z v-periodic inside j + [0, K)^d."""
    Z = _as_window(Z)
    if any(n < bound + w.K for n in Z.shape):
        raise ValueError(f"window must cover [0, {bound + w.K})^d")
    fail = _local_failures(Z, w.V, w.K, bound) & (_norms((bound + 1,) * Z.ndim) >= w.L)
    bad = np.argwhere(fail)
    if bad.size:
        j = tuple(int(c) for c in bad[0])
        return Verdict("FAIL", bound, Box(j, w.K), f"no vector of V is a period inside the box at {j}")
    return Verdict("PASS", bound)


def _candidate_vectors(d: int, K: int) -> list[tuple]:
    out = []
    for v in itertools.product(range(-(K - 1), K), repeat=d):
        nz = [c for c in v if c]
        # v and -v impose the same condition
        if nz and nz[0] > 0:
            out.append(v)
    out.sort(key=lambda v: (max(abs(c) for c in v), [abs(c) for c in v], v))
    return out


def find_local_witness(Z, bound: int, max_vectors: int = 2, max_k: int = 8,
                       max_l: int = 16) -> LocalPeriodicityWitness | None:
    """Bounded search for (V, K, L): least K, then least L, then fewest and shortest vectors."""
    Z = _as_window(Z)
    d = Z.ndim
    norms = _norms((bound + 1,) * d)
    for K in range(2, max_k + 1):
        if any(n < bound + K for n in Z.shape):
            break
        count = (bound + 1,) * d
        vecs = _candidate_vectors(d, K)
        fails = {v: ~_ok_boxes(Z, v, K, count) for v in vecs}
        best = None
        for size in range(1, max_vectors + 1):
            for V in itertools.combinations(vecs, size):
                f = np.logical_and.reduce([fails[v] for v in V])
                L = int(norms[f].max()) + 1 if f.any() else 0
                if L <= max_l and (best is None or L < best[0]):
                    best = (L, V)
                    if L == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is not None:
            return LocalPeriodicityWitness(best[1], K, best[0])
    return None


# --------------------------------------------------------------------------
# sections and pseudo-periodicity


def sections(Z, axis: int, level: int) -> np.ndarray:
    """{j without coordinate ``axis`` : j in Z and j_axis = level} (axes counted from 0)."""
    Z = _as_window(Z)
    if not 0 <= axis < Z.ndim:
        raise ValueError("axis out of range")
    if not 0 <= level < Z.shape[axis]:
        raise ValueError("level outside the window")
    if Z.ndim == 1:
        raise ValueError("a one-dimensional set has no sections")
    return np.take(Z, level, axis=axis)


@dataclass(frozen=True)
class PseudoWitness:
    """Witness data for one letter.

    ``local`` is used in dimension >= 2, ``section`` for every (d-1)-section.
    In dimension 1 the set must be ultimately periodic with ``period``; a
    missing ``preperiod`` is found as the least one that holds in the window
    and is accepted if it leaves at least half the window periodic.
    """

    local: LocalPeriodicityWitness | None = None
    section: "PseudoWitness | None" = None
    period: int | None = None
    preperiod: int | None = None


def _check_1d(Z: np.ndarray, w: PseudoWitness, bound: int) -> Verdict:
    if w.period is None:
        raise ValueError("missing witness: period for the one-dimensional case")
    p = w.period
    Z = Z[:bound + 1]
    bad = np.flatnonzero(Z[:-p] != Z[p:]) if p < len(Z) else np.array([], dtype=int)
    q = int(bad[-1]) + 1 if bad.size else 0
    if w.preperiod is not None:
        if q > w.preperiod:
            return Verdict("FAIL", bound, q - 1, f"period {p} breaks at {q - 1}")
        return Verdict("PASS", bound)
    if q > len(Z) // 2:
        return Verdict("FAIL", bound, q - 1, f"period {p} breaks at {q - 1}, past half the window")
    return Verdict("PASS", bound, detail=f"preperiod {q}")


def _check_set(Z: np.ndarray, w: PseudoWitness, bound: int, where: str) -> Verdict:
    if Z.ndim == 1:
        v = _check_1d(Z, w, bound)
        return v if v.passed else Verdict("FAIL", bound, v.witness, f"{where}: {v.detail}")
    if w.local is None or w.section is None:
        raise ValueError(f"missing witness for dimension {Z.ndim}")
    v = check_locally_periodic(Z, w.local, bound)
    if not v.passed:
        return Verdict("FAIL", bound, v.witness, f"{where}: {v.detail}")
    for axis in range(Z.ndim):
        for level in range(bound + 1):
            sec = sections(Z, axis, level)
            sv = _check_set(sec, w.section, bound, f"{where} section axis {axis} level {level}")
            if not sv.passed:
                return sv
    return Verdict("PASS", bound)


def check_pseudo_periodic(T, witnesses, bound: int) -> Verdict:
    """Local periodicity of every letter set T_a and, recursively, of all their sections.

    ``T`` is an :class:`ArrayWindow` or a boolean membership window (then the
    letters are True and False). ``witnesses`` maps letters to
    :class:`PseudoWitness`, or is a single one used for every letter.
    """
    if isinstance(T, ArrayWindow):
        letters = {a: T.codes == i for i, a in enumerate(T.alphabet)}
    else:
        Z = _as_window(T)
        letters = {True: Z, False: ~Z}
    for a, Z in letters.items():
        if not Z.any():
            continue
        w = witnesses.get(a) if isinstance(witnesses, Mapping) else witnesses
        if w is None:
            raise ValueError(f"missing witness for letter {a!r}")
        v = _check_set(Z, w, bound, f"letter {a}")
        if not v.passed:
            return v
    return Verdict("PASS", bound)


# --------------------------------------------------------------------------
# semilinear sets


@dataclass(frozen=True)
class SemilinearSet:
    """V0 together with the cones Σ_{v in V_i} vℕ."""

    d: int
    base: frozenset = frozenset()
    generators: tuple = ()

    def __post_init__(self):
        base = frozenset(tuple(int(c) for c in v) for v in self.base)
        gens = tuple(tuple(tuple(int(c) for c in v) for v in g) for g in self.generators)
        for v in itertools.chain(base, *gens):
            if len(v) != self.d or any(c < 0 for c in v):
                raise ValueError(f"vector {v} is not in ℕ^{self.d}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "generators", gens)

    def members(self, n: int) -> set:
        return semilinear_members(self, n)

    def window(self, n: int) -> np.ndarray:
        return window_from_points(self.members(n), n, self.d)


def _cone(gens: Sequence[tuple], n: int, d: int) -> set:
    gens = [g for g in gens if any(g)]
    zero = (0,) * d
    seen = {zero}
    todo = [zero]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(a + b for a, b in zip(x, g))
            # coordinates only grow, so leaving the box prunes the branch
            if all(c < n for c in y) and y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def semilinear_members(SL: SemilinearSet, n: int) -> set:
    out = {v for v in SL.base if all(c < n for c in v)}
    for g in SL.generators:
        out |= _cone(g, n, SL.d)
    return out


def muchnik_equivalence(Ta, SL: SemilinearSet, n: int) -> Verdict:
    """Compare a membership window with a semilinear set on [0, n)^d."""
    Z = _as_window(Ta)
    if Z.ndim != SL.d:
        raise ValueError("dimension mismatch")
    if any(m < n for m in Z.shape):
        raise ValueError(f"window must cover [0, {n})^d")
    Z = Z[(slice(0, n),) * Z.ndim]
    diff = np.argwhere(Z ^ SL.window(n))
    if not diff.size:
        return Verdict("EQUAL", n)
    pts = [tuple(int(c) for c in p) for p in diff]
    if SL.d == 1:
        pts = [p[0] for p in pts]
    return Verdict("DISCREPANCY", n, pts, f"first at {pts[0]}, {len(pts)} in total")
