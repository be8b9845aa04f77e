"""Deterministic automata reading base-p digits (or digit tuples), most
significant digit first, and the conversions to and from substitutions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .numeration import digit_alphabet, encode_tuple, greedy_rep, tuple_alphabet
from .substitution import Coding, Substitution
from .words import Alphabet, Morphism, Word, as_word, symbol_str

__all__ = [
    "Automaton",
    "RecognizableSet",
    "NotNormalized",
    "accepts",
    "member",
    "enumerate_members",
    "normalize_for_conversion",
    "is_padding_invariant",
    "automaton_to_substitution",
    "substitution_to_automaton",
]

SINK = "sink"


class NotNormalized(ValueError):
    pass


@dataclass(frozen=True)
class Automaton:
    """Deterministic complete automaton.

    ``table[i][j]`` is the index of the successor of ``states[i]`` on input
    ``alphabet.symbols[j]``.
    """

    states: tuple
    alphabet: Alphabet
    table: tuple
    initial: Hashable
    terminals: frozenset

    def __post_init__(self):
        states = tuple(self.states)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "table", tuple(tuple(int(t) for t in row) for row in self.table))
        if len(set(states)) != len(states):
            raise ValueError("duplicate state names")
        if self.initial not in states:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        if not self.terminals <= set(states):
            raise ValueError("terminal states must be states")
        if len(self.table) != len(states):
            raise ValueError("transition table needs one row per state")
        n, k = len(states), len(self.alphabet)
        for row in self.table:
            if len(row) != k or any(not 0 <= t < n for t in row):
                raise ValueError("transition table must be total and in range")

    @classmethod
    def from_edges(cls, states: Sequence, alphabet: Alphabet, edges: Iterable[tuple],
                   initial: Hashable, terminals: Iterable) -> "Automaton":
        """Build from (state, symbol, state) edges.

        Missing transitions go to a fresh sink state; several successors for
        one (state, symbol) trigger the subset construction.
        """
        states = tuple(states)
        terminals = frozenset(terminals)
        succ: dict = {}
        for q, a, r in edges:
            if q not in states or r not in states:
                raise ValueError(f"edge {q!r} -{a!r}-> {r!r} uses an unknown state")
            if a not in alphabet:
                raise ValueError(f"edge label {a!r} not in alphabet {alphabet}")
            succ.setdefault((q, a), set()).add(r)
        if all(len(v) == 1 for v in succ.values()):
            complete = len(succ) == len(states) * len(alphabet)
            names = list(states)
            if not complete:
                names.append(_fresh(SINK, states))
            index = {q: i for i, q in enumerate(names)}
            sink = len(names) - 1
            table = []
            for q in names:
                row = []
                for a in alphabet:
                    target = succ.get((q, a))
                    row.append(index[next(iter(target))] if target else sink)
                table.append(row)
            return cls(tuple(names), alphabet, tuple(table), initial, terminals)
        return _determinize(states, alphabet, succ, initial, terminals)

    @property
    def zero(self) -> Hashable:
        return self.alphabet.symbols[0]

    @property
    def initial_index(self) -> int:
        return self.states.index(self.initial)

    def delta(self, q: Hashable, a: Hashable) -> Hashable:
        return self.states[self.table[self.states.index(q)][self.alphabet.index(a)]]

    def run(self, w: Word | Sequence) -> Hashable:
        w = as_word(self.alphabet, w if isinstance(w, Word) else tuple(w))
        i = self.initial_index
        for c in w.codes().tolist():
            i = self.table[i][c]
        return self.states[i]

    def edges(self) -> list[tuple]:
        return [(q, a, self.states[t]) for q, row in zip(self.states, self.table)
                for a, t in zip(self.alphabet, row)]

    def __str__(self) -> str:
        lines = [f"initial {symbol_str(self.initial)}",
                 "terminal " + " ".join(symbol_str(q) for q in self.states if q in self.terminals)]
        lines += [f"{symbol_str(q)} -{symbol_str(a)}-> {symbol_str(r)}" for q, a, r in self.edges()]
        return "\n".join(lines)


def _fresh(name: str, taken: Iterable) -> str:
    taken = set(taken)
    while name in taken:
        name += "'"
    return name


def _determinize(states, alphabet, succ, initial, terminals) -> Automaton:
    def label(subset: frozenset) -> Hashable:
        members = [q for q in states if q in subset]
        if len(members) == 1:
            return members[0]
        if not members:
            return SINK
        return "{" + ",".join(symbol_str(q) for q in members) + "}"

    start = frozenset([initial])
    order = [start]
    seen = {start: 0}
    rows = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = []
        for a in alphabet:
            nxt = frozenset().union(*(succ.get((q, a), set()) for q in cur))
            if nxt not in seen:
                seen[nxt] = len(order)
                order.append(nxt)
            row.append(seen[nxt])
        rows.append(row)
        i += 1
    names = []
    for subset in order:
        name = label(subset)
        names.append(_fresh(name, names) if name in names else name)
    finals = [names[k] for k, subset in enumerate(order) if subset & terminals]
    return Automaton(tuple(names), alphabet, tuple(rows), names[0], frozenset(finals))


def accepts(a: Automaton, w: Word | Sequence) -> bool:
    return a.run(w) in a.terminals


# --------------------------------------------------------------------------
# recognizable sets


def is_padding_invariant(a: Automaton) -> bool:
    """True iff acceptance of 0^n w is independent of n for w empty or not starting with 0."""
    table = np.array(a.table)
    q0 = a.initial_index
    orbit = []
    q = q0
    while q not in orbit:
        orbit.append(q)
        q = table[q, 0]
    term = np.array([s in a.terminals for s in a.states])
    if any(term[q] != term[q0] for q in orbit):
        return False
    pairs = {(int(table[q0, c]), int(table[q, c])) for q in orbit for c in range(1, table.shape[1])}
    todo = list(pairs)
    while todo:
        x, y = todo.pop()
        if term[x] != term[y]:
            return False
        for c in range(table.shape[1]):
            nxt = (int(table[x, c]), int(table[y, c]))
            if nxt not in pairs:
                pairs.add(nxt)
                todo.append(nxt)
    return True


@dataclass(frozen=True)
class RecognizableSet:
    automaton: Automaton
    base: int
    dim: int = 1

    def __post_init__(self):
        expected = digit_alphabet(self.base) if self.dim == 1 else tuple_alphabet(self.base, self.dim)
        if self.automaton.alphabet != expected:
            raise ValueError(f"automaton alphabet must be {expected}")
        if not is_padding_invariant(self.automaton):
            raise ValueError("automaton is not invariant under leading-zero padding")

    def rep(self, x) -> Word:
        if self.dim == 1:
            if not isinstance(x, (int, np.integer)):
                (x,) = x
            return greedy_rep(self.base, int(x))
        return encode_tuple(self.base, x)

    def __contains__(self, x) -> bool:
        return accepts(self.automaton, self.rep(x))

    def window(self, n: int) -> np.ndarray:
        """Membership of every point of [0, n)^d as a boolean array (axis i = coordinate i)."""
        p, d = self.base, self.dim
        table = np.array(self.automaton.table, dtype=np.int64)
        length = 0
        while p ** length < n:
            length += 1
        grids = np.meshgrid(*([np.arange(n, dtype=np.int64)] * d), indexing="ij")
        state = np.full((n,) * d, self.automaton.initial_index, dtype=np.int64)
        for pos in range(length - 1, -1, -1):
            sym = np.zeros_like(state)
            for g in grids:
                sym = sym * p + (g // p ** pos) % p
            state = table[state, sym]
        term = np.array([q in self.automaton.terminals for q in self.automaton.states])
        return term[state]


def member(r: RecognizableSet, x) -> bool:
    return x in r


def enumerate_members(r: RecognizableSet, bound: int) -> list:
    """Members below ``bound`` (componentwise for d > 1), ascending / lexicographic."""
    if bound <= 0:
        return []
    win = r.window(bound)
    pts = np.argwhere(win)
    if r.dim == 1:
        return [int(i) for i in pts[:, 0]]
    return [tuple(int(c) for c in p) for p in pts]


# --------------------------------------------------------------------------
# conversions


def normalize_for_conversion(a: Automaton) -> Automaton:
    """Make the initial state loop on the zero symbol.

    If it does not already, add a fresh initial state i with δ(i, 0) = i,
    δ(i, s) = δ(q0, s) otherwise, terminal iff q0 is.
    """
    q0 = a.initial_index
    if a.table[q0][0] == q0:
        return a
    name = _fresh("init", a.states)
    row = (len(a.states),) + a.table[q0][1:]
    terminals = set(a.terminals)
    if a.initial in a.terminals:
        terminals.add(name)
    return Automaton(a.states + (name,), a.alphabet, a.table + (row,), name, frozenset(terminals))


def _output_alphabet() -> Alphabet:
    return Alphabet((0, 1))


def automaton_to_substitution(a: Automaton):
    """Substitution on states (image of q lists δ(q, 0), ..., δ(q, p-1)) and terminal coding.

    For a digit-tuple alphabet the result is an :class:`~autoseq.ndsub.NdSubstitution`.
    """
    if a.table[a.initial_index][0] != a.initial_index:
        raise NotNormalized("the initial state must loop on the zero symbol; normalize first")
    letters = Alphabet(a.states)
    coding = Coding.from_map({q: int(q in a.terminals) for q in a.states}, letters, _output_alphabet())
    first = a.alphabet.symbols[0]
    if not isinstance(first, tuple):
        images = tuple(Word(tuple(a.states[t] for t in row), letters) for row in a.table)
        return Substitution(Morphism(letters, letters, images), a.initial), coding
    from .ndsub import NdSubstitution

    d = len(first)
    p = int(round(len(a.alphabet) ** (1 / d)))
    if tuple_alphabet(p, d) != a.alphabet:
        raise ValueError("tuple alphabet must be all of {0..p-1}^d in lexicographic order")
    blocks = np.array(a.table, dtype=np.int64).reshape((len(a.states),) + (p,) * d)
    return NdSubstitution(letters, p, blocks, a.initial), coding


def substitution_to_automaton(s, output_letters: Iterable) -> Automaton:
    """Automaton with states = letters and δ(b, i) = i-th letter of σ(b)."""
    from .ndsub import NdSubstitution

    out = frozenset(output_letters)
    if isinstance(s, NdSubstitution):
        inputs = tuple_alphabet(s.side, s.d)
        rows = s.blocks.reshape(len(s.alphabet), -1)
        return Automaton(s.alphabet.symbols, inputs, tuple(map(tuple, rows.tolist())), s.seed, out)
    p = s.constant_length
    if p is None:
        raise ValueError("substitution must have constant length")
    if s.image(s.seed)[0] != s.seed:
        raise ValueError("seed must be the first letter of its own image")
    rows = tuple(tuple(img.codes().tolist()) for img in s.images)
    return Automaton(s.alphabet.symbols, digit_alphabet(p), rows, s.seed, out)
