"""Line-oriented text formats for automata, substitutions, d-dimensional
substitutions, block maps and semilinear sets, plus window rendering.

Lines are ``key: values`` or a keyword (``rule``, ``edge``, ``code``,
``map``, ``gen``) followed by tokens; ``#`` starts a comment. Printing
produces the canonical form, which parses back to the same value.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Hashable

import numpy as np

from .automata import Automaton
from .definability import SemilinearSet
from .factor_maps import BlockMap, NdBlockMap
from .ndsub import ArrayWindow, NdSubstitution
from .substitution import Coding, Substitution
from .words import Alphabet, Word, symbol_str

__all__ = [
    "ParseError",
    "SpecValidationError",
    "SpecFile",
    "parse_spec",
    "print_spec",
    "parse_substitution",
    "parse_automaton",
    "parse_ndsubstitution",
    "parse_blockmap",
    "parse_semilinear",
    "print_substitution",
    "print_automaton",
    "print_ndsubstitution",
    "print_blockmap",
    "print_semilinear",
    "render_window",
    "parse_token",
    "parse_word",
]

KINDS = ("automaton", "substitution", "ndsubstitution", "blockmap", "semilinear")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class SpecValidationError(ValueError):
    pass


@dataclass(frozen=True)
class SpecFile:
    kind: str
    value: object
    coding: Coding | None = None


@dataclass
class _Line:
    no: int
    col: int
    key: str
    rest: str


_TUPLE = re.compile(r"^\((-?\d+(?:,-?\d+)*)\)$")


def parse_token(tok: str) -> Hashable:
    """Integers and integer tuples like (0,1) become numbers; anything else stays a string."""
    m = _TUPLE.match(tok)
    if m:
        return tuple(int(x) for x in m.group(1).split(","))
    if re.fullmatch(r"-?\d+", tok):
        return int(tok)
    return tok


def _tokens(text: str) -> list[str]:
    # tuples may be written without spaces between them: (0,1)(0,0)
    return re.findall(r"\([^()]*\)|[^\s()]+", text)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Whitespace-separated tokens, or one run of one-character symbols such as ``0110`` or ``abba``."""
    text = text.strip()
    if not text:
        return Word.empty(alphabet)
    toks = [parse_token(t) for t in _tokens(text)]
    if len(toks) == 1 and toks[0] not in alphabet and isinstance(text, str) and " " not in text:
        chars = [parse_token(c) for c in text]
        if all(c in alphabet for c in chars):
            toks = chars
    for t in toks:
        if t not in alphabet:
            raise SpecValidationError(f"symbol {t!r} not in alphabet {alphabet}")
    return Word(tuple(toks), alphabet)


def _lines(text: str) -> list[_Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        m = re.match(r"^([A-Za-z_-]+)\s*:(.*)$", body)
        if m:
            out.append(_Line(no, col, m.group(1).lower() + ":", m.group(2).strip()))
            continue
        parts = body.split(None, 1)
        out.append(_Line(no, col, parts[0], parts[1] if len(parts) > 1 else ""))
    if not out:
        raise ParseError("empty specification", 1, 1)
    return out


def _detect(lines: list[_Line]) -> str:
    keys = {l.key for l in lines}
    for l in lines:
        if l.key == "kind:":
            if l.rest not in KINDS:
                raise ParseError(f"unknown kind {l.rest!r}", l.no, l.col)
            return l.rest
    if "states:" in keys or "edge" in keys:
        return "automaton"
    if "gen:" in keys or "base:" in keys:
        return "semilinear"
    if "map" in keys or "radius:" in keys:
        return "blockmap"
    if "side:" in keys or "dim:" in keys:
        return "ndsubstitution"
    if "rule" in keys:
        return "substitution"
    raise ParseError("cannot tell what kind of specification this is", lines[0].no, lines[0].col)


def _single(lines: list[_Line], key: str, required: bool = True) -> _Line | None:
    found = [l for l in lines if l.key == key]
    if len(found) > 1:
        raise ParseError(f"duplicate '{key}'", found[1].no, found[1].col)
    if not found:
        if required:
            raise ParseError(f"missing '{key}' line", lines[-1].no, 1)
        return None
    return found[0]


def _int(line: _Line) -> int:
    try:
        return int(line.rest)
    except ValueError:
        raise ParseError(f"expected an integer after '{line.key}'", line.no, line.col) from None


def _check_keys(lines: list[_Line], allowed: set, block_rows: set = frozenset()) -> None:
    for l in lines:
        if l.key not in allowed and l.no not in block_rows:
            raise ParseError(f"unexpected '{l.key}'", l.no, l.col)


def _validated(fn, *args):
    try:
        return fn(*args)
    except ParseError:
        raise
    except (ValueError, KeyError, IndexError) as e:
        raise SpecValidationError(str(e)) from None


def _arrow(l: _Line, alphabet: Alphabet) -> tuple:
    if "->" not in l.rest:
        raise ParseError(f"expected '{l.key} <letter> -> ...'", l.no, l.col)
    lhs, rhs = (x.strip() for x in l.rest.split("->", 1))
    lhs_toks = _tokens(lhs)
    if len(lhs_toks) != 1:
        raise ParseError("expected exactly one letter before '->'", l.no, l.col)
    a = parse_token(lhs_toks[0])
    if a not in alphabet:
        raise SpecValidationError(f"line {l.no}: letter {a!r} not in alphabet")
    return a, rhs


def _coding(lines: list[_Line], alphabet: Alphabet) -> Coding | None:
    """Optional ``code a -> 1`` lines, one per letter."""
    codes = {}
    for l in lines:
        if l.key != "code":
            continue
        a, rhs = _arrow(l, alphabet)
        toks = _tokens(rhs)
        if len(toks) != 1:
            raise ParseError("a code maps a letter to one symbol", l.no, l.col)
        if a in codes:
            raise SpecValidationError(f"line {l.no}: second code for {a!r}")
        codes[a] = parse_token(toks[0])
    if not codes:
        return None
    if set(codes) != set(alphabet):
        raise SpecValidationError("a coding needs one 'code' line per letter")
    return _validated(Coding.from_map, codes, alphabet)


def _print_coding(coding: Coding | None) -> list[str]:
    if coding is None:
        return []
    return [f"code {symbol_str(a)} -> {symbol_str(img.letters[0])}"
            for a, img in zip(coding.source, coding.images)]


# --------------------------------------------------------------------------
# substitution


def parse_substitution(text: str) -> tuple[Substitution, Coding | None]:
    lines = _lines(text)
    _check_keys(lines, {"kind:", "alphabet:", "length:", "seed:", "rule", "code"})
    alpha_line = _single(lines, "alphabet:")
    symbols = [parse_token(t) for t in _tokens(alpha_line.rest)]
    if not symbols:
        raise ParseError("empty alphabet", alpha_line.no, alpha_line.col)
    alphabet = _validated(Alphabet, tuple(symbols))
    rules = {}
    for l in lines:
        if l.key != "rule":
            continue
        a, rhs = _arrow(l, alphabet)
        if a in rules:
            raise SpecValidationError(f"line {l.no}: second rule for {a!r}")
        img = [parse_token(t) for t in _tokens(rhs)]
        bad = [t for t in img if t not in alphabet]
        if bad:
            raise SpecValidationError(f"line {l.no}: letters {bad} not in alphabet")
        rules[a] = img
    missing = [a for a in alphabet if a not in rules]
    if missing:
        raise SpecValidationError(f"no rule for letters {missing}")
    seed_line = _single(lines, "seed:", required=False)
    seed = parse_token(seed_line.rest) if seed_line else None
    sub = _validated(Substitution.from_rules, rules, seed, alphabet)
    length_line = _single(lines, "length:", required=False)
    if length_line is not None and sub.constant_length != _int(length_line):
        raise SpecValidationError(f"not every image has length {length_line.rest}")
    coding = _coding(lines, alphabet)
    return sub, coding


def print_substitution(s: Substitution, coding: Coding | None = None) -> str:
    out = ["alphabet: " + " ".join(symbol_str(a) for a in s.alphabet)]
    if s.constant_length is not None:
        out.append(f"length: {s.constant_length}")
    out.append(f"seed: {symbol_str(s.seed)}")
    for a, img in zip(s.alphabet, s.images):
        out.append(f"rule {symbol_str(a)} -> " + " ".join(symbol_str(b) for b in img.letters))
    out += _print_coding(coding)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# automaton


def parse_automaton(text: str) -> Automaton:
    lines = _lines(text)
    _check_keys(lines, {"kind:", "states:", "alphabet:", "initial:", "terminal:", "edge"})
    states = [parse_token(t) for t in _tokens(_single(lines, "states:").rest)]
    states = [str(q) if not isinstance(q, str) else q for q in states]
    alpha_line = _single(lines, "alphabet:")
    symbols = [parse_token(t) for t in _tokens(alpha_line.rest)]
    if not symbols or not states:
        raise ParseError("states and alphabet must be non-empty", alpha_line.no, alpha_line.col)
    alphabet = _validated(Alphabet, tuple(symbols))
    initial = _single(lines, "initial:").rest.strip()
    term_line = _single(lines, "terminal:", required=False)
    terminals = _tokens(term_line.rest) if term_line else []
    edges = []
    for l in lines:
        if l.key != "edge":
            continue
        toks = _tokens(l.rest)
        if len(toks) != 3:
            raise ParseError("expected 'edge <state> <symbol> <state>'", l.no, l.col)
        edges.append((toks[0], parse_token(toks[1]), toks[2]))
    for q in [initial, *terminals]:
        if q not in states:
            raise SpecValidationError(f"unknown state {q!r}")
    return _validated(Automaton.from_edges, states, alphabet, edges, initial, terminals)


def print_automaton(a: Automaton) -> str:
    out = ["states: " + " ".join(symbol_str(q) for q in a.states),
           "alphabet: " + " ".join(symbol_str(x) for x in a.alphabet),
           f"initial: {symbol_str(a.initial)}",
           "terminal: " + " ".join(symbol_str(q) for q in a.states if q in a.terminals)]
    out += [f"edge {symbol_str(q)} {symbol_str(x)} {symbol_str(r)}" for q, x, r in a.edges()]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# d-dimensional substitution


def _from_axis1_fastest(flat: list, side: int, d: int) -> np.ndarray:
    """Tokens listed with axis 1 fastest, then axis 2, ... into an array indexed [k1, ..., kd]."""
    arr = np.array(flat, dtype=object).reshape((side,) * d)
    return arr.transpose(tuple(range(d - 1, -1, -1)))


def _to_axis1_fastest(arr: np.ndarray) -> list:
    return list(arr.transpose(tuple(range(arr.ndim - 1, -1, -1))).reshape(-1))


def parse_ndsubstitution(text: str, with_coding: bool = False):
    """The substitution, or (substitution, coding or None) when ``with_coding``."""
    lines = _lines(text)
    d = _int(_single(lines, "dim:"))
    side = _int(_single(lines, "side:"))
    if d < 1 or side < 2:
        raise SpecValidationError("need dim >= 1 and side >= 2")
    alphabet = _validated(Alphabet, tuple(parse_token(t) for t in _tokens(_single(lines, "alphabet:").rest)))
    seed_line = _single(lines, "seed:", required=False)
    rows_per_block = side ** (d - 1)
    blocks: dict = {}
    block_rows = set()
    i = 0
    while i < len(lines):
        l = lines[i]
        if l.key == "rule":
            m = re.fullmatch(r"(\S+)\s*:", l.rest)
            if not m:
                raise ParseError("expected 'rule <letter>:'", l.no, l.col)
            a = parse_token(m.group(1))
            if a not in alphabet:
                raise SpecValidationError(f"line {l.no}: letter {a!r} not in alphabet")
            if a in blocks:
                raise SpecValidationError(f"line {l.no}: second rule for {a!r}")
            rows = lines[i + 1:i + 1 + rows_per_block]
            if len(rows) < rows_per_block:
                raise ParseError(f"block for {a!r} needs {rows_per_block} rows", l.no, l.col)
            flat = []
            for r in rows:
                toks = [r.key] + _tokens(r.rest) if not r.key.endswith(":") else None
                if toks is None or len(toks) != side:
                    raise ParseError(f"block row needs {side} letters", r.no, r.col)
                flat += [parse_token(t) for t in toks]
                block_rows.add(r.no)
            bad = [t for t in flat if t not in alphabet]
            if bad:
                raise SpecValidationError(f"line {l.no}: block letters {bad} not in alphabet")
            blocks[a] = _from_axis1_fastest(flat, side, d)
            i += 1 + rows_per_block
            continue
        i += 1
    _check_keys(lines, {"kind:", "dim:", "side:", "alphabet:", "seed:", "rule", "code"}, block_rows)
    missing = [a for a in alphabet if a not in blocks]
    if missing:
        raise SpecValidationError(f"no rule for letters {missing}")
    codes = np.stack([np.vectorize(alphabet.index, otypes=[np.int64])(blocks[a]) for a in alphabet])
    seed = parse_token(seed_line.rest) if seed_line else None
    S = _validated(NdSubstitution, alphabet, side, codes, seed)
    return (S, _coding(lines, alphabet)) if with_coding else S


def print_ndsubstitution(S: NdSubstitution, coding: Coding | None = None) -> str:
    out = [f"dim: {S.d}", f"side: {S.side}",
           "alphabet: " + " ".join(symbol_str(a) for a in S.alphabet),
           f"seed: {symbol_str(S.seed)}"]
    sym = [symbol_str(a) for a in S.alphabet]
    for a, block in zip(S.alphabet, S.blocks):
        out.append(f"rule {symbol_str(a)}:")
        flat = _to_axis1_fastest(block)
        for r in range(0, len(flat), S.side):
            out.append(" ".join(sym[c] for c in flat[r:r + S.side]))
    out += _print_coding(coding)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# block maps


def parse_blockmap(text: str) -> BlockMap | NdBlockMap:
    lines = _lines(text)
    _check_keys(lines, {"kind:", "radius:", "side:", "dim:", "alphabet:", "target:", "map"})
    radius_line = _single(lines, "radius:", required=False)
    side_line = _single(lines, "side:", required=False)
    if (radius_line is None) == (side_line is None):
        raise ParseError("give exactly one of 'radius:' or 'side:'", lines[0].no, 1)
    entries = []
    for l in lines:
        if l.key != "map":
            continue
        if "->" not in l.rest:
            raise ParseError("expected 'map <letters> -> <symbol>'", l.no, l.col)
        lhs, rhs = l.rest.split("->", 1)
        out = _tokens(rhs)
        if len(out) != 1:
            raise ParseError("a block maps to a single symbol", l.no, l.col)
        entries.append((l, [parse_token(t) for t in _tokens(lhs)], parse_token(out[0])))
    if not entries:
        raise ParseError("no 'map' lines", lines[-1].no, 1)
    alpha_line = _single(lines, "alphabet:", required=False)
    if alpha_line:
        source = _validated(Alphabet, tuple(parse_token(t) for t in _tokens(alpha_line.rest)))
    else:
        source = Alphabet(tuple(dict.fromkeys(t for _, k, _ in entries for t in k)))
    target_line = _single(lines, "target:", required=False)
    if target_line:
        target = _validated(Alphabet, tuple(parse_token(t) for t in _tokens(target_line.rest)))
    else:
        target = Alphabet(tuple(dict.fromkeys(v for _, _, v in entries)))
    if radius_line is not None:
        r = _int(radius_line)
        table = {}
        for l, key, v in entries:
            if len(key) != 2 * r + 1:
                raise SpecValidationError(f"line {l.no}: block needs {2 * r + 1} letters")
            table[tuple(key)] = v
        return _validated(BlockMap, r, source, target, table)
    side = _int(side_line)
    dim_line = _single(lines, "dim:")
    d = _int(dim_line)
    table = {}
    for l, key, v in entries:
        if len(key) != side ** d:
            raise SpecValidationError(f"line {l.no}: block needs {side ** d} letters")
        arr = _from_axis1_fastest(key, side, d)
        table[tuple(arr.reshape(-1))] = v
    return _validated(NdBlockMap, side, d, source, target, table)


def print_blockmap(f: BlockMap | NdBlockMap) -> str:
    if isinstance(f, NdBlockMap):
        out = [f"side: {f.side}", f"dim: {f.dim}"]
    else:
        out = [f"radius: {f.radius}"]
    out.append("alphabet: " + " ".join(symbol_str(a) for a in f.source))
    out.append("target: " + " ".join(symbol_str(a) for a in f.target))
    for key, v in f.table.items():
        if isinstance(f, NdBlockMap):
            key = _to_axis1_fastest(np.array(key, dtype=object).reshape((f.side,) * f.dim))
        out.append("map " + " ".join(symbol_str(a) for a in key) + f" -> {symbol_str(v)}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# semilinear sets


def _vectors(line: _Line, d: int) -> list[tuple]:
    out = []
    for tok in _tokens(line.rest):
        v = parse_token(tok)
        if isinstance(v, int):
            v = (v,)
        if not isinstance(v, tuple) or len(v) != d:
            raise ParseError(f"expected a {d}-vector, got {tok!r}", line.no, line.col)
        out.append(v)
    return out


def parse_semilinear(text: str) -> SemilinearSet:
    lines = _lines(text)
    _check_keys(lines, {"kind:", "dim:", "base:", "gen:"})
    d = _int(_single(lines, "dim:"))
    base_line = _single(lines, "base:", required=False)
    base = _vectors(base_line, d) if base_line else []
    gens = [tuple(_vectors(l, d)) for l in lines if l.key == "gen:"]
    return _validated(SemilinearSet, d, frozenset(base), tuple(gens))


def _vec(v: tuple) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def print_semilinear(SL: SemilinearSet) -> str:
    out = [f"dim: {SL.d}", "base: " + " ".join(_vec(v) for v in sorted(SL.base))]
    out += ["gen: " + " ".join(_vec(v) for v in g) for g in SL.generators]
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# dispatch


def parse_spec(text: str) -> SpecFile:
    kind = _detect(_lines(text))
    if kind == "substitution":
        sub, coding = parse_substitution(text)
        return SpecFile(kind, sub, coding)
    if kind == "ndsubstitution":
        S, coding = parse_ndsubstitution(text, with_coding=True)
        return SpecFile(kind, S, coding)
    parser = {"automaton": parse_automaton,
              "blockmap": parse_blockmap, "semilinear": parse_semilinear}[kind]
    return SpecFile(kind, parser(text))


def print_spec(spec: SpecFile) -> str:
    if spec.kind == "substitution":
        return print_substitution(spec.value, spec.coding)
    if spec.kind == "ndsubstitution":
        return print_ndsubstitution(spec.value, spec.coding)
    printer = {"automaton": print_automaton,
               "blockmap": print_blockmap, "semilinear": print_semilinear}[spec.kind]
    return printer(spec.value)


def render_window(w: ArrayWindow, fmt: str = "pgm") -> str:
    """PGM (P2) or one character per cell; axis 1 runs along a line, axis 2 down the lines."""
    if w.d != 2:
        raise ValueError("only two-dimensional windows can be rendered")
    rows = w.codes.T
    if fmt == "pgm":
        maxval = max(len(w.alphabet) - 1, 1)
        head = ["P2", f"{w.shape[0]} {w.shape[1]}", str(maxval)]
        return "\n".join(head + [" ".join(map(str, row)) for row in rows.tolist()])
    if fmt == "ascii":
        return str(w)
    raise ValueError("format must be 'pgm' or 'ascii'")
