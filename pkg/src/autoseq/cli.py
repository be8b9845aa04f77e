"""Command-line interface: ``autoseq <command> ...``.

Files may be replaced by ``@name`` for the built-in examples (``@E1``,
``@E1_3``, ``@E2``, ``@E3``, ``@diagonal``, ``@even_sum``, ``@sigma1``,
``@sigma1_bar``, ``@sigma2``, ``@sigma3``, ``@tm2d``).

Exit codes: 0 success, 2 usage, 3 parse error, 4 validation error,
5 internal invariant violation.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import catalog
from .automata import (Automaton, RecognizableSet, accepts, automaton_to_substitution,
                       enumerate_members, normalize_for_conversion, substitution_to_automaton)
from .definability import muchnik_equivalence
from .factor_maps import cobham_demo
from .formats import (ParseError, SpecFile, SpecValidationError, parse_spec, parse_word,
                      print_automaton, print_spec, render_window)
from .ndsub import (NdSubstitution, Pattern, count_pattern, cube_frequencies, fixed_array,
                    spacing_and_repetitivity_check, verify_freq_array)
from .numeration import NumerationSystem, digit_alphabet, greedy_rep, tuple_alphabet, value
from .perron import empirical_frequencies, verify_theta_scaling, word_frequencies
from .recurrence import (complexity_table, density_search, is_ultimately_periodic,
                         multiplicatively_independent, return_words)
from .substitution import Substitution, coded_prefix, fixed_point_prefix
from .words import Word, symbol_str

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _builtin(name: str) -> SpecFile:
    automata = {"E1": lambda: catalog.e1_automaton(2), "E1_3": lambda: catalog.e1_automaton(3),
                "E2": catalog.e2_automaton, "E3": catalog.e3_automaton,
                "diagonal": catalog.diagonal_automaton, "even_sum": catalog.even_sum_automaton}
    subs = {"sigma1": catalog.sigma1, "sigma1_bar": catalog.sigma1_bar,
            "sigma2": catalog.sigma2, "sigma3": catalog.sigma3}
    if name in automata:
        return SpecFile("automaton", automata[name]())
    if name in subs:
        return SpecFile("substitution", subs[name]())
    if name == "tm2d":
        return SpecFile("ndsubstitution", catalog.thue_morse_2d())
    raise UsageError(f"unknown built-in {name!r}")


def load(path: str, *kinds: str) -> SpecFile:
    if path.startswith("@"):
        spec = _builtin(path[1:])
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
        spec = parse_spec(text)
    if kinds and spec.kind not in kinds:
        raise SpecValidationError(f"{path}: expected {' or '.join(kinds)}, found {spec.kind}")
    return spec


def _recognizable(a: Automaton) -> RecognizableSet:
    first = a.alphabet.symbols[0]
    if isinstance(first, tuple):
        d = len(first)
        p = round(len(a.alphabet) ** (1 / d))
        if tuple_alphabet(p, d) != a.alphabet:
            raise SpecValidationError("tuple alphabet must list {0..p-1}^d in lexicographic order")
        return RecognizableSet(a, p, d)
    p = len(a.alphabet)
    if digit_alphabet(p) != a.alphabet:
        raise SpecValidationError("alphabet must be 0 1 ... p-1")
    return RecognizableSet(a, p, 1)


def _point(x) -> str:
    return "(" + ",".join(map(str, x)) + ")" if isinstance(x, tuple) else str(x)


def _digits(w) -> str:
    ds = list(w.letters) if isinstance(w, Word) else list(w)
    return "".join(map(str, ds)) if all(d < 10 for d in ds) else " ".join(map(str, ds))


def _parse_digits(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if "," in text or " " in text:
        return [int(t) for t in text.replace(",", " ").split()]
    return [int(c) for c in text]


def _system(args) -> NumerationSystem | int:
    if args.terms:
        init = [int(t) for t in args.terms.split(",")]
        coeffs = [int(t) for t in args.recurrence.split(",")] if args.recurrence else None
        if coeffs is None:
            raise UsageError("--terms needs --recurrence")
        return NumerationSystem.linear(init, coeffs)
    return args.base


def _sequence(spec: SpecFile, n: int, coded: bool) -> Word:
    s = spec.value
    if coded and spec.coding is None:
        raise SpecValidationError("--coded needs 'code' lines in the substitution file")
    return coded_prefix(s, spec.coding, n) if coded else fixed_point_prefix(s, n)


def _substitution(path: str) -> SpecFile:
    spec = load(path, "substitution", "automaton")
    if spec.kind == "automaton":
        sub, coding = automaton_to_substitution(normalize_for_conversion(spec.value))
        if not isinstance(sub, Substitution):
            raise SpecValidationError("expected a one-dimensional automaton")
        return SpecFile("substitution", sub, coding)
    return spec


def _ndsubstitution(path: str) -> NdSubstitution:
    spec = load(path, "ndsubstitution", "automaton")
    if spec.kind == "automaton":
        sub, _ = automaton_to_substitution(normalize_for_conversion(spec.value))
        if not isinstance(sub, NdSubstitution):
            raise SpecValidationError("expected an automaton over digit tuples")
        return sub
    return spec.value


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


# --------------------------------------------------------------------------
# commands; each returns the text to print


def cmd_rep(args) -> str:
    return _digits(greedy_rep(_system(args), args.x))


def cmd_val(args) -> str:
    return str(value(_system(args), _parse_digits(args.digits)))


def cmd_aut(args) -> str:
    a = load(args.file, "automaton").value
    if args.action == "normalize":
        return print_automaton(normalize_for_conversion(a)).rstrip("\n")
    if args.action == "run":
        if args.arg is None:
            raise UsageError("aut run needs a word")
        w = parse_word(args.arg, a.alphabet)
        verdict = "accept" if accepts(a, w) else "reject"
        return f"{verdict} {symbol_str(a.run(w))}"
    if args.arg is None:
        raise UsageError("aut enum needs a bound")
    return "\n".join(_point(x) for x in enumerate_members(_recognizable(a), int(args.arg)))


def cmd_aut2sub(args) -> str:
    a = load(args.file, "automaton").value
    sub, coding = automaton_to_substitution(normalize_for_conversion(a))
    kind = "ndsubstitution" if isinstance(sub, NdSubstitution) else "substitution"
    return print_spec(SpecFile(kind, sub, coding)).rstrip("\n")


def cmd_sub2aut(args) -> str:
    spec = load(args.file, "substitution", "ndsubstitution")
    outputs = args.output
    if not outputs:
        if spec.coding is None:
            raise SpecValidationError("give --output letters or 'code' lines")
        outputs = [a for a in spec.value.alphabet if str(spec.coding.letter(a)) == "1"]
    else:
        bad = [o for o in outputs if o not in spec.value.alphabet]
        if bad:
            raise SpecValidationError(f"output letters {bad} not in alphabet")
    return print_automaton(substitution_to_automaton(spec.value, outputs)).rstrip("\n")


def cmd_fix(args) -> str:
    return str(_sequence(_substitution(args.file), args.n, args.coded))


def _word_key(u) -> str:
    return "".join(symbol_str(a) for a in u) if all(len(symbol_str(a)) == 1 for a in u) \
        else " ".join(symbol_str(a) for a in u)


def cmd_freq(args) -> str:
    spec = _substitution(args.file)
    table = word_frequencies(spec.value, args.k)
    emp = None
    if args.empirical:
        emp = empirical_frequencies(fixed_point_prefix(spec.value, args.empirical), args.k)
    lines = []
    for u, f in table.items():
        line = f"{_word_key(u)}\t{f}"
        if emp is not None:
            line += f"\t{emp.get(tuple(u), 0.0):.6f}"
        lines.append(line)
    return "\n".join(lines)


def cmd_thetascale(args) -> str:
    rep = verify_theta_scaling(_substitution(args.file).value, args.max_len, args.compare)
    return "\n".join([
        f"theta {rep.theta}",
        "k(n) " + " ".join(str(rep.exponents[n]) for n in sorted(rep.exponents)),
        f"values ({rep.cardinality}) " + " ".join(map(str, rep.values)),
        f"stable between {rep.compare_from} and {rep.max_len}: {'yes' if rep.stable else 'no'}",
    ])


def cmd_retwords(args) -> str:
    spec = _substitution(args.file)
    x = _sequence(spec, args.prefix, args.coded)
    u = parse_word(args.u, x.alphabet)
    idx = return_words(x, u)
    lines = [str(w) for w in idx.words]
    lines.append(f"max length {idx.max_gap}")
    return "\n".join(lines)


def cmd_complexity(args) -> str:
    spec = _substitution(args.file)
    x = _sequence(spec, args.prefix, args.coded)
    table = complexity_table(x, args.n)
    return "\n".join(f"{n} {table[n]}" for n in range(1, args.n + 1))


def cmd_periodic(args) -> str:
    spec = _substitution(args.file)
    return str(is_ultimately_periodic(_sequence(spec, args.prefix, args.coded)))


def cmd_indep(args) -> str:
    ind = multiplicatively_independent(args.p, args.q)
    if ind.independent:
        return "independent"
    k, l = ind.witness
    return f"dependent {k} {l}"


def cmd_density(args) -> str:
    n, m = density_search(_frac(args.alpha), _frac(args.beta), _frac(args.t), _frac(args.eps),
                          args.bound)
    return f"{n} {m}"


def cmd_ndfix(args) -> str:
    return render_window(fixed_array(_ndsubstitution(args.file), args.n), args.format)


def _pattern_key(w) -> str:
    return str(w).replace("\n", "/")


def cmd_ndfreq(args) -> str:
    S = _ndsubstitution(args.file)
    freqs = cube_frequencies(S, args.r)
    w = fixed_array(S, args.empirical) if args.empirical else None
    lines = []
    for P, f in freqs.items():
        line = f"{_pattern_key(P)}\t{f}"
        if w is not None:
            line += f"\t{count_pattern(w, Pattern.from_window(P)) / S.theta ** args.empirical:.6f}"
        lines.append(line)
    return "\n".join(lines)


def cmd_ndcheck(args) -> str:
    S = _ndsubstitution(args.file)
    rep = verify_freq_array(S, args.max_r, args.compare)
    sp = spacing_and_repetitivity_check(S, args.max_r)
    return "\n".join([
        f"theta {rep.theta}",
        "cubic patterns " + " ".join(f"{R}:{rep.counts[R]}" for R in sorted(rep.counts)),
        f"values ({rep.cardinality}) " + " ".join(map(str, rep.values)),
        f"stable between R <= {rep.compare_r} and R <= {rep.max_r}: {'yes' if rep.stable else 'no'}",
        "repetitivity K " + " ".join(map(str, sp.k_hat)) + " on sides " + " ".join(map(str, sp.window_sides)),
        "spacing K' " + " ".join(map(str, sp.k_prime_hat)),
        f"periodic window: {'yes' if rep.periodic or sp.periodic else 'no'}",
    ])


def cmd_semilinear(args) -> str:
    SL = load(args.file, "semilinear").value
    return "\n".join(_point(v if SL.d > 1 else v[0]) for v in sorted(SL.members(args.n)))


def cmd_muchnik(args) -> str:
    T = _recognizable(load(args.automaton, "automaton").value)
    SL = load(args.semilinear, "semilinear").value
    return str(muchnik_equivalence(T.window(args.n), SL, args.n))


def cmd_cobham(args) -> str:
    a, b = _substitution(args.first), _substitution(args.second)
    if a.coding is None or b.coding is None:
        raise SpecValidationError("both inputs need a coding")
    return str(cobham_demo(a.value, a.coding, b.value, b.coding, args.max_len, args.prefix))


def cmd_render(args) -> str:
    S = _ndsubstitution(args.file)
    m = 0
    while S.side ** m < args.size:
        m += 1
    w = fixed_array(S, m).restrict((0,) * S.d, (args.size,) * S.d)
    return render_window(w, args.format)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="autoseq", description="Automatic sequences and substitutions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def numeration(p):
        p.add_argument("--base", type=int, default=2)
        p.add_argument("--terms", help="initial terms of a linear numeration system, e.g. 1,2")
        p.add_argument("--recurrence", help="recurrence coefficients, e.g. 1,1")

    p = sub.add_parser("rep", help="greedy representation of x")
    p.add_argument("x", type=int)
    numeration(p)
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("val", help="value of a digit string")
    p.add_argument("digits")
    numeration(p)
    p.set_defaults(func=cmd_val)

    p = sub.add_parser("aut", help="run, enumerate or normalize an automaton")
    p.add_argument("action", choices=["run", "enum", "normalize"])
    p.add_argument("file")
    p.add_argument("arg", nargs="?", help="word for run, bound for enum")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("aut2sub", help="substitution and coding of an automaton")
    p.add_argument("file")
    p.set_defaults(func=cmd_aut2sub)

    p = sub.add_parser("sub2aut", help="automaton of a constant-length substitution")
    p.add_argument("file")
    p.add_argument("--output", nargs="*", help="letters whose states are terminal")
    p.set_defaults(func=cmd_sub2aut)

    def seq(p, prefix=1 << 14):
        p.add_argument("file")
        p.add_argument("--coded", action="store_true", help="apply the file's coding")
        p.add_argument("--prefix", type=int, default=prefix)

    p = sub.add_parser("fix", help="prefix of the fixed point")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p.add_argument("--coded", action="store_true")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("freq", help="exact frequencies of length-k words")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.add_argument("--empirical", type=int, metavar="N", help="also count on an N-prefix")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("thetascale", help="scaled frequency set and its stabilization")
    p.add_argument("file")
    p.add_argument("max_len", type=int)
    p.add_argument("--compare", type=int)
    p.set_defaults(func=cmd_thetascale)

    p = sub.add_parser("retwords", help="return words to u")
    seq(p)
    p.add_argument("u")
    p.set_defaults(func=cmd_retwords)

    p = sub.add_parser("complexity", help="factor complexity p(1..n)")
    seq(p)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("periodic", help="ultimate periodicity verdict")
    seq(p)
    p.set_defaults(func=cmd_periodic)

    p = sub.add_parser("indep", help="multiplicative independence of p and q")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_indep)

    p = sub.add_parser("density", help="least n+m with t < alpha^n/beta^m < t+eps")
    for name in ("alpha", "beta", "t", "eps"):
        p.add_argument(name)
    p.add_argument("--bound", type=int, default=64)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("ndfix", help="S^n(seed) of a d-dimensional substitution")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["ascii", "pgm"], default="ascii")
    p.set_defaults(func=cmd_ndfix)

    p = sub.add_parser("ndfreq", help="exact frequencies of side-R cubic patterns")
    p.add_argument("file")
    p.add_argument("r", type=int)
    p.add_argument("--empirical", type=int, metavar="N", help="also count in S^N(seed)")
    p.set_defaults(func=cmd_ndfreq)

    p = sub.add_parser("ndcheck", help="scaled pattern frequencies and repetitivity")
    p.add_argument("file")
    p.add_argument("max_r", type=int)
    p.add_argument("--compare", type=int)
    p.set_defaults(func=cmd_ndcheck)

    p = sub.add_parser("semilinear", help="enumerate a semilinear set")
    p.add_argument("action", choices=["enum"])
    p.add_argument("file")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_semilinear)

    p = sub.add_parser("muchnik", help="compare a recognizable set with a semilinear set")
    p.add_argument("automaton")
    p.add_argument("semilinear")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_muchnik)

    p = sub.add_parser("cobham-demo", help="one sequence from two substitutions")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--max-len", type=int, default=16)
    p.add_argument("--prefix", type=int, default=100_000)
    p.set_defaults(func=cmd_cobham)

    p = sub.add_parser("render", help="draw a window of a two-dimensional fixed array")
    p.add_argument("file")
    p.add_argument("size", type=int)
    p.add_argument("--format", choices=["pgm", "ascii"], default="pgm")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        out = args.func(args)
    except UsageError as e:
        print(f"autoseq: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"autoseq: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (SpecValidationError, ValueError) as e:
        print(f"autoseq: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:  # noqa: BLE001
        print(f"autoseq: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    if out is not None:
        print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
