"""The twelve acceptance criteria, each at its stated tolerance and time budget.

Run ``pytest tests/test_acceptance.py`` (the summary lists one PASS/FAIL
line per criterion) or ``python tests/test_acceptance.py``.
Frozen oracle values come from the scripts in tests/oracles/.
"""
import time
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest

from autoseq import catalog
from autoseq.automata import (Automaton, RecognizableSet, accepts, automaton_to_substitution,
                              normalize_for_conversion)
from autoseq.definability import (LocalPeriodicityWitness, PseudoWitness, SemilinearSet,
                                  check_pseudo_periodic, muchnik_equivalence)
from autoseq.factor_maps import (BlockMap, apply_block_map, cobham_demo, factor_frequency_table,
                                 preimages)
from autoseq.ndsub import Pattern, count_pattern, fixed_array, pattern_frequency, verify_freq_array
from autoseq.numeration import greedy_rep, tuple_alphabet
from autoseq.perron import (empirical_frequencies, letter_frequencies, two_block_frequencies,
                            verify_theta_scaling, word_frequencies)
from autoseq.recurrence import (check_linrec_props, density_search, is_ultimately_periodic,
                                lr_constant_estimate, multiplicatively_independent)
from autoseq.substitution import (Coding, Substitution, coded_prefix,
                                  fixed_point_prefix, k_block_substitution, language)
from autoseq.words import Alphabet, Word

# frozen from tests/oracles/tm_theta_scaling.py
TM_SCALED = (F(1, 3), F(1, 2), F(2, 3))
# frozen from tests/oracles/tm2d_pattern_scaling.py
TM2D_SCALED = (F(8, 9), F(16, 9), F(2), F(32, 9))

RESULTS: list[str] = []


def _rename(s1: Substitution, s2: Substitution) -> bool:
    """Breadth-first letter matching from the seeds; True iff a bijection carries s1 onto s2."""
    if len(s1.alphabet) != len(s2.alphabet):
        return False
    m = {s1.seed: s2.seed}
    queue = [s1.seed]
    seen = {s1.seed}
    while queue:
        a = queue.pop(0)
        i1, i2 = s1.image(a).letters, s2.image(m[a]).letters
        if len(i1) != len(i2):
            return False
        for x, y in zip(i1, i2):
            if m.setdefault(x, y) != y:
                return False
            if x not in seen:
                seen.add(x)
                queue.append(x)
    return len(m) == len(s1.alphabet) and len(set(m.values())) == len(m)


# --------------------------------------------------------------------------


def criterion_1():
    pairs = [(catalog.e1_automaton(2), catalog.sigma1()), (catalog.e1_automaton(3), catalog.sigma1_bar()),
             (catalog.e2_automaton(), catalog.sigma2()), (catalog.e3_automaton(), catalog.sigma3())]
    ok = True
    for a, expected in pairs:
        s, _ = automaton_to_substitution(normalize_for_conversion(a))
        ok &= _rename(s, expected)
    s3, c3 = automaton_to_substitution(catalog.e3_automaton())
    prefix = "".join(map(str, coded_prefix(s3, c3, 10).letters))
    return ok and prefix == "1001011001", f"table matches: {ok}, E3 prefix {prefix}"


def criterion_2():
    n = 1 << 16
    details = []
    ok = True
    for name in ("E1", "E1_3", "E2", "E3"):
        r = catalog.recognizable(name)
        s, c = automaton_to_substitution(normalize_for_conversion(r.automaton))
        seq = np.array(coded_prefix(s, c, n).letters)
        member = r.window(n).astype(int)
        good = np.array_equal(seq, member)
        # the vectorized run is cross-checked against a direct run on ρ_p(x)
        sample = range(0, n, 97)
        good &= all(seq[x] == accepts(r.automaton, greedy_rep(r.base, x)) for x in sample)
        ok &= good
        details.append(f"{name}:{'ok' if good else 'MISMATCH'}")
    return ok, " ".join(details) + f" for n < {n}"


def criterion_3():
    s = catalog.sigma3()
    letters = letter_frequencies(s)
    table = word_frequencies(s, 2)
    exact = {("a", "a"): F(1, 6), ("a", "b"): F(1, 3), ("b", "a"): F(1, 3), ("b", "b"): F(1, 6)}
    ok = dict(letters.items()) == {("a",): F(1, 2), ("b",): F(1, 2)} and dict(table.items()) == exact
    x = fixed_point_prefix(s, 10 ** 6)
    worst = 0.0
    for k in (1, 2, 3, 4):
        emp = empirical_frequencies(x, k)
        for u, f in word_frequencies(s, k).items():
            worst = max(worst, abs(emp.get(u, 0.0) - float(f)))
    return ok and worst < 1e-3, f"exact tables ok: {ok}, max empirical error {worst:.2e} on 10^6 letters"


def criterion_4():
    s = catalog.sigma3()
    ok = True
    for k in range(1, 7):
        sk = k_block_substitution(s, k)
        via_blocks = letter_frequencies(sk)
        direct = two_block_frequencies(s, k)
        ok &= all(direct[u] == via_blocks[(u,)] for u in sk.alphabet)
        ok &= set(direct.values) == set(sk.alphabet)
        for n in range(1, 11):
            p, q = sk.power(n), s.power(n)
            ok &= all(len(p.image(u)) == len(q.image(u[0])) for u in sk.alphabet)
    return ok, "freq(u) = freq_σk((u)) for k <= 6 and |σkⁿ((u))| = |σⁿ(u1)| for n <= 10"


def criterion_5():
    rep = verify_theta_scaling(catalog.sigma3(), 16, 12)
    ok = rep.stable and rep.values == TM_SCALED and not rep.periodic
    return ok, f"F̂ = {{{', '.join(map(str, rep.values))}}}, cardinality {rep.cardinality}, equal at 12 and 16: {rep.stable}"


def criterion_6():
    s = catalog.sigma3()
    K = lr_constant_estimate(s, 64).k_hat
    rep = check_linrec_props(s, K, 32, power_prefix=10 ** 5, complexity_len=64)
    failed = [c.name for c in rep.checks if not c.passed]
    return rep.passed, f"K̂ = {K}; " + ("all checks pass" if not failed else "failed: " + ", ".join(failed))


def criterion_7():
    s1, c1 = automaton_to_substitution(catalog.e1_automaton(2))
    e1 = is_ultimately_periodic(coded_prefix(s1, c1, 1 << 14))
    tm = is_ultimately_periodic(fixed_point_prefix(catalog.sigma3(), 1 << 14))
    ok = (e1.status == "PERIODIC" and e1.period == 2 and e1.certified
          and tm.status == "NON-PERIODIC" and tm.witness_count > tm.witness_n)
    return ok, f"E1: {e1}; TM: {tm}"


def criterion_8():
    ok = multiplicatively_independent(2, 3).independent
    dep = multiplicatively_independent(4, 8)
    ok &= (not dep.independent) and dep.witness == (3, 2)
    found = density_search(2, 3, 1, F(6, 100))
    # exhaustive oracle over n + m <= 13
    best = min((n + m, n, m) for n in range(14) for m in range(14 - n)
               if (n, m) != (0, 0) and 1 < F(2 ** n, 3 ** m) < F(106, 100))
    ok &= found == (8, 5) and best[0] == sum(found)
    return ok, f"indep(2,3), dep(4,8) = {dep.witness}, density {found} ({float(F(256, 243)):.4f}), minimal"


def criterion_9():
    s = catalog.sigma3()
    K = lr_constant_estimate(s, 64).k_hat
    ab, bits = s.alphabet, Alphabet((0, 1))
    maps = {"Morse": BlockMap.from_coding(Coding.from_map({"a": 1, "b": 0}, ab, bits)),
            "edge": BlockMap.from_function(1, ab, bits, lambda t: int(t[0] != t[2]))}
    x = fixed_point_prefix(s, 1 << 20)
    bound = 4 * K * (K + 1)
    ok, notes = True, []
    for name, f in maps.items():
        worst = 0
        for n in range(1, 33):
            L = [Word(v, ab) for v in language(s, n + 2 * f.radius)]
            counts = Counter(apply_block_map(f, v).letters for v in L)
            worst = max(worst, max(counts.values()))
            if n <= 6:
                for u, c in counts.items():
                    ok &= len(preimages(f, Word(u, bits), L)) == c
        ok &= worst <= bound
        y = apply_block_map(f, x)
        err = 0.0
        for n in range(1, 7):
            emp = empirical_frequencies(y, n)
            table = factor_frequency_table(s, f, n)
            ok &= sum(table.values()) == 1
            err = max(err, max(abs(emp.get(u, 0.0) - float(v)) for u, v in table.items()))
        ok &= err < 1e-3
        notes.append(f"{name}: max #preimages {worst} <= {bound}, freq error {err:.1e}")
    return ok, f"K̂ = {K}; " + "; ".join(notes)


def criterion_10():
    S = catalog.thue_morse_2d()
    w = fixed_array(S, 8)
    # independent automaton: parity of the total binary digit sum of (x, y)
    alpha = tuple_alphabet(2, 2)
    table = tuple(tuple((q + a + b) % 2 for (a, b) in alpha) for q in (0, 1))
    even = RecognizableSet(Automaton(("even", "odd"), alpha, table, "even", {"even"}), 2, 2)
    ok = np.array_equal(w.codes == 0, even.window(256))
    ab = S.alphabet
    letter = pattern_frequency(S, Pattern.cube(ab, [["a"]]))
    ok &= letter == F(1, 2)
    big = fixed_array(S, 10)
    worst = 0.0
    for cells in np.ndindex(2, 2, 2, 2):
        P = Pattern.cube(ab, [[ab.symbols[cells[0]], ab.symbols[cells[1]]],
                              [ab.symbols[cells[2]], ab.symbols[cells[3]]]])
        exact = pattern_frequency(S, P)
        emp = count_pattern(big, P) / (big.shape[0] - 1) ** 2
        worst = max(worst, abs(emp - float(exact)))
    ok &= worst < 1e-2
    rep = verify_freq_array(S, 4, 2)
    ok &= rep.stable and rep.values == TM2D_SCALED
    return ok, (f"256² array matches automaton, freq(a) = {letter}, 2×2 error {worst:.1e}, "
                f"F̂ = {{{', '.join(map(str, rep.values))}}} stable for R <= 2 and R <= 4")


def criterion_11():
    Z = catalog.recognizable("even_sum").window(64)
    wit = PseudoWitness(local=LocalPeriodicityWitness(((1, 1),), 3, 0), section=PseudoWitness(period=2))
    pseudo = check_pseudo_periodic(Z, wit, 48)
    SL = SemilinearSet(2, {(0, 0)}, (((1, 1), (2, 0), (0, 2)),))
    eq = muchnik_equivalence(Z, SL, 64)
    evens = SemilinearSet(1, {(0,)}, (((2,),),))
    e2 = muchnik_equivalence(catalog.recognizable("E2").window(64), evens, 64)
    ok = pseudo.passed and eq.status == "EQUAL" and e2.status == "DISCREPANCY" and 1 in e2.witness
    return ok, f"pseudo-periodic: {pseudo.status}; even-sum vs SL: {eq.status}; E2 vs 2N: {e2.status}, {e2.detail}"


def criterion_12():
    s1, c1 = automaton_to_substitution(catalog.e1_automaton(2))
    s2, c2 = automaton_to_substitution(catalog.e1_automaton(3))
    rep = cobham_demo(s1, c1, s2, c2)
    return rep.status == "PERIODIC" and rep.period == 2, str(rep).replace("\n", "; ")


CRITERIA = [
    (1, "automaton table reproduction", 1, criterion_1),
    (2, "recognizability semantics", 5, criterion_2),
    (3, "frequencies", 10, criterion_3),
    (4, "k-block laws", None, criterion_4),
    (5, "scaled frequency set", 30, criterion_5),
    (6, "linear recurrence suite", 60, criterion_6),
    (7, "periodicity", None, criterion_7),
    (8, "independence and density", None, criterion_8),
    (9, "factor bounds", 30, criterion_9),
    (10, "two-dimensional arrays", 60, criterion_10),
    (11, "semilinear equivalence", None, criterion_11),
    (12, "Cobham demonstration", None, criterion_12),
]


def evaluate(number, title, budget, fn) -> tuple[bool, str]:
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    timely = budget is None or elapsed < budget
    limit = f" < {budget} s" if budget else ""
    line = (f"[{'PASS' if ok and timely else 'FAIL'}] acceptance {number:2d} {title}: {detail} "
            f"({elapsed:.2f} s{limit})")
    return ok and timely, line


@pytest.mark.parametrize("number,title,budget,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_acceptance(number, title, budget, fn):
    ok, line = evaluate(number, title, budget, fn)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for c in CRITERIA:
        print(evaluate(*c)[1])
