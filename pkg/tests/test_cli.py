import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from autoseq import catalog
from autoseq.cli import main
from autoseq.formats import (ParseError, SpecFile, SpecValidationError, parse_automaton,
                             parse_blockmap, parse_ndsubstitution, parse_semilinear, parse_spec,
                             parse_substitution, print_spec, print_substitution, render_window)
from autoseq.ndsub import ArrayWindow, NdSubstitution, fixed_array
from autoseq.substitution import Substitution
from autoseq.words import Alphabet

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ---- formats


def test_sigma3_file():
    s, coding = parse_substitution((DATA / "sigma3.sub").read_text())
    assert s == catalog.sigma3()
    assert coding.letter("a") == 1 and coding.letter("b") == 0


def test_parse_errors_and_validation_errors():
    with pytest.raises(SpecValidationError):
        parse_spec((DATA / "unknown_letter.sub").read_text())
    with pytest.raises(ParseError):
        parse_spec("")
    with pytest.raises(ParseError) as e:
        parse_spec((DATA / "bad_syntax.sub").read_text())
    assert e.value.line == 3


def test_length_line_checked():
    with pytest.raises(SpecValidationError):
        parse_substitution("alphabet: a b\nlength: 3\nseed: a\nrule a -> a b\nrule b -> b a\n")


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.iterdir()
                                        if p.name not in ("unknown_letter.sub", "empty.sub", "bad_syntax.sub")))
def test_round_trip(name):
    spec = parse_spec((DATA / name).read_text())
    text = print_spec(spec)
    again = parse_spec(text)
    assert again.kind == spec.kind and again.value == spec.value
    assert print_spec(again) == text


def test_kinds():
    assert isinstance(parse_automaton((DATA / "e2.aut").read_text()).table, tuple)
    assert parse_ndsubstitution((DATA / "tm2d.nsub").read_text()) == catalog.thue_morse_2d()
    assert parse_semilinear((DATA / "even_sum.sl").read_text()).d == 2
    assert parse_blockmap((DATA / "radius1.bm").read_text()).radius == 1


def test_ndsub_block_order():
    # row = axis-2 index, axis 1 along the row
    S = parse_ndsubstitution("dim: 2\nside: 2\nalphabet: a b\nseed: a\nrule a:\na a\nb b\nrule b:\nb b\nb b\n")
    assert S.block("a").letters().tolist() == [["a", "b"], ["a", "b"]]


def test_three_dimensional_block_round_trip():
    rng = np.random.default_rng(3)
    blocks = rng.integers(0, 2, size=(2, 2, 2, 2))
    blocks[0, 0, 0, 0] = 0
    S = NdSubstitution(Alphabet.of("ab"), 2, blocks, "a")
    assert parse_spec(print_spec(SpecFile("ndsubstitution", S))).value == S


def test_render_examples():
    block = ArrayWindow.from_letters(Alphabet.of("ab"), [["a", "b"], ["b", "a"]])
    assert render_window(block, "pgm") == "P2\n2 2\n1\n0 1\n1 0"
    one = ArrayWindow.from_letters(Alphabet.of("ab"), [["b"]])
    assert render_window(one, "pgm").splitlines()[-1] == "1"
    lines = render_window(fixed_array(catalog.thue_morse_2d(), 2), "ascii").splitlines()
    assert len(lines) == 4 and all(len(l) == 4 for l in lines)
    with pytest.raises(ValueError):
        render_window(ArrayWindow(Alphabet.of("ab"), np.zeros(3, dtype=int)), "pgm")


def test_render_axis_orientation():
    # axis 1 = columns: cell (x, y) is column x of row y
    w = ArrayWindow.from_letters(Alphabet.of("ab"), [["a", "a", "a"], ["b", "b", "b"]])
    assert render_window(w, "pgm") == "P2\n2 3\n1\n0 1\n0 1\n0 1"


rules = st.lists(st.text("abc", min_size=2, max_size=2), min_size=3, max_size=3)


@settings(max_examples=40)
@given(rules, st.sampled_from("abc"))
def test_substitution_round_trip_property(images, seed):
    s = Substitution.from_rules(dict(zip("abc", images)), seed=seed, alphabet=Alphabet.of("abc"))
    text = print_substitution(s)
    back, _ = parse_substitution(text)
    assert back == s and print_substitution(back) == text


# ---- commands


def test_rep_val(capsys):
    assert run(capsys, "rep", 5)[1] == "101\n"
    assert run(capsys, "rep", 0)[1] == "\n"
    assert run(capsys, "rep", 4, "--terms", "1,2", "--recurrence", "1,1")[1] == "101\n"
    assert run(capsys, "val", "20", "--base", 3)[1] == "6\n"


def test_aut_commands(capsys):
    e2 = DATA / "e2.aut"
    assert run(capsys, "aut", "run", e2, "100")[1].startswith("accept")
    assert run(capsys, "aut", "run", e2, "101")[1].startswith("reject")
    assert run(capsys, "aut", "enum", e2, 10)[1].split() == ["1", "2", "4", "8"]
    assert run(capsys, "aut", "enum", DATA / "even_sum.aut", 3)[1].split() == ["(0,0)", "(0,2)", "(1,1)", "(2,0)", "(2,2)"]
    code, out, _ = run(capsys, "aut", "normalize", e2)
    assert code == 0 and parse_automaton(out) == parse_automaton(e2.read_text())


def test_aut2sub_and_back(capsys):
    code, out, _ = run(capsys, "aut2sub", DATA / "e2.aut")
    s, coding = parse_substitution(out)
    assert [str(i) for i in s.images] == ["ab", "bc", "cc"]
    code, out, _ = run(capsys, "sub2aut", DATA / "sigma3.sub")
    assert code == 0 and "terminal: a" in out
    code, out, _ = run(capsys, "aut2sub", DATA / "even_sum.aut")
    assert parse_spec(out).kind == "ndsubstitution"


def test_sequence_commands(capsys):
    sub = DATA / "sigma3.sub"
    assert run(capsys, "fix", sub, 10)[1] == "abbabaabba\n"
    assert run(capsys, "fix", sub, 10, "--coded")[1] == "1001011001\n"
    out = run(capsys, "freq", sub, 2)[1]
    assert out.split("\n")[:4] == ["aa\t1/6", "ab\t1/3", "ba\t1/3", "bb\t1/6"]
    assert "values (3) 1/3 1/2 2/3" in run(capsys, "thetascale", sub, 8)[1]
    assert run(capsys, "retwords", sub, "a", "--prefix", 1000)[1].split("\n")[:3] == ["a", "ab", "abb"]
    assert run(capsys, "complexity", sub, 3)[1] == "1 2\n2 4\n3 6\n"
    assert run(capsys, "periodic", sub)[1].startswith("NON-PERIODIC")
    assert run(capsys, "periodic", DATA / "e1_base2.sub", "--coded")[1].startswith("PERIODIC period 2")


def test_arithmetic_commands(capsys):
    assert run(capsys, "indep", 2, 3)[1] == "independent\n"
    assert run(capsys, "indep", 4, 8)[1] == "dependent 3 2\n"
    assert run(capsys, "density", 2, 3, 1, "0.06")[1] == "8 5\n"


def test_nd_commands(capsys):
    nsub = DATA / "tm2d.nsub"
    assert run(capsys, "ndfix", nsub, 2)[1] == "abba\nbaab\nbaab\nabba\n"
    assert run(capsys, "render", nsub, 2)[1] == "P2\n2 2\n1\n0 1\n1 0\n"
    out = run(capsys, "ndfreq", nsub, 2)[1]
    assert "ab/ba\t2/9" in out.splitlines()
    out = run(capsys, "ndcheck", nsub, 4)[1]
    assert "values (4) 8/9 16/9 2 32/9" in out and "stable between R <= 2 and R <= 4: yes" in out


def test_semilinear_and_muchnik(capsys):
    assert run(capsys, "semilinear", "enum", DATA / "evens.sl", 7)[1].split() == ["0", "2", "4", "6"]
    assert run(capsys, "muchnik", DATA / "even_sum.aut", DATA / "even_sum.sl", 64)[1].startswith("EQUAL")
    out = run(capsys, "muchnik", DATA / "e2.aut", DATA / "evens.sl", 16)[1]
    assert out.startswith("DISCREPANCY") and "first at 0" in out


def test_cobham_command(capsys):
    code, out, _ = run(capsys, "cobham-demo", DATA / "e1_base2.sub", DATA / "e1_base3.sub", "--prefix", 4096)
    assert code == 0 and "PERIODIC period 2" in out


def test_builtins(capsys):
    assert run(capsys, "fix", "@E3", 10, "--coded")[1] == "1001011001\n"


def test_exit_codes(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "fix", DATA / "missing.sub", 3)[0] == 2
    assert run(capsys, "fix", DATA / "empty.sub", 3)[0] == 3
    assert run(capsys, "fix", DATA / "bad_syntax.sub", 3)[0] == 3
    code, _, err = run(capsys, "fix", DATA / "unknown_letter.sub", 3)
    assert code == 4 and "not in alphabet" in err
    assert run(capsys, "freq", "@sigma2", 2)[0] == 4
    # a negative answer is still success
    assert run(capsys, "aut", "run", DATA / "e2.aut", "11")[0] == 0


def test_deterministic_output(capsys):
    first = run(capsys, "ndfreq", DATA / "tm2d.nsub", 3)[1]
    assert run(capsys, "ndfreq", DATA / "tm2d.nsub", 3)[1] == first


@pytest.mark.skipif(shutil.which("autoseq") is None, reason="console script not installed")
def test_console_script():
    done = subprocess.run(["autoseq", "render", str(DATA / "tm2d.nsub"), "2"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout == "P2\n2 2\n1\n0 1\n1 0\n"
