import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from autoseq import catalog
from autoseq.definability import (Box, LocalPeriodicityWitness, PseudoWitness, SemilinearSet,
                                  check_locally_periodic, check_pseudo_periodic, find_local_witness,
                                  is_v_periodic_inside, muchnik_equivalence, sections,
                                  semilinear_members)
from autoseq.ndsub import fixed_array

N = 64


def even_sum(n=N):
    return np.add.outer(np.arange(n), np.arange(n)) % 2 == 0


def diagonal(n=N):
    return np.eye(n, dtype=bool)


def powers_on_axis(n=N):
    Z = np.zeros((n, n), dtype=bool)
    for k in range(7):
        if 2 ** k < n:
            Z[2 ** k, 0] = True
    return Z


def test_v_periodic_inside():
    assert is_v_periodic_inside(even_sum(), (1, 1), Box((0, 0), 8)).passed
    v = is_v_periodic_inside(even_sum(), (1, 0), Box((0, 0), 8))
    assert not v.passed and v.witness == (0, 0)
    assert is_v_periodic_inside(np.zeros((8, 8), bool), (1, 0), Box((0, 0), 8)).passed


def test_locally_periodic_examples():
    w = LocalPeriodicityWitness(((1, 1),), 3, 0)
    assert check_locally_periodic(even_sum(), w, 32).passed
    assert check_locally_periodic(diagonal(), w, 32).passed
    v = check_locally_periodic(powers_on_axis(), LocalPeriodicityWitness(((1, 0),), 3, 0), 32)
    assert v.status == "FAIL" and isinstance(v.witness, Box)


def test_witness_validation():
    with pytest.raises(ValueError):
        LocalPeriodicityWitness(((3, 0),), 3)
    with pytest.raises(ValueError):
        LocalPeriodicityWitness(((0, 0),), 3)


def test_sections():
    assert (sections(even_sum(10), 0, 0) == (np.arange(10) % 2 == 0)).all()
    assert np.flatnonzero(sections(diagonal(10), 0, 5)).tolist() == [5]
    assert not sections(np.zeros((4, 4), bool), 1, 2).any()


def test_pseudo_periodic_examples():
    wit = PseudoWitness(local=LocalPeriodicityWitness(((1, 1),), 3, 0), section=PseudoWitness(period=2))
    assert check_pseudo_periodic(even_sum(), wit, 32).passed
    tm = fixed_array(catalog.thue_morse_2d(), 6)
    v = check_pseudo_periodic(tm, {"a": wit, "b": wit}, 32)
    assert v.status == "FAIL" and v.witness is not None
    const = np.ones((40, 40), dtype=bool)
    assert check_pseudo_periodic(const, PseudoWitness(LocalPeriodicityWitness(((1, 0),), 2), PseudoWitness(period=1)), 32).passed


def test_find_local_witness():
    w = find_local_witness(even_sum(), 16)
    assert w is not None and check_locally_periodic(even_sum(), w, 16).passed


def test_semilinear_members():
    assert semilinear_members(SemilinearSet(1, {(0,)}, (((2,),),)), 10) == {(i,) for i in range(0, 10, 2)}
    SL = SemilinearSet(2, {(0, 0)}, (((1, 1), (2, 0), (0, 2)),))
    assert (SL.window(12) == even_sum(12)).all()
    assert semilinear_members(SemilinearSet(2, {(1, 0)}), 5) == {(1, 0)}


def test_muchnik():
    evens = SemilinearSet(1, {(0,)}, (((2,),),))
    assert muchnik_equivalence(catalog.recognizable("E1").window(64), evens, 64).status == "EQUAL"
    SL = SemilinearSet(2, {(0, 0)}, (((1, 1), (2, 0), (0, 2)),))
    assert muchnik_equivalence(catalog.recognizable("even_sum").window(64), SL, 64).status == "EQUAL"
    v = muchnik_equivalence(catalog.recognizable("E2").window(64), evens, 64)
    assert v.status == "DISCREPANCY" and 1 in v.witness and v.witness[0] == 0


def naive_locally_periodic(Z, V, K, L, bound):
    for j in itertools.product(range(bound + 1), repeat=2):
        if max(j) < L:
            continue
        ok = False
        for v in V:
            good = True
            for u in itertools.product(range(K), repeat=2):
                a = (j[0] + u[0], j[1] + u[1])
                b = (a[0] + v[0], a[1] + v[1])
                if all(j[i] <= b[i] < j[i] + K for i in range(2)) and Z[a] != Z[b]:
                    good = False
                    break
            if good:
                ok = True
                break
        if not ok:
            return False
    return True


@settings(max_examples=40, deadline=None)
@given(st.lists(st.booleans(), min_size=144, max_size=144),
       st.sampled_from([((1, 0),), ((1, 1),), ((0, 1), (1, -1)), ((2, 1),)]),
       st.integers(3, 4), st.integers(0, 3))
def test_box_sums_match_naive(cells, V, K, L):
    Z = np.array(cells).reshape(12, 12)
    w = LocalPeriodicityWitness(V, K, L)
    assert check_locally_periodic(Z, w, 6).passed == naive_locally_periodic(Z, V, K, L, 6)


@settings(max_examples=30)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=3),
       st.tuples(st.integers(0, 5), st.integers(0, 5)))
def test_semilinear_cone_closed_under_generators(gens, base):
    SL = SemilinearSet(2, {base}, (tuple(gens),))
    members = SL.members(20)
    # cone part: 0 + N gens is closed under adding a generator (inside the box)
    cone = semilinear_members(SemilinearSet(2, set(), (tuple(gens),)), 20)
    for p in cone:
        for g in gens:
            q = (p[0] + g[0], p[1] + g[1])
            if max(q) < 20:
                assert q in cone
    assert (0, 0) in cone and members >= cone
