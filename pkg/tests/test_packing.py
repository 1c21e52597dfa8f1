"""Packing index: conflict oracles, greedy floor, exact search, budgets."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from idealpack.errors import BudgetExceeded, InvalidParam, RangeExceedsMargin
from idealpack.groups import MaterializedSet, Window, ZModGroup, ZWindowGroup
from idealpack.ideals import DensityZeroIdeal, FiniteSetsIdeal, TrivialIdeal
from idealpack.packing import (
    ConflictOracle,
    candidate_translators,
    pack_exact,
    pack_greedy,
    pack_profile,
)


def brute_pack(A, ideal, candidates, n):
    """Largest subset of candidates with every n-subset's intersection a member."""
    oracle = ConflictOracle(A, ideal, candidates, n)
    m = len(candidates)
    for size in range(m, n - 1, -1):
        for combo in itertools.combinations(range(m), size):
            if all(not oracle.is_edge(sub) for sub in itertools.combinations(combo, n)):
                return size
    return min(n - 1, m)


position_sets = st.sets(st.integers(min_value=0, max_value=59), min_size=1, max_size=25)


# -- oracle equivalence: fast pair paths vs literal intersection ---------------


@given(position_sets, st.integers(2, 8))
@settings(max_examples=60, deadline=None)
def test_zwindow_pair_oracle_matches_literal(ps, span):
    g = ZWindowGroup(Window(0, 59, margin=8))
    A = g.set_of(ps)
    candidates = list(range(min(span, 8) + 1))
    fast = ConflictOracle(A, TrivialIdeal(), candidates, 2)
    assert fast._mode == "z-window-pairs"
    for i, j in itertools.combinations(range(len(candidates)), 2):
        bi, _ = g.translate_bits(candidates[i], A.bits)
        bj, _ = g.translate_bits(candidates[j], A.bits)
        # each pair is judged on its own exact core
        core = g.exact_core_mask([candidates[i], candidates[j]])
        literal = (bi & bj & core) != 0
        assert fast.is_edge((i, j)) == literal


@given(st.sets(st.integers(0, 23), min_size=1, max_size=12))
@settings(max_examples=60, deadline=None)
def test_zmod_pair_oracle_matches_literal(ps):
    g = ZModGroup(24)
    A = g.set_of(ps)
    candidates = list(range(8))
    fast = ConflictOracle(A, TrivialIdeal(), candidates, 2)
    assert fast._mode == "z-mod-pairs"
    for i, j in itertools.combinations(range(8), 2):
        bi, _ = g.translate_bits(i, A.bits)
        bj, _ = g.translate_bits(j, A.bits)
        assert fast.is_edge((i, j)) == ((bi & bj) != 0)


# -- exact search vs brute force -----------------------------------------------


@given(position_sets)
@settings(max_examples=40, deadline=None)
def test_exact_matches_brute_pairs(ps):
    g = ZWindowGroup(Window(0, 59, margin=8))
    A = g.set_of(ps)
    candidates = list(range(7))
    r = pack_exact(A, TrivialIdeal(), candidates, 2)
    assert r.value == brute_pack(A, TrivialIdeal(), candidates, 2)
    assert r.flag in ("exact", "saturated")


@given(st.sets(st.integers(0, 19), min_size=1, max_size=10))
@settings(max_examples=30, deadline=None)
def test_exact_matches_brute_triples(ps):
    g = ZModGroup(20)
    A = g.set_of(ps)
    candidates = list(range(6))
    r = pack_exact(A, TrivialIdeal(), candidates, 3)
    assert r.value == brute_pack(A, TrivialIdeal(), candidates, 3)


@given(st.sets(st.integers(0, 39), min_size=1, max_size=16))
@settings(max_examples=30, deadline=None)
def test_exact_with_finite_sets_ideal_matches_brute(ps):
    g = ZWindowGroup(Window(0, 39, margin=8))
    A = g.set_of(ps)
    I = FiniteSetsIdeal(cutoff=2)
    candidates = list(range(6))
    r = pack_exact(A, I, candidates, 2)
    assert r.value == brute_pack(A, I, candidates, 2)


# -- structural facts -----------------------------------------------------------


def test_known_values_evens_and_triangular():
    g = ZWindowGroup(Window(0, 9999, margin=16))
    evens = g.set_of(range(0, 10000, 2))
    r = pack_exact(evens, TrivialIdeal(), list(range(10)), 2)
    assert (r.value, r.flag) == (2, "exact")
    assert r.family == [0, 1]

    tri = g.set_of([k * (k + 1) // 2 for k in range(141)])
    r = pack_exact(tri, TrivialIdeal(), list(range(10)), 2)
    assert (r.value, r.flag) == (1, "exact")

    r3 = pack_exact(evens, TrivialIdeal(), list(range(10)), 3)
    assert (r3.value, r3.family) == (4, [0, 1, 2, 3])


@given(position_sets)
@settings(max_examples=25, deadline=None)
def test_value_monotone_in_n(ps):
    g = ZWindowGroup(Window(0, 59, margin=8))
    A = g.set_of(ps)
    candidates = list(range(6))
    reports = pack_profile(A, TrivialIdeal(), [2, 3, 4], candidates, exact=True)
    values = [r.value for r in reports]
    assert values == sorted(values)


@given(position_sets, st.integers(1, 6))
@settings(max_examples=25, deadline=None)
def test_value_translate_invariant(ps, t):
    # shifting A leaves the conflict pattern alone when nothing truncates
    g = ZWindowGroup(Window(0, 99, margin=16))
    A = g.set_of(ps)
    B = A.translate(t)
    candidates = list(range(5))
    va = pack_exact(A, TrivialIdeal(), candidates, 2).value
    vb = pack_exact(B, TrivialIdeal(), candidates, 2).value
    assert va == vb


def test_greedy_is_certified_floor():
    g = ZWindowGroup(Window(0, 999, margin=32))
    A = g.set_of(range(0, 1000, 3))
    candidates = list(range(12))
    lo = pack_greedy(A, TrivialIdeal(), candidates, 2)
    hi = pack_exact(A, TrivialIdeal(), candidates, 2)
    assert lo.flag in ("lower-bound", "saturated")
    assert lo.value <= hi.value
    # the greedy family really is independent
    oracle = ConflictOracle(A, TrivialIdeal(), candidates, 2)
    idx = {c: i for i, c in enumerate(candidates)}
    for x, y in itertools.combinations(lo.family, 2):
        assert not oracle.is_edge(tuple(sorted((idx[x], idx[y]))))


def test_member_shortcut_saturates():
    g = ZWindowGroup(Window(0, 1999, margin=16))
    A = g.set_of([3, 700])
    I = FiniteSetsIdeal(cutoff=16)
    r = pack_exact(A, I, list(range(10)), 2)
    assert r.flag == "saturated"
    assert r.value == 10 and len(r.family) == 10


def test_floor_reported():
    g = ZWindowGroup(Window(0, 99, margin=8))
    A = g.set_of(range(100))  # everything conflicts with everything
    r = pack_exact(A, TrivialIdeal(), list(range(5)), 3)
    assert r.floor == 2  # n-1 translates can never produce an n-fold conflict
    assert r.value >= r.floor


# -- budgets and guards -----------------------------------------------------------


def test_node_budget_degrades_to_lower_bound():
    g = ZWindowGroup(Window(0, 2999, margin=64))
    A = g.set_of(range(0, 3000, 3))
    r = pack_exact(A, TrivialIdeal(), list(range(50)), 2, node_budget=3)
    assert r.flag == "lower-bound"
    assert r.stats.get("budget_hit") is True
    assert r.value >= 1


def test_exact_cap_on_hypergraph_search():
    g = ZWindowGroup(Window(0, 999, margin=80))
    A = g.set_of(range(0, 1000, 2))
    with pytest.raises(BudgetExceeded):
        pack_exact(A, TrivialIdeal(), list(range(70)), 3)


def test_bad_arity_and_duplicates():
    g = ZWindowGroup(Window(0, 99, margin=8))
    A = g.set_of([1, 2])
    with pytest.raises(InvalidParam):
        pack_exact(A, TrivialIdeal(), [0, 1], 1)
    with pytest.raises(InvalidParam):
        pack_exact(A, TrivialIdeal(), [0, 0, 1], 2)


def test_candidate_translators_respects_margin():
    g = ZWindowGroup(Window(0, 99, margin=4))
    assert candidate_translators(g, shift_range=3) == [0, 1, 2, 3]
    with pytest.raises(RangeExceedsMargin):
        candidate_translators(g, shift_range=9)
    zm = ZModGroup(6)
    assert candidate_translators(zm) == [0, 1, 2, 3, 4, 5]
