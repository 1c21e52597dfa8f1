"""Group carriers: window arithmetic, translation, exact cores."""

import pytest
from hypothesis import given, strategies as st

from idealpack.errors import InvalidParam, ScaleMismatch, ShiftOutOfBudget
from idealpack.groups import (
    CayleyGroup,
    FreeGroup2,
    Window,
    ZModGroup,
    ZWindowGroup,
    make_group,
)
from idealpack.words import ball_size


def klein_four() -> CayleyGroup:
    table = [
        [0, 1, 2, 3],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
        [3, 2, 1, 0],
    ]
    return CayleyGroup(table, 0)


def test_window_validation():
    with pytest.raises(InvalidParam):
        Window(5, 4, 0)
    with pytest.raises(InvalidParam):
        Window(0, 10, -1)
    w = Window(3, 12, 2)
    assert w.size == 10


def test_zwindow_translate_respects_margin():
    g = ZWindowGroup(Window(0, 99, margin=4))
    A = g.set_of([0, 10, 50])
    assert A.translate(3).elements() == [3, 13, 53]
    assert A.translate(-4).elements() == [6, 46]  # 0 falls off, stays honest
    with pytest.raises(ShiftOutOfBudget):
        A.translate(5)


def test_zwindow_exact_core_shrinks():
    g = ZWindowGroup(Window(0, 99, margin=10))
    full = g.exact_core_mask([0])
    smaller = g.exact_core_mask([0, 3])
    smallest = g.exact_core_mask([-2, 0, 3])
    assert smaller & ~full == 0 or full & ~smaller == 0
    # indices [3, 99] then [3, 97]
    assert bin(smaller).count("1") == 97
    assert bin(smallest).count("1") == 95
    assert smallest & ~smaller == 0


@given(st.integers(min_value=2, max_value=40), st.integers(min_value=-100, max_value=100))
def test_zmod_translate_is_rotation(n, s):
    g = ZModGroup(n)
    A = g.set_of([0, 1 % n])
    bits, tally = g.translate_bits(s, A.bits)
    expect = {(0 + s) % n, (1 % n + s) % n}
    assert set(A.translate(s).elements()) == expect
    assert tally == 0  # nothing truncates on a cyclic group


def test_cayley_group_axioms():
    g = klein_four()
    e = g.identity()
    for x in g.elements():
        assert g.mul(x, e) == x
        assert g.mul(x, g.inv(x)) == e
        for y in g.elements():
            assert 0 <= g.mul(x, y) < 4


def test_cayley_rejects_non_group():
    # row 1 repeats an element: not a Latin square
    with pytest.raises(InvalidParam):
        CayleyGroup([[0, 1], [1, 1]], 0)


def test_free_group_translate_truncates():
    g = FreeGroup2(2)
    A = g.set_of(["", "a", "b"])
    # left-translate by b: identity->b, a->ba, b->bb; all still in the ball
    T = A.translate("b")
    assert sorted(T.elements()) == ["b", "ba", "bb"]
    # translate by a long word pushes members outside depth 2
    _, tally = g.translate_bits("bb", A.bits)
    assert tally > 0


def test_free_group_core_mask_is_prefix():
    g = FreeGroup2(4)
    core = g.exact_core_mask(["b", "ab"])  # max length 2 -> ball of radius 2
    assert core == (1 << ball_size(2)) - 1


def test_make_group():
    assert make_group("z-window", lo=0, hi=9, margin=1).size == 10
    assert make_group("z-mod", modulus=7).size == 7
    assert make_group("free-2", depth=3).size == ball_size(3)
    with pytest.raises(InvalidParam):
        make_group("nope")


def test_set_algebra_and_scale_mismatch():
    g = ZModGroup(10)
    A = g.set_of([1, 2, 3])
    B = g.set_of([3, 4])
    assert A.inter(B).elements() == [3]
    assert A.union(B).cardinality() == 4
    assert A.diff(B).elements() == [1, 2]
    assert A.compl().cardinality() == 7
    other = ZModGroup(11).set_of([1])
    with pytest.raises(ScaleMismatch):
        A.union(other)


def test_density_is_exact_fraction():
    from fractions import Fraction

    g = ZWindowGroup(Window(0, 9, 0))
    A = g.set_of([0, 2, 4])
    assert A.density() == Fraction(3, 10)
