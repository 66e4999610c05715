import random

import pytest
from hypothesis import given, settings, strategies as st

from posskit.errors import CapExceeded, InputError
from posskit.poset import (Poset, all_posets, closure, enumerate_downsets, enumerate_regular_opens,
                           interior, is_downset, is_regular_open, is_separative, mask_of,
                           random_poset, regularize, ro_neg, separative_quotient, worlds)
from posskit.samples import t2


def idx(P, *names):
    return mask_of(P.index(n) for n in names)


def test_t2_counts():
    P = t2()
    assert len(enumerate_downsets(P)) == 26
    assert len(enumerate_regular_opens(P)) == 16


def test_t2_regularize_and_regular_open():
    P = t2()
    assert regularize(P, idx(P, "00", "01")) == idx(P, "0", "00", "01")
    assert is_regular_open(P, idx(P, "00", "10"))
    assert not is_regular_open(P, idx(P, "00", "01"))
    assert is_separative(P)


def test_chain_is_not_separative_and_collapses():
    P = Poset.chain(3)
    assert not is_separative(P)
    Q, cls = separative_quotient(P)
    assert Q.size == 1 and set(cls) == {0}
    assert enumerate_regular_opens(P) == [0, P.full]


def test_order_axioms_rejected():
    with pytest.raises(InputError):
        Poset(("a", "b"), ((True, True), (True, True)))
    with pytest.raises(InputError):
        Poset(("a", "a"), ((True, False), (False, True)))
    with pytest.raises(InputError):
        Poset.from_pairs(["a"], [("a", "zz")])


def test_unknown_element_and_index():
    P = t2()
    with pytest.raises(InputError):
        P.index("nope")
    with pytest.raises(InputError):
        P.check_index(99)


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_downsets(Poset.discrete(5), cap=4)


def test_poset_counts_up_to_iso():
    assert [len(all_posets(n)) for n in range(1, 5)] == [1, 2, 5, 16]


def test_worlds_of_tree():
    P = t2()
    assert worlds(P) == idx(P, "00", "01", "10", "11")


posets = st.builds(lambda seed, n: random_poset(random.Random(seed), n),
                   st.integers(0, 10**6), st.integers(1, 6))


@given(posets, st.data())
@settings(max_examples=80, deadline=None)
def test_interior_closure_laws(P, data):
    U = data.draw(st.integers(0, P.full))
    assert is_downset(P, interior(P, U))
    assert interior(P, U) & ~U == 0
    assert U & ~closure(P, U) == 0
    R = regularize(P, U)
    assert regularize(P, R) == R
    assert ro_neg(P, ro_neg(P, R)) == R


@given(posets)
@settings(max_examples=60, deadline=None)
def test_regular_opens_are_fixpoints_of_double_negation(P):
    for U in enumerate_downsets(P):
        assert is_regular_open(P, U) == (ro_neg(P, ro_neg(P, U)) == U)


@given(posets)
@settings(max_examples=60, deadline=None)
def test_separative_quotient_is_separative_with_same_algebra_size(P):
    Q, _ = separative_quotient(P)
    assert is_separative(Q)
    assert len(enumerate_regular_opens(Q)) == len(enumerate_regular_opens(P))
