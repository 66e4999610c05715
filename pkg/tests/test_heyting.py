import random

import pytest
from hypothesis import given, settings, strategies as st

from posskit.balg import FiniteLattice, ro_algebra
from posskit.errors import InputError
from posskit.heyting import (all_lattices, check_nucleus, check_residuation,
                             completely_join_primes, downset_algebra, dragalin_represent,
                             extensional, fixpoint_algebra, is_locale, join_prime_generated,
                             lattice_isomorphism, make_nucleus, maximal_chains, nuclear_eval,
                             nuclear_extension)
from posskit.modal import eval_formula
from posskit.poset import Poset, all_posets, closure, is_downset, mask_of, random_poset
from posskit.samples import d1, inquisitive_model
from posskit.syntax import parse, random_formula


def lat(*pairs_and_names):
    names, pairs = pairs_and_names
    return FiniteLattice.from_poset(Poset.from_pairs(names, pairs))


M3 = lat(["0", "a", "b", "c", "1"],
         [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])
N5 = lat(["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def fs(*groups):
    return {frozenset(g) for g in groups}


def sets(P, masks):
    return {frozenset(P.names[i] for i in range(P.size) if m >> i & 1) for m in masks}


def test_downset_algebra_sizes():
    P = d1()
    H = downset_algebra(P)
    assert sets(P, H.carrier) == fs((), "a", "b", "ab", ("a", "b", "1"))
    assert len(downset_algebra(Poset.chain(1)).carrier) == 2
    assert len(downset_algebra(Poset.chain(2)).carrier) == 3
    assert check_residuation(H)


def test_standard_nuclei_pass():
    P = d1()
    H = downset_algebra(P)
    for kind in ("notnot", "beth", "identity"):
        assert check_nucleus(H, make_nucleus(kind, P)), kind
    assert check_nucleus(H, make_nucleus("fm", P, Poset.discrete(3, P.names)))


def test_closure_is_not_a_nucleus_on_d1():
    P = d1()
    chk = check_nucleus(downset_algebra(P), extensional(P, lambda U: closure(P, U), "cl"))
    assert not chk and "multiplicative" in chk.witness


def test_notnot_and_beth_on_d1():
    P = d1()
    a, b, one = (P.index(x) for x in ("a", "b", "1"))
    nn = make_nucleus("notnot", P)
    assert nn(mask_of([a, b])) == P.full
    H = downset_algebra(P)
    fix = fixpoint_algebra(H, nn).elements
    assert sets(P, fix) == fs((), "a", "b", ("a", "b", "1"))
    assert sorted(maximal_chains(P)) == sorted([mask_of([one, a]), mask_of([one, b])])
    jb = make_nucleus("beth", P)
    assert jb(1 << a) == 1 << a and jb(mask_of([a, b])) == P.full
    assert fixpoint_algebra(H, jb).elements == fix


def test_fm_identity_is_identity_and_rejects_non_suborder():
    P = Poset.chain(3)
    j = make_nucleus("fm", P, Poset.discrete(3, P.names))
    assert all(U == V for U, V in j.table)
    with pytest.raises(InputError):
        make_nucleus("fm", Poset.discrete(3), Poset.chain(3))
    with pytest.raises(InputError):
        make_nucleus("fm", P)


def test_fixpoint_rejects_non_nucleus():
    P = d1()
    with pytest.raises(InputError):
        fixpoint_algebra(downset_algebra(P), extensional(P, lambda U: closure(P, U)))


def test_identity_fixpoints_are_whole_algebra():
    P = d1()
    H = downset_algebra(P)
    assert fixpoint_algebra(H, make_nucleus("identity", P)).elements == H.carrier


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_glivenko_on_all_small_posets(n):
    for P in all_posets(n):
        A = fixpoint_algebra(downset_algebra(P), make_nucleus("notnot", P))
        assert A.is_boolean() and A.check_heyting()
        B = ro_algebra(P)
        assert lattice_isomorphism(A.lattice(), FiniteLattice(B.leq, B.labels), cap=16) is not None


def test_locales():
    assert not is_locale(M3) and not is_locale(N5)
    assert is_locale(downset_algebra(d1()).lattice())
    with pytest.raises(InputError):
        dragalin_represent(M3)


def test_join_primes_of_down_d1():
    P = d1()
    L = downset_algebra(P).lattice()
    primes = {L.labels[k] for k in completely_join_primes(L)}
    assert primes == {P.label(P.down[P.index(x)]) for x in ("a", "b", "1")}
    assert join_prime_generated(L)


def test_dragalin_examples():
    three = lat(["0", "m", "1"], [("0", "m"), ("m", "1")])
    P, j = dragalin_represent(three)
    assert P.size == 2 and j.dense
    fix = fixpoint_algebra(downset_algebra(P), j).elements
    assert sets(P, fix) == fs((), "m", ("m", "1"))
    P2, j2 = dragalin_represent(lat(["0", "1"], [("0", "1")]))
    assert P2.size == 1 and len(fixpoint_algebra(downset_algebra(P2), j2).elements) == 2
    B4 = lat(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    P3, j3 = dragalin_represent(B4)
    assert j3(mask_of([P3.index("a"), P3.index("b")])) == P3.full


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_dragalin_roundtrip_and_down_characterization(n):
    for L in all_lattices(n):
        loc = bool(is_locale(L))
        assert loc == L.is_distributive()
        if not loc:
            continue
        P, j = dragalin_represent(L)
        A = fixpoint_algebra(downset_algebra(P), j)
        assert lattice_isomorphism(A.lattice(), L) is not None
        assert is_locale(A.lattice())
        assert join_prime_generated(L)  # finite distributive lattices are Down of their primes


def test_inquisitive_triple_through_nucleus():
    M = inquisitive_model()
    P = M.poset
    j = make_nucleus("notnot", P)
    val = dict(M.valuation)
    x, y = P.index("x"), P.index("y")
    assert nuclear_eval(P, j, val, x, parse("(p | q) | r"))
    assert not nuclear_eval(P, j, val, x, parse("(p | q) ?? r"))
    assert nuclear_eval(P, j, val, y, parse("(p | q) ?? r"))


def test_intuitionistic_excluded_middle_fails():
    P = Poset.chain(2)
    j = make_nucleus("fm", P, Poset.discrete(2, P.names))
    bottom = next(i for i in range(2) if P.down[i] == 1 << i)
    top = 1 - bottom
    ext = nuclear_extension(P, j, {"p": 1 << bottom}, parse("p | ~p"))
    assert not ext >> top & 1


def test_nuclear_errors():
    P = d1()
    j = make_nucleus("notnot", P)
    with pytest.raises(InputError):
        nuclear_eval(P, j, {"p": mask_of([P.index("a"), P.index("b")])}, 0, parse("p"))
    with pytest.raises(InputError):
        nuclear_eval(P, j, {}, 0, parse("[] _|_"))
    assert nuclear_extension(P, j, {}, parse("_|_")) == 0


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_nuclear_eval_agrees_with_classical(seed):
    rng = random.Random(seed)
    P = random_poset(rng, rng.randint(1, 5))
    j = make_nucleus("notnot", P)
    fix = [U for U, V in j.table if U == V]
    val = {v: rng.choice(fix) for v in ("p", "q")}
    f = random_formula(rng, ["p", "q"], 3, connectives=["not", "and", "or", "imp", "iff"])
    from posskit.modal import Model, RelationalFrame
    from posskit.frames import PossibilityFrame
    M = Model(RelationalFrame(PossibilityFrame.full(P), {}), val)
    ext = nuclear_extension(P, j, val, f)
    assert j(ext) == ext
    assert all(bool(ext >> x & 1) == eval_formula(M, x, f) for x in range(P.size))


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_nuclear_values_are_downsets(seed):
    rng = random.Random(seed)
    P = random_poset(rng, rng.randint(1, 5))
    j = make_nucleus(rng.choice(["beth", "notnot", "identity"]), P)
    fix = [U for U, V in j.table if U == V]
    val = {v: rng.choice(fix) for v in ("p", "q")}
    f = random_formula(rng, ["p", "q"], 3, connectives=["not", "and", "or", "imp", "inq"])
    ext = nuclear_extension(P, j, val, f)
    assert is_downset(P, ext)
    if "??" not in repr(f) and "InqOr" not in repr(f):
        assert j(ext) == ext


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_fm_suborder_always_nucleus(seed):
    rng = random.Random(seed)
    P = random_poset(rng, rng.randint(1, 5))
    keep = [[P.leq[a][b] and (a == b or rng.random() < 0.5) for b in range(P.size)]
            for a in range(P.size)]
    # transitive closure of the kept part, still inside P's order
    n = P.size
    for k in range(n):
        for a in range(n):
            for b in range(n):
                keep[a][b] = keep[a][b] or (keep[a][k] and keep[k][b])
    Q = Poset(P.names, tuple(map(tuple, keep)))
    assert check_nucleus(downset_algebra(P), make_nucleus("fm", P, Q))
