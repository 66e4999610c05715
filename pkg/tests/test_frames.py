from posskit.balg import general_filter_frame
from posskit.frames import (FrameMap, PossibilityFrame, all_frames, dual_roundtrip, frame_algebra,
                            frame_isomorphism, is_filter_descriptive, is_p_morphism,
                            satisfies_filter_realization, satisfies_separation, validate_frame)
from posskit.poset import Poset, all_posets
from posskit.samples import b4


def test_general_filter_frame_of_b4():
    G = general_filter_frame(b4())
    assert validate_frame(G)
    assert is_filter_descriptive(G)
    assert dual_roundtrip(G)


def test_chain_frame_fails_separation_and_roundtrip():
    F = PossibilityFrame.full(Poset.chain(2))
    assert not satisfies_separation(F)
    assert not dual_roundtrip(F)


def test_non_regular_open_family_is_rejected():
    P = Poset.chain(2)
    chk = validate_frame(PossibilityFrame(P, [0, 1, P.full]))
    assert not chk and "not regular open" in chk.witness


def test_frame_algebra_size():
    F = PossibilityFrame.full(Poset.discrete(3))
    assert frame_algebra(F).size == 8


def test_identity_is_p_morphism_and_collapse_is_not():
    P = Poset.from_pairs(["a", "b", "1"], [("a", "1"), ("b", "1")])
    F = PossibilityFrame.full(P)
    assert is_p_morphism(FrameMap(F, F, (0, 1, 2)))
    one = PossibilityFrame.full(Poset.discrete(1))
    assert is_p_morphism(FrameMap(F, one, (0, 0, 0)))
    # everything sent to the top of a chain: nothing maps onto the bottom below it
    chain = PossibilityFrame.full(Poset.chain(2))
    chk = is_p_morphism(FrameMap(F, chain, (1, 1, 1)))
    assert not chk and "back" in chk.witness


def test_frame_isomorphism_finds_relabeling():
    P = Poset.from_pairs(["a", "b", "1"], [("a", "1"), ("b", "1")])
    Q = Poset.from_pairs(["1", "x", "y"], [("x", "1"), ("y", "1")])
    iso = frame_isomorphism(PossibilityFrame.full(P), PossibilityFrame.full(Q))
    assert iso is not None and iso[2] == 0


def test_filter_descriptive_equivalence_small():
    for n in range(1, 4):
        for P in all_posets(n):
            for F in all_frames(P):
                sep_real = bool(satisfies_separation(F)) and bool(satisfies_filter_realization(F))
                assert dual_roundtrip(F) == sep_real
