"""General possibility frames (S, ⊑, P), their algebras and p-morphisms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .balg import (FiniteBooleanAlgebra, general_filter_frame, proper_filters)
from .errors import CapExceeded, InputError
from .poset import (DEFAULT_CAP, Poset, enumerate_regular_opens, is_regular_open,
                    members, popcount, ro_neg)
from .verdict import PASS, Check, fail

ISO_CAP = 8


@dataclass(frozen=True, init=False)
class PossibilityFrame:
    """A poset with an admissible family of regular open sets.

    The family is canonicalized (deduplicated, sorted by bit pattern) but not
    validated on construction; use ``validate_frame`` for that.
    """

    poset: Poset
    admissible: tuple[int, ...]

    def __init__(self, poset: Poset, admissible):
        object.__setattr__(self, "poset", poset)
        object.__setattr__(self, "admissible", tuple(sorted(set(admissible))))

    @classmethod
    def full(cls, poset: Poset, cap: int = DEFAULT_CAP) -> "PossibilityFrame":
        return cls(poset, enumerate_regular_opens(poset, cap))

    @property
    def size(self) -> int:
        return self.poset.size

    @cached_property
    def is_full(self) -> bool:
        return list(self.admissible) == enumerate_regular_opens(self.poset)


def validate_frame(F: PossibilityFrame) -> Check:
    P, S = F.poset, F.admissible
    if not S:
        return fail("admissible family is empty")
    adm = set(S)
    for U in S:
        if not is_regular_open(P, U):
            return fail(f"{P.label(U)} is not regular open")
    for U in S:
        if ro_neg(P, U) not in adm:
            return fail(f"negation of {P.label(U)} is not admissible")
        for V in S:
            if U & V not in adm:
                return fail(f"{P.label(U)} ∩ {P.label(V)} is not admissible")
    return PASS


def frame_algebra(F: PossibilityFrame) -> FiniteBooleanAlgebra:
    chk = validate_frame(F)
    if not chk:
        raise InputError(f"invalid frame: {chk.witness}")
    S = F.admissible
    leq = [[u & ~v == 0 for v in S] for u in S]
    return FiniteBooleanAlgebra.from_order(leq, [F.poset.label(u) for u in S], S)


def satisfies_separation(F: PossibilityFrame) -> Check:
    P = F.poset
    for x in range(P.size):
        for y in range(P.size):
            if not P.leq[y][x] and not any(U >> x & 1 and not U >> y & 1 for U in F.admissible):
                return fail(f"no admissible set separates {P.names[x]} from {P.names[y]}")
    return PASS


def satisfies_filter_realization(F: PossibilityFrame) -> Check:
    B = frame_algebra(F)
    realized = {sum(1 << k for k, U in enumerate(F.admissible) if U >> x & 1)
                for x in range(F.size)}
    for flt in proper_filters(B):
        if flt.membership not in realized:
            return fail(f"proper filter {flt.label()} is not realized by any point")
    return PASS


def is_filter_descriptive(F: PossibilityFrame) -> Check:
    chk = satisfies_separation(F)
    return chk if not chk else satisfies_filter_realization(F)


@dataclass(frozen=True)
class FrameMap:
    source: PossibilityFrame
    target: PossibilityFrame
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.size:
            raise InputError("map must be total on the source carrier")
        if any(not 0 <= y < self.target.size for y in self.mapping):
            raise InputError("map has values outside the target carrier")

    def preimage(self, U: int) -> int:
        return sum(1 << x for x, y in enumerate(self.mapping) if U >> y & 1)


def is_p_morphism(h: FrameMap) -> Check:
    S, T, f = h.source.poset, h.target.poset, h.mapping
    src_adm = set(h.source.admissible)
    for U in h.target.admissible:
        if h.preimage(U) not in src_adm:
            return fail(f"preimage of {T.label(U)} is not admissible")
    for x in range(S.size):
        for y in members(S.down[x]):
            if not T.leq[f[y]][f[x]]:
                return fail(f"forth fails: {S.names[y]} ⊑ {S.names[x]}")
        for yp in members(T.down[f[x]]):
            if not any(f[y] == yp for y in members(S.down[x])):
                return fail(f"back fails: {T.names[yp]} ⊑ h({S.names[x]})")
    return PASS


def frame_isomorphism(F: PossibilityFrame, G: PossibilityFrame, cap: int = ISO_CAP):
    """A bijection preserving order and admissible family both ways, or None."""
    n = F.size
    if n != G.size or len(F.admissible) != len(G.admissible):
        return None
    if n > cap:
        raise CapExceeded(f"frame isomorphism search capped at {cap} points")
    P, Q = F.poset, G.poset

    def sig(poset, adm, x):
        return (popcount(poset.down[x]), popcount(poset.up[x]), sum(U >> x & 1 for U in adm))

    sf = [sig(P, F.admissible, x) for x in range(n)]
    sg = [sig(Q, G.admissible, y) for y in range(n)]
    if sorted(sf) != sorted(sg):
        return None
    target_adm = set(G.admissible)
    img = [-1] * n
    used = [False] * n

    def go(x):
        if x == n:
            for U in F.admissible:
                if sum(1 << img[i] for i in members(U)) not in target_adm:
                    return False
            return True
        for y in range(n):
            if used[y] or sg[y] != sf[x]:
                continue
            if any(P.leq[x][z] != Q.leq[y][img[z]] or P.leq[z][x] != Q.leq[img[z]][y]
                   for z in range(x)):
                continue
            img[x], used[y] = y, True
            if go(x + 1):
                return True
            used[y] = False
        img[x] = -1
        return False

    return tuple(img) if go(0) else None


def dual_roundtrip(F: PossibilityFrame) -> bool:
    G = general_filter_frame(frame_algebra(F))
    return frame_isomorphism(F, G) is not None


def all_frames(poset: Poset) -> list[PossibilityFrame]:
    """Every admissible family on the poset (subalgebras of its RO algebra)."""
    ros = enumerate_regular_opens(poset)
    out = []
    for bits in range(1, 1 << len(ros)):
        fam = [ros[k] for k in members(bits)]
        F = PossibilityFrame(poset, fam)
        if validate_frame(F):
            out.append(F)
    return out
