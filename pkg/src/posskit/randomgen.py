"""Random structures for property tests, acceptance runs and demos."""

from __future__ import annotations

import random
from typing import Sequence

from .frames import PossibilityFrame
from .modal import (Model, NeighborhoodFrame, RelationalFrame, ro_closed_under_box,
                    tighten, universal_relation)
from .poset import Poset, enumerate_regular_opens, is_separative, random_poset

W_FORMULA = "E q (q & A p (p -> [] (q -> p)))"
SPLIT_FORMULA = "[] ~_|_ & (p -> (<> (p & []Q p) & <> (p & ~[]Q p)))"


def random_box_closed_relation(rng: random.Random, P: Poset, density: float = 0.4,
                               tries: int = 100) -> tuple[int, ...]:
    """A relation under which □ maps regular opens to regular opens.

    Falls back to the empty relation, which always qualifies.
    """
    n = P.size
    for _ in range(tries):
        r = tuple(sum(1 << y for y in range(n) if rng.random() < density) for _ in range(n))
        if ro_closed_under_box(P, r):
            return r
    return tuple(0 for _ in range(n))


def random_full_relframe(rng: random.Random, max_size: int = 4, indices: Sequence[str] = ("0",),
                         paradigm: bool = False, separative: bool = False) -> RelationalFrame:
    """A full relational frame; with ``paradigm`` each relation is tightened,
    which yields up-R, R-down and R-refinability. With ``separative`` posets
    are redrawn until separative."""
    n = rng.randint(1, max_size)
    P = random_poset(rng, n)
    while separative and not is_separative(P):
        P = random_poset(rng, n)
    F = RelationalFrame.full(P, {i: random_box_closed_relation(rng, P) for i in indices})
    return tighten(F) if paradigm else F


def random_valuation(rng: random.Random, frame, variables: Sequence[str]) -> dict[str, int]:
    adm = frame.base.admissible
    return {v: rng.choice(adm) for v in variables}


def random_model(rng: random.Random, frame, variables: Sequence[str] = ("p", "q")) -> Model:
    return Model(frame, random_valuation(rng, frame, variables))


def universal_frame(P: Poset, index: str = "0") -> RelationalFrame:
    return RelationalFrame.full(P, {index: universal_relation(P.size)})


def random_split_nbframe(rng: random.Random, max_size: int = 4) -> NeighborhoodFrame:
    """A full neighborhood frame with indices ``0`` and ``Q`` meeting both
    N-conditions, with S ∈ N₀(x) everywhere so that □⊤ holds.

    For each admissible U the set {x : U ∈ N(x)} is drawn as a random regular
    open set; this is exactly persistence plus refinability.
    """
    P = random_poset(rng, rng.randint(1, max_size))
    F = PossibilityFrame.full(P)
    ros = enumerate_regular_opens(P)
    nbs = {}
    for idx in ("0", "Q"):
        per = [set() for _ in range(P.size)]
        for U in ros:
            B = P.full if (idx == "0" and U == P.full) else rng.choice(ros)
            for x in range(P.size):
                if B >> x & 1:
                    per[x].add(U)
        nbs[idx] = per
    return NeighborhoodFrame(F, nbs)
