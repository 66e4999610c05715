"""Small reference structures used in tests, scripts and documentation."""

from __future__ import annotations

from .balg import FiniteBooleanAlgebra
from .frames import PossibilityFrame
from .modal import Model, RelationalFrame
from .poset import Poset


def t2() -> Poset:
    """Depth-2 binary tree: ε, 0, 1, 00, 01, 10, 11."""
    return Poset.binary_tree(2)


def d1() -> Poset:
    """Two incompatible refinements a, b of a top element 1."""
    return Poset.from_pairs(["a", "b", "1"], [("a", "1"), ("b", "1")])


def b4() -> FiniteBooleanAlgebra:
    return FiniteBooleanAlgebra.powerset(2)


def sea_battle_frame() -> RelationalFrame:
    """Open-future frame: the present has two unrealized refinements x and y;
    x leads to a sea battle tomorrow (x'), y to none (y')."""
    P = Poset.from_pairs(["present", "x", "y", "x'", "y'"], [("x", "present"), ("y", "present")])
    ix = P.index
    f = [(ix("present"), ix("x'")), (ix("present"), ix("y'")),
         (ix("x"), ix("x'")), (ix("y"), ix("y'"))]
    p = [(ix("x'"), ix("x")), (ix("y'"), ix("y"))]
    return RelationalFrame(PossibilityFrame.full(P), {"f": f, "p": p})


def sea_battle_model() -> Model:
    F = sea_battle_frame()
    return Model(F, {"s": 1 << F.poset.index("x'")})


def inquisitive_poset() -> Poset:
    """Root x; middle points y, u, v; leaves lp, lq, z (forcing p, q, r).

    y has leaves lp, lq below it; u has lp, z; v has lq, z. Isomorphic to the
    nonempty subsets of a three-element set.
    """
    names = ["x", "y", "u", "v", "lp", "lq", "z"]
    pairs = [("y", "x"), ("u", "x"), ("v", "x"),
             ("lp", "y"), ("lq", "y"), ("lp", "u"), ("z", "u"), ("lq", "v"), ("z", "v")]
    return Poset.from_pairs(names, pairs)


def inquisitive_model() -> Model:
    P = inquisitive_poset()
    val = {"p": 1 << P.index("lp"), "q": 1 << P.index("lq"), "r": 1 << P.index("z")}
    return Model(RelationalFrame(PossibilityFrame.full(P), {}), val)
