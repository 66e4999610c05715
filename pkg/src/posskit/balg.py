"""Finite Boolean algebras, proper filters and the algebra/frame constructions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import CapExceeded, InputError
from .poset import (DEFAULT_CAP, Poset, enumerate_downsets, enumerate_regular_opens,
                    mask_of, members, regularize, ro_neg)

FILTER_CAP = 16  # at most 2**16 candidate subsets of the carrier


def _order_tables(n, leq):
    down = [mask_of(z for z in range(n) if leq[z][x]) for x in range(n)]
    up = [mask_of(z for z in range(n) if leq[x][z]) for x in range(n)]
    meet = [[-1] * n for _ in range(n)]
    join = [[-1] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            lower = down[x] & down[y]
            upper = up[x] & up[y]
            g = next((z for z in members(lower) if down[z] == lower), None)
            l = next((z for z in members(upper) if up[z] == upper), None)
            if g is None or l is None:
                raise InputError("order is not a lattice")
            meet[x][y] = g
            join[x][y] = l
    return down, meet, join


@dataclass(frozen=True)
class FiniteLattice:
    """A finite lattice given by its order; meet/join tables are derived."""

    leq: tuple[tuple[bool, ...], ...]
    labels: tuple[str, ...]
    meet: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    join: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    bottom: int = field(init=False, repr=False, compare=False)
    top: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise InputError("lattice must be nonempty")
        Poset(self.labels, self.leq)  # order axioms
        down, meet, join = _order_tables(n, self.leq)
        bottom = next(x for x in range(n) if all(self.leq[x][y] for y in range(n)))
        top = next(x for x in range(n) if all(self.leq[y][x] for y in range(n)))
        object.__setattr__(self, "meet", tuple(map(tuple, meet)))
        object.__setattr__(self, "join", tuple(map(tuple, join)))
        object.__setattr__(self, "bottom", bottom)
        object.__setattr__(self, "top", top)

    @property
    def size(self) -> int:
        return len(self.labels)

    def join_all(self, elems: Iterable[int]) -> int:
        acc = self.bottom
        for e in elems:
            acc = self.join[acc][e]
        return acc

    def meet_all(self, elems: Iterable[int]) -> int:
        acc = self.top
        for e in elems:
            acc = self.meet[acc][e]
        return acc

    def is_distributive(self) -> bool:
        n = self.size
        m, j = self.meet, self.join
        return all(m[a][j[b][c]] == j[m[a][b]][m[a][c]]
                   for a in range(n) for b in range(n) for c in range(n))

    @classmethod
    def from_poset(cls, poset: Poset) -> "FiniteLattice":
        return cls(poset.leq, poset.names)


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    """A finite Boolean algebra stored extensionally by its order.

    ``carrier`` optionally records what each element stands for (for example
    the regular open set it is), ``labels`` are display names.
    """

    leq: tuple[tuple[bool, ...], ...]
    labels: tuple[str, ...]
    carrier: tuple[Any, ...] | None = None
    meet: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    join: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    neg: tuple[int, ...] = field(init=False, repr=False, compare=False)
    bottom: int = field(init=False, repr=False, compare=False)
    top: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lat = FiniteLattice(self.leq, self.labels)
        n = lat.size
        if n & (n - 1):
            raise InputError(f"Boolean algebra size {n} is not a power of two")
        if not lat.is_distributive():
            raise InputError("order is not distributive")
        neg = []
        for x in range(n):
            c = [y for y in range(n) if lat.meet[x][y] == lat.bottom and lat.join[x][y] == lat.top]
            if not c:
                raise InputError(f"element {self.labels[x]} has no complement")
            neg.append(c[0])
        for name in ("meet", "join", "bottom", "top"):
            object.__setattr__(self, name, getattr(lat, name))
        object.__setattr__(self, "neg", tuple(neg))

    @property
    def size(self) -> int:
        return len(self.labels)

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def join_all(self, elems: Iterable[int]) -> int:
        acc = self.bottom
        for e in elems:
            acc = self.join[acc][e]
        return acc

    def meet_all(self, elems: Iterable[int]) -> int:
        acc = self.top
        for e in elems:
            acc = self.meet[acc][e]
        return acc

    def index_of(self, item) -> int:
        """Index of a carrier item (or of a label)."""
        if self.carrier is not None and item in self.carrier:
            return self.carrier.index(item)
        if item in self.labels:
            return self.labels.index(item)
        raise InputError(f"{item!r} is not an element of the algebra")

    @classmethod
    def from_order(cls, leq, labels=None, carrier=None) -> "FiniteBooleanAlgebra":
        n = len(leq)
        labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        return cls(tuple(tuple(bool(v) for v in r) for r in leq), labels,
                   tuple(carrier) if carrier is not None else None)

    @classmethod
    def powerset(cls, k: int, atom_names: Sequence[str] | None = None) -> "FiniteBooleanAlgebra":
        """The algebra of subsets of ``k`` atoms; elements are indexed by bitmask."""
        names = list(atom_names or "abcdefghijklmnop"[:k])
        labels = []
        for m in range(1 << k):
            if m == 0:
                labels.append("0")
            elif m == (1 << k) - 1:
                labels.append("1")
            else:
                labels.append("".join(names[i] for i in members(m)))
        leq = [[a & ~b == 0 for b in range(1 << k)] for a in range(1 << k)]
        return cls.from_order(leq, labels, carrier=range(1 << k))


def check_boolean_laws(B: FiniteBooleanAlgebra) -> str | None:
    """Return a description of the first failed Boolean axiom, or None."""
    n, m, j, ng = B.size, B.meet, B.join, B.neg
    z, o = B.bottom, B.top
    for a in range(n):
        if ng[ng[a]] != a:
            return f"double negation fails at {B.labels[a]}"
        if m[a][ng[a]] != z or j[a][ng[a]] != o:
            return f"complement fails at {B.labels[a]}"
        if m[a][o] != a or j[a][z] != a:
            return f"identity fails at {B.labels[a]}"
        for b in range(n):
            if m[a][b] != m[b][a] or j[a][b] != j[b][a]:
                return "commutativity fails"
            if m[a][j[a][b]] != a or j[a][m[a][b]] != a:
                return "absorption fails"
            if ng[m[a][b]] != j[ng[a]][ng[b]]:
                return "De Morgan fails"
            for c in range(n):
                if m[a][m[b][c]] != m[m[a][b]][c] or j[a][j[b][c]] != j[j[a][b]][c]:
                    return "associativity fails"
                if m[a][j[b][c]] != j[m[a][b]][m[a][c]]:
                    return "distributivity fails"
    return None


def ro_algebra(poset: Poset, cap: int = DEFAULT_CAP) -> FiniteBooleanAlgebra:
    """The Boolean algebra of regular open sets, carrier = bitmasks."""
    ros = enumerate_regular_opens(poset, cap)
    leq = [[u & ~v == 0 for v in ros] for u in ros]
    return FiniteBooleanAlgebra.from_order(leq, [poset.label(u) for u in ros], ros)


def ro_operations_agree(poset: Poset, B: FiniteBooleanAlgebra) -> bool:
    """Check the algebra's operations are ∩, regularized ∪ and int(complement)."""
    sets = B.carrier
    for a, u in enumerate(sets):
        if sets[B.neg[a]] != ro_neg(poset, u):
            return False
        for b, v in enumerate(sets):
            if sets[B.meet[a][b]] != u & v:
                return False
            if sets[B.join[a][b]] != regularize(poset, u | v):
                return False
    return True


def bplus_poset(B: FiniteBooleanAlgebra) -> tuple[Poset, list[int]]:
    """B with its bottom removed, and the map from poset index to algebra index."""
    if B.size < 2:
        raise InputError("degenerate algebra has no nonzero elements")
    idx = [a for a in range(B.size) if a != B.bottom]
    leq = tuple(tuple(B.leq[a][b] for b in idx) for a in idx)
    return Poset(tuple(B.labels[a] for a in idx), leq), idx


def atoms(B: FiniteBooleanAlgebra) -> list[int]:
    return [a for a in range(B.size) if a != B.bottom
            and all(b == B.bottom or b == a for b in range(B.size) if B.leq[b][a])]


def macneille(B: FiniteBooleanAlgebra, cap: int = DEFAULT_CAP):
    """RO(B₊) together with the embedding b ↦ ↓₊b (as algebra indices)."""
    if B.size == 1:
        # B₊ is empty and RO of the empty poset is the one-element algebra
        return ro_algebra(Poset((), ())), (0,)
    P, idx = bplus_poset(B)
    R = ro_algebra(P, cap)
    pos = {a: i for i, a in enumerate(idx)}
    phi = []
    for b in range(B.size):
        d = mask_of(pos[a] for a in idx if B.leq[a][b])
        phi.append(R.carrier.index(d))
    return R, tuple(phi)


@dataclass(frozen=True)
class Filter:
    algebra: FiniteBooleanAlgebra = field(repr=False, compare=False)
    membership: int

    @property
    def proper(self) -> bool:
        return not self.membership >> self.algebra.bottom & 1

    def __contains__(self, a: int) -> bool:
        return bool(self.membership >> a & 1)

    def elements(self) -> list[int]:
        return members(self.membership)

    def label(self) -> str:
        return "{" + ",".join(self.algebra.labels[a] for a in self.elements()) + "}"


def is_filter(B: FiniteBooleanAlgebra, F: int) -> bool:
    if not F:
        return False
    for a in members(F):
        for b in range(B.size):
            if B.leq[a][b] and not F >> b & 1:
                return False
        for b in members(F):
            if not F >> B.meet[a][b] & 1:
                return False
    return True


def proper_filters(B: FiniteBooleanAlgebra, cap: int = FILTER_CAP) -> list[Filter]:
    """All proper filters, by brute force over the up-sets of B; sorted by bit pattern."""
    if B.size > cap:
        raise CapExceeded(f"algebra has {B.size} elements, filter cap is {cap}")
    dual = Poset(B.labels, tuple(tuple(B.leq[b][a] for b in range(B.size))
                                 for a in range(B.size)))
    out = [Filter(B, U) for U in enumerate_downsets(dual, cap)
           if not U >> B.bottom & 1 and is_filter(B, U)]
    return out


def filter_poset(B: FiniteBooleanAlgebra, cap: int = FILTER_CAP):
    """Proper filters ordered by reverse inclusion (bigger filter = more refined)."""
    fs = proper_filters(B, cap)
    leq = tuple(tuple(g.membership & ~f.membership == 0 for g in fs) for f in fs)
    return Poset(tuple(f.label() for f in fs), leq), fs


def hat(B: FiniteBooleanAlgebra, fs: Sequence[Filter], a: int) -> int:
    """The set of filters containing a."""
    return mask_of(i for i, f in enumerate(fs) if a in f)


def filter_frame(B: FiniteBooleanAlgebra, cap: int = FILTER_CAP):
    from .frames import PossibilityFrame
    P, fs = filter_poset(B, cap)
    return PossibilityFrame.full(P)


def general_filter_frame(B: FiniteBooleanAlgebra, cap: int = FILTER_CAP):
    from .frames import PossibilityFrame
    P, fs = filter_poset(B, cap)
    return PossibilityFrame(P, [hat(B, fs, a) for a in range(B.size)])


def canonical_extension(B: FiniteBooleanAlgebra, cap: int = FILTER_CAP) -> FiniteBooleanAlgebra:
    P, _ = filter_poset(B, cap)
    return ro_algebra(P)


def _atom_set(B: FiniteBooleanAlgebra, at: list[int], x: int) -> int:
    return mask_of(k for k, a in enumerate(at) if B.leq[a][x])


def is_isomorphic(B1: FiniteBooleanAlgebra, B2: FiniteBooleanAlgebra, witness: bool = False):
    """Boolean isomorphism test; the witness is the lexicographically least map.

    Finite Boolean algebras are determined by their number of atoms, and every
    bijection between atoms extends uniquely, so the search runs over atom
    bijections only.
    """
    a1, a2 = atoms(B1), atoms(B2)
    ok = len(a1) == len(a2) and B1.size == B2.size
    if not witness:
        return ok
    if not ok:
        return False, None
    sets1 = [_atom_set(B1, a1, x) for x in range(B1.size)]
    by_set2 = {_atom_set(B2, a2, y): y for y in range(B2.size)}
    best = None
    for perm in itertools.permutations(range(len(a1))):
        image = tuple(by_set2[mask_of(perm[k] for k in members(s))] for s in sets1)
        if best is None or image < best:
            best = image
    return True, best


def is_homomorphism(B1: FiniteBooleanAlgebra, B2: FiniteBooleanAlgebra, h: Sequence[int]) -> bool:
    n = B1.size
    return all(h[B1.neg[a]] == B2.neg[h[a]] and
               all(h[B1.meet[a][b]] == B2.meet[h[a]][h[b]] for b in range(n))
               for a in range(n))


def preserves_all_joins(B1: FiniteBooleanAlgebra, B2: FiniteBooleanAlgebra, h: Sequence[int]) -> bool:
    """h(⋁X) = ⋁h[X] for every subset X of B1."""
    n = B1.size
    for bits in range(1 << n):
        X = members(bits)
        if h[B1.join_all(X)] != B2.join_all(h[x] for x in X):
            return False
    return True


def decompose_atomic_atomless(poset: Poset) -> tuple[Poset, Poset]:
    """Split into the atomic and atomless parts of the world-pruned poset.

    First delete every point that is properly refined by a world; in what
    remains, the atomic part is the set of minimal points and the atomless
    part is the set of points all of whose refinements are properly refined.
    """
    n = poset.size
    lt = poset.lt
    star = [x for x in range(n)
            if all(any(lt(z, y) for z in range(n)) for y in range(n) if lt(y, x))]
    sstar = set(star)
    lt_star = lambda a, b: a in sstar and b in sstar and lt(a, b)
    A = [x for x in star if not any(lt_star(y, x) for y in star)]
    C = [x for x in star
         if all(any(lt_star(z, y) for z in star) for y in star if poset.leq[y][x])]
    return poset.sub(mask_of(A))[0], poset.sub(mask_of(C))[0]


def product_size(A: Poset, C: Poset) -> int:
    return len(enumerate_regular_opens(A)) * len(enumerate_regular_opens(C))
