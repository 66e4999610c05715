"""Downset Heyting algebras, nuclei and their fixpoint algebras, finite locales."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping

from .balg import FiniteLattice
from .errors import CapExceeded, InputError
from .poset import (DEFAULT_CAP, Poset, enumerate_downsets, interior, is_downset,
                    mask_of, members, regularize)
from .syntax import And, Falsum, Formula, Iff, Implies, InqOr, Not, Or, Var, show
from .verdict import PASS, Check, fail

SUBSET_CAP = 16  # locale and join-prime checks enumerate 2**n subsets


@dataclass(frozen=True)
class DownsetAlgebra:
    poset: Poset
    carrier: tuple[int, ...]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.poset.full

    def implies(self, U: int, V: int) -> int:
        """Points all of whose refinements in U lie in V."""
        return interior(self.poset, self.poset.full & (~U | V))

    def lattice(self) -> FiniteLattice:
        c = self.carrier
        return FiniteLattice(tuple(tuple(u & ~v == 0 for v in c) for u in c),
                             tuple(self.poset.label(u) for u in c))


def downset_algebra(poset: Poset, cap: int = DEFAULT_CAP) -> DownsetAlgebra:
    return DownsetAlgebra(poset, tuple(enumerate_downsets(poset, cap)))


def check_residuation(H: DownsetAlgebra) -> Check:
    for a in H.carrier:
        for b in H.carrier:
            ab = H.implies(a, b)
            for x in H.carrier:
                if (a & x & ~b == 0) != (x & ~ab == 0):
                    return fail(f"residuation fails for {H.poset.label(a)}, {H.poset.label(b)}")
    return PASS


@dataclass(frozen=True)
class Nucleus:
    """An operator on downsets, stored as an explicit table."""

    poset: Poset
    kind: str
    table: tuple[tuple[int, int], ...]

    def __call__(self, U: int) -> int:
        return self.mapping[U]

    @cached_property
    def mapping(self) -> dict[int, int]:
        return dict(self.table)

    @property
    def dense(self) -> bool:
        return self(0) == 0


def extensional(poset: Poset, fn: Callable[[int], int], kind: str = "custom") -> Nucleus:
    return Nucleus(poset, kind, tuple((U, fn(U)) for U in enumerate_downsets(poset)))


def check_nucleus(H: DownsetAlgebra, j: Nucleus) -> Check:
    J = j.mapping
    lab = H.poset.label
    for a in H.carrier:
        if a & ~J[a]:
            return fail(f"not increasing at {lab(a)}")
    for a in H.carrier:
        for b in H.carrier:
            if J.get(a & b) != J[a] & J[b]:
                return fail(f"not multiplicative at {lab(a)}, {lab(b)}")
    for a in H.carrier:
        if J.get(J[a]) != J[a]:
            return fail(f"not idempotent at {lab(a)}")
    for a in H.carrier:
        if not is_downset(H.poset, J[a]):
            return fail(f"image of {lab(a)} is not a downset")
    return PASS


def maximal_chains(poset: Poset) -> list[int]:
    """Saturated chains from a maximal to a minimal element, as bitmasks."""
    n = poset.size
    covers = [[y for y in range(n) if poset.lt(y, x)
               and not any(poset.lt(y, z) and poset.lt(z, x) for z in range(n))]
              for x in range(n)]
    tops = [x for x in range(n) if not any(poset.lt(x, y) for y in range(n))]
    out = []

    def go(x, acc):
        acc |= 1 << x
        if not covers[x]:
            out.append(acc)
        for y in covers[x]:
            go(y, acc)

    for t in tops:
        go(t, 0)
    return sorted(set(out))


def make_nucleus(kind: str, poset: Poset, secondary: Poset | None = None) -> Nucleus:
    """Build one of the standard nuclei: notnot, beth, fm (needs ``secondary``), identity."""
    if kind == "notnot":
        return extensional(poset, lambda U: regularize(poset, U), kind)
    if kind == "identity":
        return extensional(poset, lambda U: U, kind)
    if kind == "beth":
        chains = maximal_chains(poset)

        def jb(Z):
            return mask_of(x for x in range(poset.size)
                           if all(c & Z for c in chains if c >> x & 1))
        return extensional(poset, jb, kind)
    if kind == "fm":
        if secondary is None:
            raise InputError("fm nucleus needs a secondary order")
        if secondary.size != poset.size:
            raise InputError("secondary order must live on the same carrier")
        for a in range(poset.size):
            for b in range(poset.size):
                if secondary.leq[a][b] and not poset.leq[a][b]:
                    raise InputError("secondary order is not contained in the refinement order")

        def jf(Z):
            return mask_of(x for x in range(poset.size)
                           if all(secondary.down[xp] & Z for xp in members(poset.down[x])))
        return extensional(poset, jf, kind)
    raise InputError(f"unknown nucleus kind {kind!r}")


@dataclass(frozen=True)
class FixpointAlgebra:
    """The fixpoints of a nucleus with bottom j∅, meet ∩, join j(∪), Heyting →."""

    algebra: DownsetAlgebra
    nucleus: Nucleus
    elements: tuple[int, ...]

    @property
    def bottom(self) -> int:
        return self.nucleus(0)

    @property
    def top(self) -> int:
        return self.algebra.top

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return self.nucleus(a | b)

    def implies(self, a: int, b: int) -> int:
        return self.algebra.implies(a, b)

    def lattice(self) -> FiniteLattice:
        e = self.elements
        return FiniteLattice(tuple(tuple(u & ~v == 0 for v in e) for u in e),
                             tuple(self.algebra.poset.label(u) for u in e))

    def is_boolean(self) -> bool:
        bot = self.bottom
        return all(self.join(a, self.implies(a, bot)) == self.top for a in self.elements)

    def check_heyting(self) -> Check:
        E = set(self.elements)
        lab = self.algebra.poset.label
        lat = self.lattice()
        for a in self.elements:
            for b in self.elements:
                if a & b not in E or self.join(a, b) not in E or self.implies(a, b) not in E:
                    return fail(f"operations leave the fixpoints at {lab(a)}, {lab(b)}")
                # the lattice join derived from the order must be j(a ∪ b)
                ia, ib = self.elements.index(a), self.elements.index(b)
                if self.elements[lat.join[ia][ib]] != self.join(a, b):
                    return fail("join is not j applied to the union")
                ab = self.implies(a, b)
                for x in self.elements:
                    if (a & x & ~b == 0) != (x & ~ab == 0):
                        return fail(f"residuation fails at {lab(a)}, {lab(b)}")
        return PASS


def fixpoint_algebra(H: DownsetAlgebra, j: Nucleus) -> FixpointAlgebra:
    chk = check_nucleus(H, j)
    if not chk:
        raise InputError(f"not a nucleus: {chk.witness}")
    J = j.mapping
    return FixpointAlgebra(H, j, tuple(a for a in H.carrier if J[a] == a))


# finite lattices

def is_locale(L: FiniteLattice, cap: int = SUBSET_CAP) -> Check:
    """Join-infinite distributivity, checked over every subset."""
    n = L.size
    if n > cap:
        raise CapExceeded(f"lattice has {n} elements, subset cap is {cap}")
    joins = [L.join_all(members(s)) for s in range(1 << n)]
    for a in range(n):
        for s in range(1 << n):
            rhs = L.join_all(L.meet[a][b] for b in members(s))
            if L.meet[a][joins[s]] != rhs:
                return fail(f"{L.labels[a]} ∧ ⋁{[L.labels[b] for b in members(s)]} ≠ join of meets")
    return PASS


def completely_join_primes(L: FiniteLattice, cap: int = SUBSET_CAP) -> list[int]:
    n = L.size
    if n > cap:
        raise CapExceeded(f"lattice has {n} elements, subset cap is {cap}")
    joins = [L.join_all(members(s)) for s in range(1 << n)]
    out = []
    for p in range(n):
        if p == L.bottom:
            continue
        if all(any(L.leq[p][a] for a in members(s)) for s in range(1 << n)
               if L.leq[p][joins[s]]):
            out.append(p)
    return out


def join_prime_generated(L: FiniteLattice) -> bool:
    J = completely_join_primes(L)
    return all(L.join_all(p for p in J if L.leq[p][a]) == a for a in range(L.size))


def lattice_isomorphism(L1: FiniteLattice, L2: FiniteLattice, cap: int = 9):
    """An order isomorphism between two small lattices, or None."""
    n = L1.size
    if n != L2.size:
        return None
    if n > cap:
        raise CapExceeded(f"lattice isomorphism search capped at {cap} elements")
    deg1 = sorted(sum(r) for r in L1.leq)
    deg2 = sorted(sum(r) for r in L2.leq)
    if deg1 != deg2:
        return None
    for perm in itertools.permutations(range(n)):
        if all(L1.leq[a][b] == L2.leq[perm[a]][perm[b]] for a in range(n) for b in range(n)):
            return perm
    return None


def all_lattices(n: int) -> list[FiniteLattice]:
    """Every lattice with ``n`` elements up to isomorphism (bounded posets)."""
    from .poset import all_posets
    if n == 1:
        return [FiniteLattice(((True,),), ("0",))]
    out = []
    middles = all_posets(n - 2) if n > 2 else [Poset((), ())]
    for Q in middles:
        m = Q.size
        leq = [[False] * n for _ in range(n)]
        for a in range(n):
            leq[0][a] = True
            leq[a][n - 1] = True
        for a in range(m):
            for b in range(m):
                leq[a + 1][b + 1] = Q.leq[a][b]
        labels = ("0",) + tuple(f"m{k}" for k in range(m)) + ("1",)
        try:
            out.append(FiniteLattice(tuple(map(tuple, leq)), labels))
        except InputError:
            continue
    return out


def dragalin_represent(L: FiniteLattice) -> tuple[Poset, Nucleus]:
    """L₊ with the nucleus X ↦ ↓⋁X."""
    if not is_locale(L):
        raise InputError("input lattice is not a locale")
    idx = [a for a in range(L.size) if a != L.bottom]
    P = Poset(tuple(L.labels[a] for a in idx), tuple(tuple(L.leq[a][b] for b in idx) for a in idx))

    def j(X):
        top = L.join_all(idx[k] for k in members(X))
        return mask_of(k for k, a in enumerate(idx) if L.leq[a][top])

    return P, extensional(P, j, "dragalin")


# nuclear semantics for the intuitionistic and inquisitive language

def nuclear_extension(poset: Poset, j: Nucleus, valuation: Mapping[str, int], f: Formula) -> int:
    fix = {U for U, V in j.table if U == V}
    for v, U in valuation.items():
        if U not in fix:
            raise InputError(f"value of {v} is not a fixpoint of the nucleus")
    H = DownsetAlgebra(poset, ())

    def ev(g):
        if isinstance(g, Falsum):
            return j(0)
        if isinstance(g, Var):
            if g.name not in valuation:
                raise InputError(f"unbound variable {g.name!r}")
            return valuation[g.name]
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Or):
            return j(ev(g.left) | ev(g.right))
        if isinstance(g, InqOr):
            return ev(g.left) | ev(g.right)
        if isinstance(g, Implies):
            return H.implies(ev(g.left), ev(g.right))
        if isinstance(g, Not):
            return H.implies(ev(g.sub), j(0))
        if isinstance(g, Iff):
            a, b = ev(g.left), ev(g.right)
            return H.implies(a, b) & H.implies(b, a)
        raise InputError(f"outside the intuitionistic/inquisitive language: {show(g)}")

    return ev(f)


def nuclear_eval(poset: Poset, j: Nucleus, valuation: Mapping[str, int], x: int, f: Formula) -> bool:
    poset.check_index(x)
    return bool(nuclear_extension(poset, j, valuation, f) >> x & 1)
