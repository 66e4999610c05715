"""Finite posets of possibilities and their regular open sets.

Element sets are plain ints used as bitmasks: bit ``i`` is set when element
``i`` belongs to the set. Sorting such sets as ints gives the canonical
"bit pattern" order used for every enumeration in the package.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapExceeded, InputError

DEFAULT_CAP = 20


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Poset:
    """A finite partial order; ``leq[x][y]`` means x refines y (x ⊑ y)."""

    names: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    down: tuple[int, ...] = field(init=False, repr=False, compare=False)
    up: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise InputError("element names must be distinct")
        if len(self.leq) != n or any(len(row) != n for row in self.leq):
            raise InputError("order matrix has the wrong shape")
        leq = self.leq
        for x in range(n):
            if not leq[x][x]:
                raise InputError(f"order is not reflexive at {self.names[x]}")
            for y in range(n):
                if x != y and leq[x][y] and leq[y][x]:
                    raise InputError(
                        f"order is not antisymmetric: {self.names[x]}, {self.names[y]}")
                if leq[x][y]:
                    for z in range(n):
                        if leq[y][z] and not leq[x][z]:
                            raise InputError("order is not transitive")
        down = tuple(mask_of(y for y in range(n) if leq[y][x]) for x in range(n))
        up = tuple(mask_of(y for y in range(n) if leq[x][y]) for x in range(n))
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "up", up)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown element {name!r}") from None

    def check_index(self, x: int) -> int:
        if not 0 <= x < self.size:
            raise InputError(f"element index {x} out of range")
        return x

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq[x][y]

    def label(self, mask: int) -> str:
        return "{" + ",".join(self.names[i] for i in members(mask)) + "}"

    def sub(self, mask: int) -> tuple["Poset", list[int]]:
        """Restriction to the elements of ``mask``, with the index embedding."""
        idx = members(mask)
        leq = tuple(tuple(self.leq[a][b] for b in idx) for a in idx)
        return Poset(tuple(self.names[i] for i in idx), leq), idx

    # constructors

    @classmethod
    def from_pairs(cls, names: Sequence[str], pairs: Iterable[tuple]) -> "Poset":
        """Build from generating pairs (a, b) meaning a ⊑ b; closure is computed."""
        names = tuple(str(n) for n in names)
        n = len(names)
        pos = {nm: i for i, nm in enumerate(names)}
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            ia = a if isinstance(a, int) else pos.get(a)
            ib = b if isinstance(b, int) else pos.get(b)
            if ia is None or ib is None:
                raise InputError(f"unknown element in pair ({a}, {b})")
            rel[ia][ib] = True
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
        return cls(names, tuple(tuple(r) for r in rel))

    @classmethod
    def from_matrix(cls, leq, names: Sequence[str] | None = None) -> "Poset":
        n = len(leq)
        names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        return cls(names, tuple(tuple(bool(v) for v in row) for row in leq))

    @classmethod
    def discrete(cls, n: int, names=None) -> "Poset":
        return cls.from_pairs(names or [f"w{i}" for i in range(n)], [])

    @classmethod
    def chain(cls, n: int, names=None) -> "Poset":
        """``n`` elements with element 0 at the bottom."""
        names = names or [f"c{i}" for i in range(n)]
        return cls.from_pairs(names, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def binary_tree(cls, depth: int) -> "Poset":
        """Full binary tree; children refine parents, root is named ε."""
        nodes = [""]
        for d in range(1, depth + 1):
            nodes += ["".join(bits) for bits in itertools.product("01", repeat=d)]
        names = [s or "ε" for s in nodes]
        pairs = [(i, nodes.index(s[:-1])) for i, s in enumerate(nodes) if s]
        return cls.from_pairs(names, pairs)


def principal_downset(poset: Poset, x: int) -> int:
    return poset.down[poset.check_index(x)]


def is_downset(poset: Poset, U: int) -> bool:
    return all(poset.down[x] & ~U == 0 for x in members(U))


def interior(poset: Poset, U: int) -> int:
    return mask_of(x for x in range(poset.size) if poset.down[x] & ~U == 0)


def closure(poset: Poset, U: int) -> int:
    return mask_of(x for x in range(poset.size) if poset.down[x] & U)


def regularize(poset: Poset, U: int) -> int:
    return interior(poset, closure(poset, U))


def ro_neg(poset: Poset, U: int) -> int:
    """Pseudocomplement: points none of whose refinements lie in U."""
    return interior(poset, poset.full & ~U)


def is_regular_open(poset: Poset, U: int) -> bool:
    return U == regularize(poset, U)


def _bottom_up(poset: Poset) -> list[int]:
    return sorted(range(poset.size), key=lambda x: popcount(poset.down[x]))


def enumerate_downsets(poset: Poset, cap: int = DEFAULT_CAP) -> list[int]:
    """All downsets, sorted by bit pattern."""
    if poset.size > cap:
        raise CapExceeded(f"poset has {poset.size} elements, cap is {cap}")
    order = _bottom_up(poset)
    out: list[int] = []

    def go(k: int, acc: int):
        if k == len(order):
            out.append(acc)
            return
        x = order[k]
        go(k + 1, acc)
        below = poset.down[x] & ~(1 << x)
        if below & ~acc == 0:
            go(k + 1, acc | (1 << x))

    go(0, 0)
    out.sort()
    return out


def enumerate_regular_opens(poset: Poset, cap: int = DEFAULT_CAP) -> list[int]:
    """All regular open sets, sorted by bit pattern."""
    return [U for U in enumerate_downsets(poset, cap) if is_regular_open(poset, U)]


def is_separative(poset: Poset) -> bool:
    return all(is_regular_open(poset, d) for d in poset.down)


def separative_quotient(poset: Poset) -> tuple[Poset, tuple[int, ...]]:
    """Quotient by mutual density; returns the quotient and the class map.

    x is below y in the quotient when every refinement of x has a refinement
    that refines y, i.e. x lies in the regularization of ↓y.
    """
    n = poset.size
    reg = [regularize(poset, poset.down[y]) for y in range(n)]
    pre = [[bool(reg[y] >> x & 1) for y in range(n)] for x in range(n)]
    cls_of: list[int] = []
    reps: list[int] = []
    for x in range(n):
        for k, r in enumerate(reps):
            if pre[x][r] and pre[r][x]:
                cls_of.append(k)
                break
        else:
            cls_of.append(len(reps))
            reps.append(x)
    names = tuple(poset.names[r] for r in reps)
    leq = tuple(tuple(pre[a][b] for b in reps) for a in reps)
    return Poset(names, leq), tuple(cls_of)


def worlds(poset: Poset) -> int:
    return mask_of(x for x in range(poset.size) if poset.down[x] == 1 << x)


# generators used by tests and scripts

def _canonical(n: int, rel: list[list[bool]]) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(rel[perm[i]][perm[j]] for i in range(n) for j in range(n))
        if best is None or key < best:
            best = key
    return best


def all_posets(n: int) -> list[Poset]:
    """Every poset on ``n`` elements up to isomorphism (practical for n ≤ 5)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        chosen = [p for k, p in enumerate(pairs) if bits >> k & 1]
        p = Poset.from_pairs([str(i) for i in range(n)], chosen)
        rel = [list(r) for r in p.leq]
        # only keep relations that are already transitively closed
        if sum(map(sum, rel)) - n != len(chosen):
            continue
        key = _canonical(n, rel)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def random_poset(rng: random.Random, n: int, density: float | None = None) -> Poset:
    """Transitive closure of a random DAG compatible with index order."""
    if density is None:
        density = rng.random()
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset.from_pairs([f"s{i}" for i in range(n)], pairs)
