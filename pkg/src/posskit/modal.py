"""Relational, neighborhood, functional and quasi-normal possibility frames.

Covers forcing evaluation, validity and countermodel search, the interaction
conditions between accessibility and refinement, tightening, Lemmon-Scott
correspondence, extraction of Kripke models, and frames built from Boolean
algebras with operators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .balg import FiniteBooleanAlgebra, bplus_poset, filter_poset, hat
from .errors import CapExceeded, InputError
from .frames import PossibilityFrame, validate_frame
from .poset import Poset, enumerate_regular_opens, is_regular_open, mask_of, members, ro_neg
from .syntax import (Box, Diamond, Falsum, Formula, ForallProp, InqOr, Not, And,
                     Var, SQ, R_INDEX, bimodal_translate, desugar, free_vars,
                     indices, subformulas)
from .verdict import PASS, Check, fail

MAX_VARS = 4
MAX_VALUATIONS = 1 << 20

CONDITIONS = ("up-R", "R-down", "R-refinability", "R-dense", "R-rule", "R-to-win", "R-iff-win")


def _succ(n: int, pairs: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    out = [0] * n
    for a, b in pairs:
        out[a] |= 1 << b
    return tuple(out)


def universal_relation(n: int) -> tuple[int, ...]:
    return tuple([(1 << n) - 1] * n)


def compose(n: int, rels: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Relational composition of successor tables; the empty sequence gives identity."""
    cur = tuple(1 << x for x in range(n))
    for r in rels:
        cur = tuple(_image(r, cur[x]) for x in range(n))
    return cur


def _image(rel: Sequence[int], xs: int) -> int:
    out = 0
    for x in members(xs):
        out |= rel[x]
    return out


@dataclass(frozen=True, init=False)
class RelationalFrame:
    """A possibility frame with one accessibility relation per modal index.

    Relations are stored as successor bitmasks: ``rel(i)[x]`` is R_i(x).
    """

    base: PossibilityFrame
    relations: tuple[tuple[str, tuple[int, ...]], ...]

    def __init__(self, base: PossibilityFrame, relations: Mapping[str, Sequence]):
        n = base.size
        rels = {}
        for idx, r in relations.items():
            r = list(r)
            if len(r) != n or not all(isinstance(v, int) for v in r):
                r = _succ(n, r)  # given as (x, y) pairs
            rels[str(idx)] = tuple(r)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "relations", tuple(sorted(rels.items())))

    @classmethod
    def full(cls, poset: Poset, relations: Mapping[str, Sequence]) -> "RelationalFrame":
        return cls(PossibilityFrame.full(poset), relations)

    @property
    def poset(self) -> Poset:
        return self.base.poset

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def index_names(self) -> list[str]:
        return [i for i, _ in self.relations]

    def rel(self, i: str) -> tuple[int, ...]:
        for k, r in self.relations:
            if k == i:
                return r
        raise InputError(f"no relation for modal index {i!r}")

    def box(self, i: str, Z: int) -> int:
        r = self.rel(i)
        return mask_of(x for x in range(self.size) if r[x] & ~Z == 0)

    def pairs(self, i: str) -> list[tuple[int, int]]:
        r = self.rel(i)
        return [(x, y) for x in range(self.size) for y in members(r[x])]


def box(frame, i: str, Z: int) -> int:
    return frame.box(i, Z)


def diamond(frame, i: str, Z: int) -> int:
    """◇Z computed as ¬□¬Z."""
    P = frame.poset
    return ro_neg(P, frame.box(i, ro_neg(P, Z)))


def diamond_simplified(frame: RelationalFrame, i: str, Z: int) -> int:
    """The form valid under R-down: every refinement sees some point of Z."""
    P, r = frame.poset, frame.rel(i)
    return mask_of(x for x in range(P.size) if all(r[xp] & Z for xp in members(P.down[x])))


def validate_relational_frame(F: RelationalFrame) -> Check:
    chk = validate_frame(F.base)
    if not chk:
        return chk
    adm = set(F.base.admissible)
    for i in F.index_names:
        for Z in F.base.admissible:
            if F.box(i, Z) not in adm:
                return fail(f"box_{i} of {F.poset.label(Z)} is not admissible")
    return PASS


def ro_closed_under_box(poset: Poset, rel: Sequence[int]) -> bool:
    n = poset.size
    for Z in enumerate_regular_opens(poset):
        B = mask_of(x for x in range(n) if rel[x] & ~Z == 0)
        if not is_regular_open(poset, B):
            return False
    return True


def _compat(P: Poset) -> list[int]:
    """compat[y] = points whose downsets meet ↓y."""
    return [mask_of(z for z in range(P.size) if P.down[z] & P.down[y]) for y in range(P.size)]


def relation_condition(P: Poset, r: Sequence[int], cond: str) -> Check:
    """Evaluate one interaction condition between ⊑ and the relation r."""
    n = P.size
    N = P.names
    down = P.down
    if cond == "up-R":
        for x in range(n):
            for xp in members(down[x]):
                extra = r[xp] & ~r[x]
                if extra:
                    y = members(extra)[0]
                    return fail(f"{N[xp]} ⊑ {N[x]} and {N[xp]} R {N[y]} but not {N[x]} R {N[y]}")
        return PASS
    if cond == "R-down":
        for x in range(n):
            for y in members(r[x]):
                miss = down[y] & ~r[x]
                if miss:
                    return fail(f"{N[x]} R {N[y]}, {N[members(miss)[0]]} ⊑ {N[y]}, "
                                f"but not {N[x]} R {N[members(miss)[0]]}")
        return PASS
    if cond == "R-refinability":
        for x in range(n):
            for y in members(r[x]):
                if not any(all(r[xpp] & down[y] for xpp in members(down[xp]))
                           for xp in members(down[x])):
                    return fail(f"{N[x]} R {N[y]} is not refinable")
        return PASS
    if cond == "R-dense":
        for x in range(n):
            for y in range(n):
                if r[x] >> y & 1:
                    continue
                if all(r[x] & down[yp] for yp in members(down[y])):
                    return fail(f"{N[x]} densely sees {N[y]} but not {N[x]} R {N[y]}")
        return PASS
    if cond == "R-rule":
        comp = _compat(P)
        for x in range(n):
            for z in range(n):
                if r[x] & comp[z]:
                    continue
                for xp in members(down[x]):
                    if r[xp] & comp[z]:
                        return fail(f"{N[x]} rules out {N[z]} but its refinement "
                                    f"{N[xp]} does not")
        return PASS
    if cond in ("R-to-win", "R-iff-win"):
        comp = _compat(P)
        target = comp if cond == "R-to-win" else [down[y] for y in range(n)]

        def wins(x, y):
            return all(any(all(r[xpp] & target[yp] for xpp in members(down[xp]))
                           for xp in members(down[x]))
                       for yp in members(down[y]))

        for x in range(n):
            for y in range(n):
                rel = bool(r[x] >> y & 1)
                w = wins(x, y)
                if cond == "R-to-win" and rel and not w:
                    return fail(f"{N[x]} R {N[y]} but the accessibility game is lost")
                if cond == "R-iff-win" and rel != w:
                    return fail(f"{N[x]} R {N[y]} is {rel} but the strict game gives {w}")
        return PASS
    raise InputError(f"unknown relation condition {cond!r}")


def check_relation_condition(frame: RelationalFrame, i: str, cond: str) -> Check:
    return relation_condition(frame.poset, frame.rel(i), cond)


def is_paradigm(frame: RelationalFrame) -> bool:
    return all(check_relation_condition(frame, i, c) for i in frame.index_names
               for c in ("up-R", "R-down", "R-refinability"))


def is_strong(frame: RelationalFrame) -> bool:
    return all(check_relation_condition(frame, i, c) for i in frame.index_names
               for c in ("up-R", "R-down", "R-refinability", "R-dense"))


def box_relation(frame: RelationalFrame, i: str) -> tuple[int, ...]:
    """R^□: x sees y iff y lies in every admissible Z with x ∈ □Z."""
    n = frame.size
    boxes = [(frame.box(i, Z), Z) for Z in frame.base.admissible]
    out = []
    for x in range(n):
        s = (1 << n) - 1
        for B, Z in boxes:
            if B >> x & 1:
                s &= Z
        out.append(s)
    return tuple(out)


def is_r_tight(frame: RelationalFrame) -> bool:
    return all(box_relation(frame, i)[x] & ~frame.rel(i)[x] == 0
               for i in frame.index_names for x in range(frame.size))


def tighten(frame: RelationalFrame) -> RelationalFrame:
    return RelationalFrame(frame.base, {i: box_relation(frame, i) for i in frame.index_names})


@dataclass(frozen=True, init=False)
class NeighborhoodFrame:
    """Possibility frame with neighborhoods: ``nb(i)[x]`` is a frozenset of sets."""

    base: PossibilityFrame
    neighborhoods: tuple[tuple[str, tuple[frozenset, ...]], ...]

    def __init__(self, base: PossibilityFrame, neighborhoods: Mapping[str, Sequence[Iterable[int]]]):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "neighborhoods", tuple(sorted(
            (str(i), tuple(frozenset(nx) for nx in nb)) for i, nb in neighborhoods.items())))

    @property
    def poset(self) -> Poset:
        return self.base.poset

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def index_names(self) -> list[str]:
        return [i for i, _ in self.neighborhoods]

    def nb(self, i: str) -> tuple[frozenset, ...]:
        for k, v in self.neighborhoods:
            if k == i:
                return v
        raise InputError(f"no neighborhood function for modal index {i!r}")

    def box(self, i: str, Z: int) -> int:
        nb = self.nb(i)
        return mask_of(x for x in range(self.size) if Z in nb[x])


def neighborhood_box(F: NeighborhoodFrame, i: str, Z: int) -> int:
    if Z not in F.base.admissible:
        raise InputError(f"{F.poset.label(Z)} is not admissible")
    return F.box(i, Z)


def check_n_condition(F: NeighborhoodFrame, i: str, cond: str) -> Check:
    P, nb, N = F.poset, F.nb(i), F.poset.names
    if cond == "persistence":
        for x in range(P.size):
            for xp in members(P.down[x]):
                missing = nb[x] - nb[xp]
                if missing:
                    U = min(missing)
                    return fail(f"{P.label(U)} ∈ N({N[x]}) but not N({N[xp]}) with {N[xp]} ⊑ {N[x]}")
        return PASS
    if cond == "refinability":
        for U in F.base.admissible:
            for x in range(P.size):
                if U in nb[x]:
                    continue
                if not any(all(U not in nb[xpp] for xpp in members(P.down[xp]))
                           for xp in members(P.down[x])):
                    return fail(f"{P.label(U)} ∉ N({N[x]}) is not refinable")
        return PASS
    raise InputError(f"unknown neighborhood condition {cond!r}")


def validate_neighborhood_frame(F: NeighborhoodFrame) -> Check:
    chk = validate_frame(F.base)
    if not chk:
        return chk
    adm = set(F.base.admissible)
    for i in F.index_names:
        for Z in F.base.admissible:
            if F.box(i, Z) not in adm:
                return fail(f"box_N{i} of {F.poset.label(Z)} is not admissible")
    return PASS


@dataclass(frozen=True, init=False)
class FunctionalFrame:
    base: PossibilityFrame
    functions: tuple[tuple[str, tuple[int, ...]], ...]

    def __init__(self, base: PossibilityFrame, functions: Mapping[str, Sequence[int]]):
        for f in functions.values():
            if len(f) != base.size or any(not 0 <= v < base.size for v in f):
                raise InputError("function must be total on the carrier")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "functions", tuple(sorted(
            (str(i), tuple(f)) for i, f in functions.items())))

    @property
    def poset(self) -> Poset:
        return self.base.poset

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def index_names(self) -> list[str]:
        return [i for i, _ in self.functions]

    def fn(self, i: str) -> tuple[int, ...]:
        for k, v in self.functions:
            if k == i:
                return v
        raise InputError(f"no function for modal index {i!r}")

    def box(self, i: str, Z: int) -> int:
        f, down = self.fn(i), self.poset.down
        return mask_of(x for x in range(self.size) if down[f[x]] & ~Z == 0)


def functional_to_relational(F: FunctionalFrame) -> RelationalFrame:
    return RelationalFrame(F.base, {i: tuple(F.poset.down[v] for v in f) for i, f in F.functions})


def check_f_condition(F: FunctionalFrame, i: str, cond: str) -> Check:
    P, f, N = F.poset, F.fn(i), F.poset.names
    if cond == "persistence":
        for x in range(P.size):
            for xp in members(P.down[x]):
                if not P.leq[f[xp]][f[x]]:
                    return fail(f"{N[xp]} ⊑ {N[x]} but f({N[xp]}) ⋢ f({N[x]})")
        return PASS
    if cond == "refinability":
        for x in range(P.size):
            for y in members(P.down[f[x]]):
                if not any(all(P.down[f[xpp]] & P.down[y] for xpp in members(P.down[xp]))
                           for xp in members(P.down[x])):
                    return fail(f"{N[y]} ⊑ f({N[x]}) is not refinable")
        return PASS
    raise InputError(f"unknown function condition {cond!r}")


# models and evaluation

@dataclass(frozen=True, init=False)
class Model:
    frame: object
    valuation: tuple[tuple[str, int], ...]

    def __init__(self, frame, valuation: Mapping[str, int]):
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "valuation", tuple(sorted(valuation.items())))

    @property
    def val(self) -> dict[str, int]:
        return dict(self.valuation)

    @property
    def poset(self) -> Poset:
        return self.frame.poset

    def check(self) -> Check:
        adm = set(self.frame.base.admissible)
        for v, U in self.valuation:
            if U not in adm:
                return fail(f"value of {v} is not admissible")
        return PASS


def _ensure_full(frame):
    if not frame.base.is_full:
        raise InputError("propositional quantifiers require a full frame")


def extension(frame, valuation: Mapping[str, int], f: Formula) -> int:
    """‖f‖: the set of points forcing f, as a bitmask."""
    P = frame.poset

    def ev(g, val):
        if isinstance(g, Falsum):
            return 0
        if isinstance(g, Var):
            if g.name not in val:
                raise InputError(f"unbound variable {g.name!r}")
            return val[g.name]
        if isinstance(g, Not):
            return ro_neg(P, ev(g.sub, val))
        if isinstance(g, And):
            return ev(g.left, val) & ev(g.right, val)
        if isinstance(g, Box):
            return frame.box(g.index, ev(g.sub, val))
        if isinstance(g, InqOr):
            return ev(g.left, val) | ev(g.right, val)
        if isinstance(g, ForallProp):
            _ensure_full(frame)
            out = P.full
            for Z in frame.base.admissible:
                out &= ev(g.body, {**val, g.name: Z})
            return out
        # defined connectives are evaluated through their definitions
        return ev(desugar(g), val)

    return ev(f, dict(valuation))


def eval_formula(M: Model, x: int, f: Formula) -> bool:
    M.poset.check_index(x)
    return bool(extension(M.frame, M.val, f) >> x & 1)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    valuation: tuple[tuple[str, int], ...] | None = None
    point: int | None = None

    def __bool__(self) -> bool:
        return self.valid


def _valuations(frame, variables: list[str], cap_vars: int, cap_vals: int):
    P = frame.base.admissible
    if len(variables) > cap_vars:
        raise CapExceeded(f"{len(variables)} variables exceed the cap of {cap_vars}")
    if len(P) ** len(variables) > cap_vals:
        raise CapExceeded(f"{len(P)}^{len(variables)} valuations exceed the cap of {cap_vals}")
    for combo in itertools.product(P, repeat=len(variables)):
        yield dict(zip(variables, combo))


def is_valid(frame, f: Formula, cap_vars: int = MAX_VARS, cap_vals: int = MAX_VALUATIONS) -> Verdict:
    """Exhaustive search; the first countermodel in canonical order is returned."""
    variables = sorted(free_vars(f))
    for val in _valuations(frame, variables, cap_vars, cap_vals):
        ext = extension(frame, val, f)
        missing = frame.poset.full & ~ext
        if missing:
            return Verdict(False, tuple(sorted(val.items())), members(missing)[0])
    return Verdict(True)


@dataclass(frozen=True, init=False)
class QuasiNormalFrame:
    frame: RelationalFrame
    designated: int

    def __init__(self, frame: RelationalFrame, designated: int):
        P = frame.poset
        for x in members(designated):
            for y in members(designated):
                if not any(P.leq[z][x] and P.leq[z][y] for z in members(designated)):
                    raise InputError("designated set is not directed downward")
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "designated", designated)


def quasi_valid(Q: QuasiNormalFrame, f: Formula, cap_vars: int = MAX_VARS,
                cap_vals: int = MAX_VALUATIONS) -> Verdict:
    variables = sorted(free_vars(f))
    for val in _valuations(Q.frame, variables, cap_vars, cap_vals):
        if not extension(Q.frame, val, f) & Q.designated:
            return Verdict(False, tuple(sorted(val.items())), None)
    return Verdict(True)


# Kripke models

@dataclass(frozen=True)
class KripkeModel:
    """Classical Kripke model; ``points`` maps local indices to original ones."""

    points: tuple[int, ...]
    relations: tuple[tuple[str, tuple[int, ...]], ...]
    valuation: tuple[tuple[str, int], ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def rel(self, i: str) -> tuple[int, ...]:
        for k, r in self.relations:
            if k == i:
                return r
        raise InputError(f"no relation for modal index {i!r}")

    def extension(self, f: Formula) -> int:
        n = self.size
        full = (1 << n) - 1
        val = dict(self.valuation)

        def ev(g):
            if isinstance(g, Falsum):
                return 0
            if isinstance(g, Var):
                return val[g.name]
            if isinstance(g, Not):
                return full & ~ev(g.sub)
            if isinstance(g, And):
                return ev(g.left) & ev(g.right)
            if isinstance(g, Box):
                r, Z = self.rel(g.index), ev(g.sub)
                return mask_of(x for x in range(n) if r[x] & ~Z == 0)
            if isinstance(g, (ForallProp, InqOr)):
                raise InputError("Kripke evaluation covers the modal language only")
            return ev(desugar(g))

        return ev(f)


def decisive_set(M: Model, f: Formula) -> int:
    """Points deciding every subformula of f (forcing it or its negation)."""
    P = M.poset
    S = P.full
    for g in subformulas(desugar(f)):
        ext = extension(M.frame, M.val, g)
        S &= ext | ro_neg(P, ext)
    return S


def kripke_extract(M: Model, f: Formula) -> tuple[KripkeModel, int]:
    frame = M.frame
    if isinstance(frame, FunctionalFrame):
        frame = functional_to_relational(frame)
    P = frame.poset
    S = decisive_set(M, f)
    pts = members(S)
    pos = {p: k for k, p in enumerate(pts)}
    rels = []
    for i in frame.index_names:
        r = frame.rel(i)
        succ = []
        for x in pts:
            reach = 0
            for z in members(r[x]):
                reach |= P.down[z]
            succ.append(mask_of(pos[y] for y in members(reach & S)))
        rels.append((i, tuple(succ)))
    val = tuple((v, mask_of(pos[y] for y in members(U & S))) for v, U in M.valuation)
    return KripkeModel(tuple(pts), tuple(rels), val), S


def kripke_lemma_holds(M: Model, f: Formula) -> Check:
    """Both halves: every point has a decisive refinement, and M agrees with M_f there."""
    K, S = kripke_extract(M, f)
    P = M.poset
    for x in range(P.size):
        if not P.down[x] & S:
            return fail(f"{P.names[x]} has no decisive refinement")
    for g in subformulas(desugar(f)):
        ext = extension(M.frame, M.val, g)
        kext = K.extension(g)
        for k, x in enumerate(K.points):
            if bool(ext >> x & 1) != bool(kext >> k & 1):
                return fail(f"disagreement on {g} at {P.names[x]}")
    return PASS


def bimodal_kripke(frame: RelationalFrame, valuation: Mapping[str, int], i: str) -> KripkeModel:
    n = frame.size
    rels = ((R_INDEX, frame.rel(i)), (SQ, frame.poset.down))
    return KripkeModel(tuple(range(n)), tuple(sorted(rels)), tuple(sorted(valuation.items())))


def bimodal_agreement(M: Model, f: Formula) -> bool:
    frame = M.frame
    idx = indices(desugar(f))
    if len(idx) > 1:
        raise InputError("formula is not unimodal")
    i = next(iter(idx)) if idx else frame.index_names[0]
    if not frame.base.is_full:
        raise InputError("bimodal translation is compared on full frames")
    K = bimodal_kripke(frame, M.val, i)
    return extension(frame, M.val, f) == K.extension(bimodal_translate(f))


# Lemmon-Scott correspondence

def _seq_formula(ops: Sequence[str], kind, body: Formula) -> Formula:
    for i in reversed(ops):
        body = kind(i, body)
    return body


def lemmon_scott_formula(alpha, beta, delta, gamma) -> Formula:
    from .syntax import Implies
    p = Var("p")
    lhs = _seq_formula(alpha, Diamond, _seq_formula(beta, Box, p))
    rhs = _seq_formula(delta, Box, _seq_formula(gamma, Diamond, p))
    return Implies(lhs, rhs)


def lemmon_scott_condition(frame: RelationalFrame, alpha, beta, delta, gamma) -> bool:
    n, P = frame.size, frame.poset
    rel = lambda seq: compose(n, [frame.rel(i) for i in seq])
    Ra, Rb, Rd, Rg = rel(alpha), rel(beta), rel(delta), rel(gamma)
    for x in range(n):
        for y in members(Rd[x]):
            # an empty alpha composes to the identity, so z ranges over x' itself
            if not any(all(Rg[y] & Rb[z] for z in members(Ra[xp])) for xp in members(P.down[x])):
                return False
    return True


def lemmon_scott_check(frame: RelationalFrame, alpha, beta, delta, gamma) -> tuple[bool, bool]:
    if not frame.base.is_full or not is_paradigm(frame):
        raise InputError("correspondence requires a full paradigm frame")
    for s in (alpha, beta, delta, gamma):
        if len(s) > 2:
            raise InputError("index sequences are limited to length 2")
    axiom = bool(is_valid(frame, lemmon_scott_formula(alpha, beta, delta, gamma)))
    return axiom, lemmon_scott_condition(frame, alpha, beta, delta, gamma)


# frames from Boolean algebras with operators

def _check_multiplicative(B: FiniteBooleanAlgebra, op: Sequence[int], i: str):
    if op[B.top] != B.top:
        raise InputError(f"box {i} does not preserve the top element")
    for a in range(B.size):
        for b in range(B.size):
            if op[B.meet[a][b]] != B.meet[op[a]][op[b]]:
                raise InputError(f"box {i} does not distribute over meets")


def vbao_full_frame(B: FiniteBooleanAlgebra, boxes: Mapping[str, Sequence[int]]) -> RelationalFrame:
    """Full frame on B₊ with x R y iff x ∧ ◇y' ≠ 0 for every nonzero y' ≤ y."""
    P, idx = bplus_poset(B)
    rels = {}
    for i, op in boxes.items():
        _check_multiplicative(B, op, i)
        dia = [B.neg[op[B.neg[a]]] for a in range(B.size)]
        succ = []
        for x in idx:
            succ.append(mask_of(k for k, y in enumerate(idx)
                                if all(B.meet[x][dia[yp]] != B.bottom for yp in idx if B.leq[yp][y])))
        rels[i] = tuple(succ)
    return RelationalFrame(PossibilityFrame.full(P), rels)


def bao_filter_frame(B: FiniteBooleanAlgebra, boxes: Mapping[str, Sequence[int]]) -> RelationalFrame:
    """Frame on proper filters: F R G iff □a ∈ F implies a ∈ G."""
    P, fs = filter_poset(B)
    rels = {}
    for i, op in boxes.items():
        _check_multiplicative(B, op, i)
        succ = []
        for F in fs:
            succ.append(mask_of(k for k, G in enumerate(fs)
                                if all(a in G for a in range(B.size) if op[a] in F)))
        rels[i] = tuple(succ)
    return RelationalFrame(PossibilityFrame(P, [hat(B, fs, a) for a in range(B.size)]), rels)


def box_tables_match(frame: RelationalFrame, B: FiniteBooleanAlgebra,
                     boxes: Mapping[str, Sequence[int]], embed: Sequence[int]) -> bool:
    """Check box(embed(a)) = embed(□a) for every element and index."""
    return all(frame.box(i, embed[a]) == embed[op[a]] for i, op in boxes.items()
               for a in range(B.size))


def vbao_embedding(B: FiniteBooleanAlgebra) -> list[int]:
    """b ↦ ↓₊b as bitmasks over B₊."""
    _, idx = bplus_poset(B)
    return [mask_of(k for k, a in enumerate(idx) if B.leq[a][b]) for b in range(B.size)]


def filter_embedding(B: FiniteBooleanAlgebra) -> list[int]:
    _, fs = filter_poset(B)
    return [hat(B, fs, a) for a in range(B.size)]
