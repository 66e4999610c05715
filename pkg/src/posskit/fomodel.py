"""Finite first-order possibility models with guises, partial functions,
optional varying domains and accessibility relations.

Guises, predicates and functions are stored by index: ``eq[s][a]`` is the
bitmask of guises identified with ``a`` at possibility ``s``; predicate and
function interpretations are per-possibility frozensets of index tuples.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CapExceeded, InputError
from .poset import Poset, mask_of, members, ro_neg
from .syntax import And, Box, Diamond, Falsum, Formula, Iff, Implies, Not, Or, ParseError
from .verdict import PASS, Check, fail


# terms and formulas

class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return show_term(self)


@dataclass(frozen=True)
class TVar(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    """Function application; constants are applications with no arguments."""

    fn: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Signature:
    predicates: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.predicates] + [n for n, _ in self.functions]
        if len(set(names)) != len(names):
            raise InputError("symbol names must be distinct")
        if any(k < 0 for _, k in self.predicates + self.functions):
            raise InputError("arities must be nonnegative")

    @classmethod
    def of(cls, predicates: Mapping[str, int] = {}, functions: Mapping[str, int] = {}) -> "Signature":
        return cls(tuple(sorted(predicates.items())), tuple(sorted(functions.items())))

    @property
    def pred_arity(self) -> dict[str, int]:
        return dict(self.predicates)

    @property
    def fun_arity(self) -> dict[str, int]:
        return dict(self.functions)


def show_term(t: Term) -> str:
    if isinstance(t, TVar):
        return t.name
    if not t.args:
        return t.fn
    return f"{t.fn}({', '.join(show_term(a) for a in t.args)})"


def fo_show(f: Formula) -> str:
    def arg(g):
        s = fo_show(g)
        return f"({s})" if isinstance(g, (And, Or, Implies, Iff)) else s

    if isinstance(f, Falsum):
        return "_|_"
    if isinstance(f, Eq):
        return f"{show_term(f.left)} = {show_term(f.right)}"
    if isinstance(f, Pred):
        return f.name if not f.args else f"{f.name}({', '.join(map(show_term, f.args))})"
    if isinstance(f, Not):
        return "~" + arg(f.sub)
    if isinstance(f, (Box, Diamond)):
        op = "[]" if isinstance(f, Box) else "<>"
        return f"{op}{'' if f.index == '0' else f.index} {arg(f.sub)}"
    if isinstance(f, (Forall, Exists)):
        return f"{'A' if isinstance(f, Forall) else 'E'} {f.var} {arg(f.body)}"
    sym = {And: "&", Or: "|", Implies: "->", Iff: "<->"}.get(type(f))
    if sym is None:
        raise InputError(f"not a first-order formula: {f!r}")
    return f"{arg(f.left)} {sym} {arg(f.right)}"


# parsing

_FO_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<falsum>_\|_)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<box>\[\](?P<bidx>[A-Za-z0-9_]*))
  | (?P<dia><>(?P<didx>[A-Za-z0-9_]*))
  | (?P<not>~)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<eq>=)
  | (?P<comma>,)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def _fo_tokens(text: str):
    toks, pos = [], 0
    while pos < len(text):
        m = _FO_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind in ("box", "bidx"):
            toks.append(("box", m.group("bidx") or "0", pos))
        elif kind in ("dia", "didx"):
            toks.append(("dia", m.group("didx") or "0", pos))
        elif kind != "ws":
            toks.append((kind, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _FOParser:
    _LEVELS = [("iff", Iff, False), ("imp", Implies, True), ("or", Or, False), ("and", And, False)]

    def __init__(self, text: str, sig: Signature):
        self.toks = _fo_tokens(text)
        self.i = 0
        self.preds = sig.pred_arity
        self.funs = sig.fun_arity

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def binary(self, level: int) -> Formula:
        if level == len(self._LEVELS):
            return self.unary()
        kind, ctor, right = self._LEVELS[level]
        left = self.binary(level + 1)
        if right:
            if self.peek()[0] == kind:
                self.take()
                return ctor(left, self.binary(level))
            return left
        while self.peek()[0] == kind:
            self.take()
            left = ctor(left, self.binary(level + 1))
        return left

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "not":
            self.take()
            return Not(self.unary())
        if kind in ("box", "dia"):
            self.take()
            return (Box if kind == "box" else Diamond)(val, self.unary())
        if kind == "falsum":
            self.take()
            return Falsum()
        if kind == "lp":
            self.take()
            f = self.binary(0)
            self.take("rp")
            return f
        if kind == "ident" and val in ("A", "E") and self.toks[self.i + 1][0] == "ident":
            self.take()
            var = self.take("ident")[1]
            if var in self.preds or var in self.funs:
                raise ParseError(f"cannot quantify over symbol {var!r}", pos)
            body = self.unary()
            return Forall(var, body) if val == "A" else Exists(var, body)
        if kind == "ident" and val in self.preds:
            self.take()
            args = self.arglist(val, self.preds[val], pos)
            return Pred(val, args)
        left = self.term()
        self.take("eq")
        return Eq(left, self.term())

    def arglist(self, name: str, arity: int, pos: int) -> tuple[Term, ...]:
        args: list[Term] = []
        if self.peek()[0] == "lp":
            self.take()
            if self.peek()[0] != "rp":
                args.append(self.term())
                while self.peek()[0] == "comma":
                    self.take()
                    args.append(self.term())
            self.take("rp")
        if len(args) != arity:
            raise ParseError(f"{name} expects {arity} arguments, got {len(args)}", pos)
        return tuple(args)

    def term(self) -> Term:
        kind, val, pos = self.take("ident")
        if val in self.funs:
            return App(val, self.arglist(val, self.funs[val], pos))
        if val in self.preds:
            raise ParseError(f"predicate {val!r} used as a term", pos)
        return TVar(val)


def fo_parse(text: str, sig: Signature) -> Formula:
    """Parse a first-order formula; the signature separates symbols from variables.

    Terms are ``x``, ``c`` or ``f(t, ...)``; atoms ``t = u`` and ``P(t, ...)``;
    quantifiers ``A x φ`` and ``E x φ``; connectives as in the propositional grammar.
    """
    p = _FOParser(text, sig)
    f = p.binary(0)
    p.take("eof")
    return f


# syntactic helpers

def term_vars(t: Term) -> set[str]:
    if isinstance(t, TVar):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def _fo_children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Box, Diamond)):
        return (f.sub,)
    if isinstance(f, (Forall, Exists)):
        return (f.body,)
    if isinstance(f, (And, Or, Implies, Iff)):
        return (f.left, f.right)
    return ()


def fo_free_vars(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Pred):
        return set().union(*map(term_vars, f.args)) if f.args else set()
    if isinstance(f, (Forall, Exists)):
        return fo_free_vars(f.body) - {f.var}
    out: set[str] = set()
    for c in _fo_children(f):
        out |= fo_free_vars(c)
    return out


def fo_depth(f: Formula) -> int:
    cs = _fo_children(f)
    return 0 if not cs else 1 + max(fo_depth(c) for c in cs)


def substitute_term(u: Term, x: str, t: Term) -> Term:
    if isinstance(u, TVar):
        return t if u.name == x else u
    return App(u.fn, tuple(substitute_term(a, x, t) for a in u.args))


def substitutable(f: Formula, x: str, t: Term) -> bool:
    """No free occurrence of x lies under a quantifier binding a variable of t."""
    tv = term_vars(t)

    def ok(g, bound):
        if isinstance(g, (Eq, Pred)):
            return not (x in fo_free_vars(g) and bound & tv)
        if isinstance(g, (Forall, Exists)):
            if g.var == x:
                return True
            return ok(g.body, bound | {g.var})
        return all(ok(c, bound) for c in _fo_children(g))

    return ok(f, set())


def substitute(f: Formula, x: str, t: Term) -> Formula:
    """φ with free occurrences of x replaced by t (no renaming)."""
    s = lambda g: substitute(g, x, t)
    if isinstance(f, Falsum):
        return f
    if isinstance(f, Eq):
        return Eq(substitute_term(f.left, x, t), substitute_term(f.right, x, t))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(substitute_term(a, x, t) for a in f.args))
    if isinstance(f, (Forall, Exists)):
        return f if f.var == x else type(f)(f.var, s(f.body))
    if isinstance(f, Not):
        return Not(s(f.sub))
    if isinstance(f, (Box, Diamond)):
        return type(f)(f.index, s(f.sub))
    return type(f)(s(f.left), s(f.right))


def fo_desugar(f: Formula) -> Formula:
    """Rewrite ∨, →, ↔, ◇, ∃ through ¬, ∧, □, ∀."""
    d = fo_desugar
    if isinstance(f, (Falsum, Eq, Pred)):
        return f
    if isinstance(f, Not):
        return Not(d(f.sub))
    if isinstance(f, And):
        return And(d(f.left), d(f.right))
    if isinstance(f, Or):
        return Not(And(Not(d(f.left)), Not(d(f.right))))
    if isinstance(f, Implies):
        return Not(And(d(f.left), Not(d(f.right))))
    if isinstance(f, Iff):
        a, b = d(f.left), d(f.right)
        return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
    if isinstance(f, Box):
        return Box(f.index, d(f.sub))
    if isinstance(f, Diamond):
        return Not(Box(f.index, Not(d(f.sub))))
    if isinstance(f, Forall):
        return Forall(f.var, d(f.body))
    if isinstance(f, Exists):
        return Not(Forall(f.var, Not(d(f.body))))
    raise InputError(f"not a first-order formula: {f!r}")


# models

Interp = tuple[frozenset, ...]  # one set of index tuples per possibility


@dataclass(frozen=True)
class FOModel:
    """(S, ⊑, D, ≍, V) with optional domain function d and relations Rᵢ."""

    poset: Poset
    domain: tuple[str, ...]
    eq: tuple[tuple[int, ...], ...]
    preds: tuple[tuple[str, int, Interp], ...] = ()
    funcs: tuple[tuple[str, int, Interp], ...] = ()
    d: tuple[int, ...] | None = None
    relations: tuple[tuple[str, tuple[int, ...]], ...] | None = None

    def __post_init__(self):
        n, k = self.poset.size, len(self.domain)
        if k == 0:
            raise InputError("domain must be nonempty")
        if len(set(self.domain)) != k:
            raise InputError("guise names must be distinct")
        if len(self.eq) != n or any(len(row) != k for row in self.eq):
            raise InputError("eq needs one row of guise masks per possibility")
        Signature(tuple((p, a) for p, a, _ in self.preds), tuple((f, a) for f, a, _ in self.funcs))
        for name, arity, interp in self.preds + self.funcs:
            width = arity + (1 if any(name == f for f, _, _ in self.funcs) else 0)
            if len(interp) != n:
                raise InputError(f"{name} needs one interpretation per possibility")
            for tuples in interp:
                for tup in tuples:
                    if len(tup) != width or any(not 0 <= a < k for a in tup):
                        raise InputError(f"bad tuple {tup} for {name}")
        if self.d is not None and len(self.d) != n:
            raise InputError("domain function needs one set per possibility")
        if self.relations is not None:
            for _, r in self.relations:
                if len(r) != n:
                    raise InputError("relation needs one successor set per possibility")

    @classmethod
    def build(cls, poset: Poset, domain: Sequence[str], eq=None, preds=None, funcs=None,
              d=None, relations=None) -> "FOModel":
        """Construct from names.

        ``eq`` maps a possibility name to a list of classes (lists of guises);
        guises not mentioned are singletons, and missing possibilities get the
        identity. ``preds``/``funcs`` map a symbol to ``(arity, {point: tuples})``
        where function tuples list the arguments followed by the output.
        ``d`` maps point names to guise lists; ``relations`` maps an index to
        ``(a, b)`` pairs of point names.
        """
        domain = tuple(domain)
        gi = {g: i for i, g in enumerate(domain)}

        def guise(g):
            if g not in gi:
                raise InputError(f"unknown guise {g!r}")
            return gi[g]

        rows = []
        for s in range(poset.size):
            row = [1 << a for a in range(len(domain))]
            for cls_ in (eq or {}).get(poset.names[s], []):
                m = mask_of(guise(g) for g in cls_)
                for a in members(m):
                    row[a] |= m
            rows.append(tuple(row))

        def interp(table_spec):
            out = []
            for name, (arity, table) in sorted((table_spec or {}).items()):
                for p in table:
                    poset.index(p)
                per = tuple(frozenset(tuple(guise(g) for g in tup) for tup in table.get(p, ()))
                            for p in poset.names)
                out.append((name, arity, per))
            return tuple(out)

        dd = None
        if d is not None:
            for p in d:
                poset.index(p)
            dd = tuple(mask_of(guise(g) for g in d.get(p, ())) for p in poset.names)
        rels = None
        if relations is not None:
            rels = []
            for idx, pairs in sorted(relations.items()):
                succ = [0] * poset.size
                for a, b in pairs:
                    succ[poset.index(a)] |= 1 << poset.index(b)
                rels.append((str(idx), tuple(succ)))
            rels = tuple(rels)
        return cls(poset, domain, tuple(rows), interp(preds), interp(funcs), dd, rels)

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def signature(self) -> Signature:
        return Signature(tuple(sorted((p, a) for p, a, _ in self.preds)),
                         tuple(sorted((f, a) for f, a, _ in self.funcs)))

    def guise(self, name: str) -> int:
        try:
            return self.domain.index(name)
        except ValueError:
            raise InputError(f"unknown guise {name!r}") from None

    def guise_label(self, mask: int) -> frozenset[str]:
        return frozenset(self.domain[a] for a in members(mask))

    def pred(self, name: str) -> tuple[int, Interp]:
        for p, a, i in self.preds:
            if p == name:
                return a, i
        raise InputError(f"unknown predicate {name!r}")

    def func(self, name: str) -> tuple[int, Interp]:
        for f, a, i in self.funcs:
            if f == name:
                return a, i
        raise InputError(f"unknown function symbol {name!r}")

    def rel(self, i: str) -> tuple[int, ...]:
        for k, r in self.relations or ():
            if k == i:
                return r
        raise InputError(f"no relation for modal index {i!r}")

    def has_total_functions(self) -> bool:
        k = len(self.domain)
        for _, arity, interp in self.funcs:
            for tuples in interp:
                defined = {t[:-1] for t in tuples}
                if len(defined) != k ** arity:
                    return False
        return True

    def parse(self, text: str) -> Formula:
        return fo_parse(text, self.signature)


def _refinable(P: Poset, X: int) -> int | None:
    """First point outside X none of whose refinements settle X false, if any."""
    for s in range(P.size):
        if not X >> s & 1 and not any(P.down[sp] & X == 0 for sp in members(P.down[s])):
            return s
    return None


def _variants(M: FOModel, s: int, tup: tuple[int, ...]):
    return itertools.product(*(members(M.eq[s][a]) for a in tup))


def validate_fomodel(M: FOModel) -> Check:
    """Check every structural condition on ≍, predicates, functions, d and Rᵢ."""
    P, k, N, G = M.poset, len(M.domain), M.poset.names, M.domain
    for s in range(P.size):
        row = M.eq[s]
        for a in range(k):
            if not row[a] >> a & 1:
                return fail(f"≍ not reflexive at {N[s]} on {G[a]}")
            for b in members(row[a]):
                if row[b] != row[a]:
                    return fail(f"≍ at {N[s]} is not an equivalence ({G[a]}, {G[b]})")
    for a in range(k):
        for b in range(k):
            X = mask_of(s for s in range(P.size) if M.eq[s][a] >> b & 1)
            for s in members(X):
                if P.down[s] & ~X:
                    sp = members(P.down[s] & ~X)[0]
                    return fail(f"≍ persistence fails: {G[a]} ≍ {G[b]} at {N[s]} but not at {N[sp]}")
            s = _refinable(P, X)
            if s is not None:
                return fail(f"≍ refinability fails for {G[a]}, {G[b]} at {N[s]}")
    is_fun = {f for f, _, _ in M.funcs}
    for name, arity, interp in M.preds + M.funcs:
        what = "function" if name in is_fun else "predicate"
        for s in range(P.size):
            for tup in interp[s]:
                for sp in members(P.down[s]):
                    for var in _variants(M, sp, tup):
                        if var not in interp[sp]:
                            return fail(f"{what} {name} persistence fails at {N[sp]} for "
                                        f"{tuple(G[a] for a in var)}")
        if name not in is_fun:
            for tup in itertools.product(range(k), repeat=arity):
                X = mask_of(s for s in range(P.size) if tup in interp[s])
                s = _refinable(P, X)
                if s is not None:
                    return fail(f"predicate {name} refinability fails at {N[s]} for "
                                f"{tuple(G[a] for a in tup)}")
            continue
        for s in range(P.size):
            outs: dict[tuple, int] = {}
            for tup in interp[s]:
                outs[tup[:-1]] = outs.get(tup[:-1], 0) | 1 << tup[-1]
            for args, m in outs.items():
                b = members(m)[0]
                if m & ~M.eq[s][b]:
                    return fail(f"function {name} is not quasi-functional at {N[s]} on "
                                f"{tuple(G[a] for a in args)}")
        for args in itertools.product(range(k), repeat=arity):
            X = mask_of(s for s in range(P.size) if any(t[:-1] == args for t in interp[s]))
            for s in range(P.size):
                if not P.down[s] & X:
                    return fail(f"function {name} never becomes defined below {N[s]} on "
                                f"{tuple(G[a] for a in args)}")
    if M.d is not None:
        for s in range(P.size):
            for a in members(M.d[s]):
                for sp in members(P.down[s]):
                    if M.eq[sp][a] & ~M.d[sp]:
                        return fail(f"d persistence fails at {N[sp]} for {G[a]}")
        for a in range(k):
            X = mask_of(s for s in range(P.size) if M.d[s] >> a & 1)
            s = _refinable(P, X)
            if s is not None:
                return fail(f"d refinability fails at {N[s]} for {G[a]}")
    if M.relations is not None:
        from .modal import RelationalFrame, validate_relational_frame
        chk = validate_relational_frame(RelationalFrame.full(P, dict(M.relations)))
        if not chk:
            return chk
    return PASS


# semantics

def _assignment(M: FOModel, g: Mapping[str, str | int]) -> dict[str, int]:
    return {x: (a if isinstance(a, int) else M.guise(a)) for x, a in g.items()}


def _den(M: FOModel, s: int, g: Mapping[str, int], t: Term) -> int:
    if isinstance(t, TVar):
        if t.name not in g:
            raise InputError(f"variable {t.name!r} is not assigned")
        return M.eq[s][g[t.name]]
    arity, interp = M.func(t.fn)
    if len(t.args) != arity:
        raise InputError(f"{t.fn} expects {arity} arguments")
    dens = [_den(M, s, g, a) for a in t.args]
    out = 0
    for tup in interp[s]:
        if all(m >> a & 1 for m, a in zip(dens, tup)):
            out |= 1 << tup[-1]
    return out


def denote(M: FOModel, s: int, g: Mapping[str, str | int], t: Term) -> frozenset[str]:
    """⟦t⟧ at s under g: an ≍ₛ-class of guises, or empty where undefined."""
    M.poset.check_index(s)
    return M.guise_label(_den(M, s, _assignment(M, g), t))


def _atom_points(M: FOModel, g: Mapping[str, int], f: Formula) -> int:
    """Points s' where the atom's local condition holds (before quantifying over ⊑)."""
    good = 0
    for s in range(M.size):
        if isinstance(f, Eq):
            a, b = _den(M, s, g, f.left), _den(M, s, g, f.right)
            ok = not (a and b) or a == b
        else:
            arity, interp = M.pred(f.name)
            if len(f.args) != arity:
                raise InputError(f"{f.name} expects {arity} arguments")
            dens = [_den(M, s, g, t) for t in f.args]
            ok = not all(dens) or any(tup in interp[s]
                                      for tup in itertools.product(*map(members, dens)))
        if ok:
            good |= 1 << s
    return good


def fo_extension(M: FOModel, g: Mapping[str, str | int], f: Formula) -> int:
    """‖f‖ under g, as a bitmask of possibilities."""
    P = M.poset

    def interior(X):
        return mask_of(s for s in range(P.size) if P.down[s] & ~X == 0)

    def ev(h, g):
        if isinstance(h, Falsum):
            return 0
        if isinstance(h, (Eq, Pred)):
            return interior(_atom_points(M, g, h))
        if isinstance(h, Not):
            return ro_neg(P, ev(h.sub, g))
        if isinstance(h, And):
            return ev(h.left, g) & ev(h.right, g)
        if isinstance(h, Forall):
            exts = [ev(h.body, {**g, h.var: a}) for a in range(len(M.domain))]
            if M.d is None:
                out = P.full
                for e in exts:
                    out &= e
                return out
            return mask_of(s for s in range(P.size)
                           if all(exts[a] >> s & 1 for a in members(M.d[s])))
        if isinstance(h, Box):
            if M.relations is None:
                raise InputError("modal formula on a model without relations")
            r, Z = M.rel(h.index), ev(h.sub, g)
            return mask_of(s for s in range(P.size) if r[s] & ~Z == 0)
        return ev(fo_desugar(h), g)

    return ev(f, _assignment(M, g))


def fo_eval(M: FOModel, s: int, g: Mapping[str, str | int], f: Formula) -> bool:
    M.poset.check_index(s)
    return bool(fo_extension(M, g, f) >> s & 1)


def generated_submodel(M: FOModel, s: int) -> tuple[FOModel, int]:
    """Restriction to ↓s; returns the submodel and the new index of s."""
    P = M.poset
    P.check_index(s)
    Q, idx = P.sub(P.down[s])
    pos = {old: new for new, old in enumerate(idx)}

    def restrict(interp):
        return tuple(interp[i] for i in idx)

    rels = None
    if M.relations is not None:
        rels = tuple((k, tuple(mask_of(pos[y] for y in members(r[i] & P.down[s])) for i in idx))
                     for k, r in M.relations)
    sub = FOModel(Q, M.domain, tuple(M.eq[i] for i in idx),
                  tuple((p, a, restrict(v)) for p, a, v in M.preds),
                  tuple((f, a, restrict(v)) for f, a, v in M.funcs),
                  None if M.d is None else tuple(M.d[i] for i in idx), rels)
    return sub, pos[s]


# the world-fact entailment on world frames

FACT_CAP = 1 << 16  # interpretations of Q and c enumerated per frame


def _exists_formula(x: str, fresh: str) -> Formula:
    return Exists(fresh, Eq(TVar(fresh), TVar(x)))


def fact_formula(index: str = "0") -> Formula:
    """Q(c) → ∃x □(E(x) ↔ Q(c))."""
    qc = Pred("Q", (App("c"),))
    return Implies(qc, Exists("x", Box(index, Iff(_exists_formula("x", "x1"), qc))))


def world_formula(index: str = "0") -> Formula:
    """∃x ∀y □(E(x) → E(y))."""
    return Exists("x", Forall("y", Box(index, Implies(_exists_formula("x", "x1"),
                                                      _exists_formula("y", "y1")))))


@dataclass(frozen=True)
class FactWorld:
    fact_valid: bool
    world_valid: bool

    @property
    def holds(self) -> bool:
        return not self.fact_valid or self.world_valid


def _classes(row: Sequence[int]) -> list[int]:
    return sorted(set(row))


def fact_world_check(M: FOModel, cap: int = FACT_CAP) -> FactWorld:
    """Decide whether frame validity of the fact scheme yields that of the world sentence.

    The frame is read off ``M`` (⊑ must be the identity, d and one relation
    present); any predicates and functions of ``M`` are ignored.
    """
    P = M.poset
    if any(P.down[s] != 1 << s for s in range(P.size)):
        raise InputError("fact/world check needs a world frame (⊑ = identity)")
    if M.d is None or not M.relations or len(M.relations) != 1:
        raise InputError("fact/world check needs a domain function and exactly one relation")
    index = M.relations[0][0]
    per_world = []
    total = 1
    for s in range(P.size):
        cls_ = _classes(M.eq[s])
        q_opts = [mask_of_union(c) for c in _subsets(cls_)]
        per_world.append([(q, c) for q in q_opts for c in cls_])
        total *= len(per_world[-1])
        if total > cap:
            raise CapExceeded(f"more than {cap} interpretations of Q and c")
    frame = FOModel(P, M.domain, M.eq, (), (), M.d, M.relations)
    chk = validate_fomodel(frame)
    if not chk:
        raise InputError(f"invalid frame: {chk.witness}")
    g = {"x": 0, "y": 0}
    world_valid = fo_extension(frame, g, world_formula(index)) == P.full
    fact = fact_formula(index)
    fact_valid = True
    for choice in itertools.product(*per_world):
        q = tuple(frozenset((a,) for a in members(qm)) for qm, _ in choice)
        c = tuple(frozenset(((b,) for b in members(cm))) for _, cm in choice)
        model = FOModel(P, M.domain, M.eq, (("Q", 1, q),), (("c", 0, c),), M.d, M.relations)
        if fo_extension(model, g, fact) != P.full:
            fact_valid = False
            break
    return FactWorld(fact_valid, world_valid)


def _subsets(items: Sequence[int]):
    for bits in range(1 << len(items)):
        yield [items[i] for i in members(bits)]


def mask_of_union(masks: Sequence[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


# random generation

@dataclass(frozen=True)
class FOGenConfig:
    max_points: int = 4
    max_guises: int = 3
    predicates: tuple[tuple[str, int], ...] = (("P", 1), ("R", 2))
    functions: tuple[tuple[str, int], ...] = (("c", 0), ("f", 1))
    with_domain: bool = False
    relation_indices: tuple[str, ...] = ()


def _random_partition(rng: random.Random, k: int) -> list[int]:
    """Class mask for each guise."""
    labels = []
    for a in range(k):
        labels.append(rng.randrange(0, max(labels, default=-1) + 2))
    row = []
    for a in range(k):
        row.append(mask_of(b for b in range(k) if labels[b] == labels[a]))
    return row


def random_fomodel(rng: random.Random, cfg: FOGenConfig = FOGenConfig()) -> FOModel:
    """A random valid model: random total structures at the worlds, and at every
    other point the common part of the worlds below it."""
    from .modal import ro_closed_under_box
    from .poset import random_poset, worlds
    n = rng.randint(1, cfg.max_points)
    k = rng.randint(1, cfg.max_guises)
    P = random_poset(rng, n)
    W = worlds(P)
    eq_w, preds_w, funcs_w, d_w = {}, {}, {}, {}
    for w in members(W):
        row = _random_partition(rng, k)
        eq_w[w] = row
        reps = sorted(set(row))
        for name, arity in cfg.predicates:
            chosen = {ct for ct in itertools.product(reps, repeat=arity) if rng.random() < 0.5}
            preds_w[name, w] = frozenset(t for ct in chosen for t in itertools.product(*map(members, ct)))
        for name, arity in cfg.functions:
            tuples = set()
            for ct in itertools.product(reps, repeat=arity):
                out = rng.choice(reps)
                for args in itertools.product(*map(members, ct)):
                    tuples |= {args + (b,) for b in members(out)}
            funcs_w[name, w] = frozenset(tuples)
        d_w[w] = mask_of_union([c for c in reps if rng.random() < 0.6])
    below = [members(P.down[s] & W) for s in range(n)]
    eq = []
    for s in range(n):
        row = []
        for a in range(k):
            m = (1 << k) - 1
            for w in below[s]:
                m &= eq_w[w][a]
            row.append(m)
        eq.append(tuple(row))
    preds = tuple((name, arity, tuple(frozenset.intersection(*(preds_w[name, w] for w in below[s]))
                                      for s in range(n)))
                  for name, arity in cfg.predicates)
    funcs = tuple((name, arity, tuple(frozenset.intersection(*(funcs_w[name, w] for w in below[s]))
                                      for s in range(n)))
                  for name, arity in cfg.functions)
    d = None
    if cfg.with_domain:
        d = []
        for s in range(n):
            m = (1 << k) - 1
            for w in below[s]:
                m &= d_w[w]
            d.append(m)
        d = tuple(d)
    rels = None
    if cfg.relation_indices:
        rels = []
        for idx in cfg.relation_indices:
            for _ in range(50):
                r = tuple(mask_of(y for y in range(n) if rng.random() < 0.4) for _ in range(n))
                if ro_closed_under_box(P, r):
                    break
            else:
                r = tuple(0 for _ in range(n))
            rels.append((idx, r))
        rels = tuple(rels)
    return FOModel(P, tuple(f"g{a}" for a in range(k)), tuple(eq), preds, funcs, d, rels)


def random_term(rng: random.Random, variables: Sequence[str], functions: Sequence[tuple[str, int]],
                depth: int) -> Term:
    if depth == 0 or not functions or rng.random() < 0.4:
        consts = [f for f, a in functions if a == 0]
        if consts and rng.random() < 0.3:
            return App(rng.choice(consts))
        return TVar(rng.choice(list(variables)))
    name, arity = rng.choice(list(functions))
    return App(name, tuple(random_term(rng, variables, functions, depth - 1) for _ in range(arity)))


def random_fo_formula(rng: random.Random, sig: Signature, variables: Sequence[str], depth: int,
                      modal: Sequence[str] = ()) -> Formula:
    funcs = sig.functions
    if depth == 0 or rng.random() < 0.2:
        if not sig.predicates or rng.random() < 0.4:
            return Eq(random_term(rng, variables, funcs, 1), random_term(rng, variables, funcs, 1))
        name, arity = rng.choice(list(sig.predicates))
        return Pred(name, tuple(random_term(rng, variables, funcs, 1) for _ in range(arity)))
    ops = ["not", "and", "or", "imp", "all", "ex"] + (["box", "dia"] if modal else [])
    op = rng.choice(ops)
    sub = lambda: random_fo_formula(rng, sig, variables, depth - 1, modal)
    if op == "not":
        return Not(sub())
    if op in ("all", "ex"):
        return (Forall if op == "all" else Exists)(rng.choice(list(variables)), sub())
    if op in ("box", "dia"):
        return (Box if op == "box" else Diamond)(rng.choice(list(modal)), sub())
    return {"and": And, "or": Or, "imp": Implies}[op](sub(), sub())
