"""Formula syntax for the propositional languages: AST, parser, printer.

Concrete grammar (ASCII):

    _|_          falsum
    ~φ           negation
    φ & ψ        conjunction
    φ | ψ        disjunction
    φ ?? ψ       inquisitive disjunction
    φ -> ψ       implication (right associative)
    φ <-> ψ      biconditional
    []i φ, <>i φ box / diamond with index i (default index "0")
    A p φ, E p φ propositional quantifiers

Unary operators bind tightest, then &, |, ??, ->, <->.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError

DEFAULT_INDEX = "0"


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class InqOr(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    index: str
    sub: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    index: str
    sub: Formula


@dataclass(frozen=True)
class ForallProp(Formula):
    name: str
    body: Formula


@dataclass(frozen=True)
class ExistsProp(Formula):
    name: str
    body: Formula


BINARY = (And, Or, Implies, Iff, InqOr)
TOP = Not(Falsum())


class ParseError(InputError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<falsum>_\|_)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<inq>\?\?)
  | (?P<box>\[\](?P<bidx>[A-Za-z0-9_]*))
  | (?P<dia><>(?P<didx>[A-Za-z0-9_]*))
  | (?P<not>~)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind in ("bidx", "didx"):
            kind = "box" if m.group("box") else "dia"
        if kind == "box":
            toks.append(("box", m.group("bidx") or DEFAULT_INDEX, pos))
        elif kind == "dia":
            toks.append(("dia", m.group("didx") or DEFAULT_INDEX, pos))
        elif kind != "ws":
            toks.append((kind, m.group(), pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


# binary levels from loosest to tightest: (token kind, constructor, right associative)
_LEVELS = [("iff", Iff, False), ("imp", Implies, True), ("inq", InqOr, False),
           ("or", Or, False), ("and", And, False)]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = {"rp": "')'", "ident": "a variable", "eof": "end of input"}.get(kind, kind)
            raise ParseError(f"expected {want}, found {tok[1]!r}" if tok[1] else
                             f"expected {want}, found end of input", tok[2])
        self.i += 1
        return tok

    def binary(self, level: int) -> Formula:
        if level == len(_LEVELS):
            return self.unary()
        kind, ctor, right = _LEVELS[level]
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
        if kind == "box":
            self.take()
            return Box(val, self.unary())
        if kind == "dia":
            self.take()
            return Diamond(val, self.unary())
        if kind == "falsum":
            self.take()
            return Falsum()
        if kind == "lp":
            self.take()
            f = self.binary(0)
            self.take("rp")
            return f
        if kind == "ident":
            self.take()
            if val in ("A", "E"):
                name = self.take("ident")[1]
                if name in ("A", "E"):
                    raise ParseError("quantifier letter used as variable", pos)
                body = self.unary()
                return ForallProp(name, body) if val == "A" else ExistsProp(name, body)
            return Var(val)
        raise ParseError(f"unexpected {val!r}" if val else "unexpected end of input", pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.binary(0)
    p.take("eof")
    return f


_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->", InqOr: "??"}


def show(f: Formula) -> str:
    """Canonical text: binary subformulas below the top are parenthesized."""

    def arg(g):
        s = show(g)
        return f"({s})" if isinstance(g, BINARY) else s

    if isinstance(f, Falsum):
        return "_|_"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "~" + arg(f.sub)
    if isinstance(f, (Box, Diamond)):
        op = "[]" if isinstance(f, Box) else "<>"
        idx = "" if f.index == DEFAULT_INDEX else f.index
        return f"{op}{idx} {arg(f.sub)}"
    if isinstance(f, (ForallProp, ExistsProp)):
        q = "A" if isinstance(f, ForallProp) else "E"
        return f"{q} {f.name} {arg(f.body)}"
    if isinstance(f, BINARY):
        return f"{arg(f.left)} {_SYMBOL[type(f)]} {arg(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


# alternative name used by callers that prefer the verb
print_formula = show


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Box, Diamond)):
        return (f.sub,)
    if isinstance(f, (ForallProp, ExistsProp)):
        return (f.body,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(g):
        for c in children(g):
            walk(c)
        seen.setdefault(g)

    walk(f)
    return list(seen)


def depth(f: Formula) -> int:
    cs = children(f)
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, (ForallProp, ExistsProp)):
        return free_vars(f.body) - {f.name}
    out: set[str] = set()
    for c in children(f):
        out |= free_vars(c)
    return out


def indices(f: Formula) -> set[str]:
    out = {f.index} if isinstance(f, (Box, Diamond)) else set()
    for c in children(f):
        out |= indices(c)
    return out


def desugar(f: Formula) -> Formula:
    """Rewrite ∨, →, ↔, ◇ and ∃ in terms of ¬, ∧, □ and ∀ (⩔ is kept)."""
    d = desugar
    if isinstance(f, (Falsum, Var)):
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
    if isinstance(f, ForallProp):
        return ForallProp(f.name, d(f.body))
    if isinstance(f, ExistsProp):
        return Not(ForallProp(f.name, Not(d(f.body))))
    if isinstance(f, InqOr):
        return InqOr(d(f.left), d(f.right))
    raise TypeError(f"not a formula: {f!r}")


SQ = "sq"
R_INDEX = "R"


def bimodal_translate(f: Formula) -> Formula:
    """Translate a unimodal ¬/∧/□ formula into the bimodal language over ⊑ and R.

    Definable connectives are desugared first; the single modal index present
    (if any) becomes ``R``.
    """
    g = desugar(f)
    idx = indices(g)
    if len(idx) > 1:
        raise InputError(f"formula is not unimodal: indices {sorted(idx)}")

    def tr(h):
        if isinstance(h, Falsum):
            return h
        if isinstance(h, Var):
            return Box(SQ, Diamond(SQ, h))
        if isinstance(h, Not):
            return Box(SQ, Not(tr(h.sub)))
        if isinstance(h, And):
            return And(tr(h.left), tr(h.right))
        if isinstance(h, Box):
            return Box(R_INDEX, tr(h.sub))
        raise InputError(f"outside the ¬/∧/□ fragment: {show(h)}")

    return tr(g)


def random_formula(rng: random.Random, variables: Sequence[str], depth_: int,
                   modal: Sequence[str] = (DEFAULT_INDEX,), connectives: Sequence[str] | None = None) -> Formula:
    """A random formula of depth at most ``depth_``."""
    conn = list(connectives or ["not", "and", "or", "imp", "box", "dia"])
    if not modal:
        conn = [c for c in conn if c not in ("box", "dia")]
    if depth_ == 0 or rng.random() < 0.2:
        return Var(rng.choice(list(variables))) if rng.random() > 0.05 else Falsum()
    c = rng.choice(conn)
    sub = lambda: random_formula(rng, variables, depth_ - 1, modal, conn)
    if c == "not":
        return Not(sub())
    if c == "box":
        return Box(rng.choice(list(modal)), sub())
    if c == "dia":
        return Diamond(rng.choice(list(modal)), sub())
    ctor = {"and": And, "or": Or, "imp": Implies, "iff": Iff, "inq": InqOr}[c]
    return ctor(sub(), sub())
