import random

import pytest
from hypothesis import given, settings, strategies as st

from posskit.errors import InputError
from posskit.syntax import (And, Box, Diamond, ExistsProp, ForallProp, Iff, Implies, InqOr,
                            Not, Or, ParseError, Var, bimodal_translate, depth, desugar, free_vars,
                            indices, parse, print_formula, random_formula, show, subformulas)

p, q, r = Var("p"), Var("q"), Var("r")


def test_w_formula_ast():
    f = parse("E q (q & A p (p -> [] (q -> p)))")
    assert f == ExistsProp("q", And(q, ForallProp("p", Implies(p, Box("0", Implies(q, p))))))


def test_precedence_and_associativity():
    assert parse("p & q | r") == Or(And(p, q), r)
    assert parse("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse("p | q ?? r") == InqOr(Or(p, q), r)
    assert parse("p <-> q -> r") == Iff(p, Implies(q, r))
    assert parse("~p & q") == And(Not(p), q)


def test_modal_indices():
    assert parse("<>f s") == Diamond("f", Var("s"))
    assert parse("[] p") == Box("0", p)
    # an index attaches directly to the operator: `<>p` is a diamond indexed p
    # still waiting for its operand, so a space must separate the operand
    with pytest.raises(ParseError):
        parse("<>p")
    assert parse("<>p q") == Diamond("p", q)


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as e:
        parse("p & ")
    assert e.value.pos == 4
    with pytest.raises(ParseError):
        parse("p $ q")
    with pytest.raises(ParseError):
        parse("(p & q")


def test_show_roundtrip_examples():
    for text in ["p & q", "~(p | q)", "[]f (s -> <> s)", "A p (p -> p)", "(p | q) ?? r", "_|_"]:
        f = parse(text)
        assert parse(show(f)) == f
        assert print_formula(f) == show(f)


def test_helpers():
    f = parse("A p (p -> [] q) & <>a r")
    assert free_vars(f) == {"q", "r"}
    assert indices(f) == {"0", "a"}
    assert depth(parse("~~p")) == 2
    assert subformulas(parse("p & p"))[0] == p


def test_desugar_keeps_core_connectives_only():
    f = desugar(parse("(p | q) -> <> (p <-> E q q)"))
    kinds = {type(g) for g in subformulas(f)}
    assert kinds <= {Var, Not, And, Box, ForallProp}


def test_bimodal_translate():
    assert bimodal_translate(p) == Box("sq", Diamond("sq", p))
    assert bimodal_translate(parse("[]a p")) == Box("R", Box("sq", Diamond("sq", p)))
    with pytest.raises(InputError):
        bimodal_translate(parse("[]a p & []b p"))
    with pytest.raises(InputError):
        bimodal_translate(parse("A p p"))


@given(st.integers(0, 10**6), st.integers(0, 4))
@settings(max_examples=200, deadline=None)
def test_random_roundtrip(seed, d):
    rng = random.Random(seed)
    f = random_formula(rng, ["p", "q", "r"], d, modal=["0", "a"],
                       connectives=["not", "and", "or", "imp", "iff", "inq", "box", "dia"])
    assert parse(show(f)) == f
    assert depth(f) <= d
