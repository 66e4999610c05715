import random

import pytest
from hypothesis import given, settings, strategies as st

from posskit.errors import CapExceeded, InputError
from posskit.fomodel import (App, Eq, Exists, FOGenConfig, FOModel, Forall, Pred, Signature, TVar,
                             denote, fact_formula, fact_world_check, fo_desugar, fo_depth,
                             fo_eval, fo_extension, fo_free_vars, fo_parse, fo_show,
                             generated_submodel, random_fo_formula, random_fomodel, random_term,
                             substitutable, substitute, substitute_term, term_vars,
                             validate_fomodel, world_formula)
from posskit.poset import Poset, is_regular_open, members, ro_neg
from posskit.syntax import And, Box, Iff, Implies, Not, Or

from oracles import frege, oracle_fact_world, random_tarskian, tarski_eval


def test_frege_goldens():
    M = frege()
    ix = M.poset.index
    assert validate_fomodel(M)
    assert denote(M, ix("s0"), {}, App("cm")) == {"m", "e"}
    assert denote(M, ix("s"), {}, App("cm")) == {"m"}
    f = M.parse("cm = ce")
    assert not fo_eval(M, ix("s"), {}, f)
    assert not fo_eval(M, ix("s"), {}, Not(f))
    assert fo_eval(M, ix("s0"), {}, f)
    assert not fo_eval(M, ix("s1"), {}, f)
    assert fo_extension(M, {}, M.parse("A x (x = x)")) == M.poset.full


def test_frege_generated_at_s0():
    M = frege()
    sub, s = generated_submodel(M, M.poset.index("s0"))
    assert sub.size == 1 and sub.eq[s] == (3, 3)
    top, t = generated_submodel(M, M.poset.index("s"))
    assert top.size == 3 and fo_extension(top, {}, top.parse("cm = ce")) == 1 << top.poset.index("s0")


def test_variable_denotation():
    M = frege()
    assert denote(M, 0, {"x": "e"}, TVar("x")) == {"e"}
    with pytest.raises(InputError):
        denote(M, 0, {}, TVar("x"))


def test_quasi_functionality_violation():
    P = Poset.chain(1)
    M = FOModel.build(P, ["a", "b"], funcs={"c": (0, {P.names[0]: [("a",), ("b",)]})})
    chk = validate_fomodel(M)
    assert not chk and "quasi" in chk.witness.lower()


def test_persistence_and_definedness_violations():
    P = Poset.from_pairs(["s", "t"], [("t", "s")])
    M = FOModel.build(P, ["a"], preds={"P": (1, {"s": [("a",)]})})
    assert not validate_fomodel(M)
    M = FOModel.build(P, ["a"], funcs={"c": (0, {})})
    assert not validate_fomodel(M)
    M = FOModel.build(P, ["a", "b"], eq={"s": [["a", "b"]]})
    assert not validate_fomodel(M)


def test_build_errors():
    P = Poset.chain(1)
    with pytest.raises(InputError):
        FOModel.build(P, [])
    with pytest.raises(InputError):
        FOModel.build(P, ["a"], preds={"P": (1, {P.names[0]: [("zz",)]})})
    with pytest.raises(InputError):
        FOModel.build(P, ["a"], preds={"P": (1, {"nowhere": []})})


def test_parser():
    sig = Signature.of({"P": 1, "R": 2}, {"c": 0, "f": 1})
    f = fo_parse("A x (P(f(x)) -> E y R(x, y)) & c = x", sig)
    assert f == And(Forall("x", Implies(Pred("P", (App("f", (TVar("x"),)),)),
                                        Exists("y", Pred("R", (TVar("x"), TVar("y")))))),
                    Eq(App("c"), TVar("x")))
    assert fo_parse(fo_show(f), sig) == f
    assert fo_free_vars(f) == {"x"}
    assert fo_depth(f) == 4
    for bad in ["P(x, y)", "f(x)", "R(x) = y", "A (x = x)", "x = "]:
        with pytest.raises(InputError):
            fo_parse(bad, sig)


def test_substitution_helpers():
    sig = Signature.of({"P": 1}, {"f": 1})
    f = fo_parse("P(x) & A y P(x)", sig)
    t = fo_parse("f(y) = y", sig).left
    assert term_vars(t) == {"y"}
    assert not substitutable(f, "x", t)
    assert substitutable(f, "x", TVar("z"))
    assert substitute(f, "x", TVar("z")) == fo_parse("P(z) & A y P(z)", sig)
    assert substitute(fo_parse("A x P(x)", sig), "x", TVar("z")) == fo_parse("A x P(x)", sig)
    assert substitute_term(t, "y", TVar("x")) == App("f", (TVar("x"),))


def test_derived_connectives_desugar():
    sig = Signature.of({"P": 1})
    f = fo_desugar(fo_parse("E x (P(x) | P(x)) -> P(x) <-> P(x)", sig))
    kinds = set()

    def walk(g):
        kinds.add(type(g).__name__)
        for attr in ("sub", "left", "right", "body"):
            if hasattr(g, attr) and not isinstance(getattr(g, attr), (str, TVar, App)):
                walk(getattr(g, attr))
    walk(f)
    assert kinds <= {"Not", "And", "Forall", "Pred"}


def test_varying_domain_breaks_persistence():
    # an object entering d below the top escapes the universal at the top
    P = Poset.from_pairs(["u", "v", "top"], [("u", "top"), ("v", "top")])
    M = FOModel.build(P, ["a"], preds={"P": (1, {"u": [("a",)]})}, d={"v": ["a"]})
    assert validate_fomodel(M)
    ext = fo_extension(M, {}, M.parse("A x P(x)"))
    assert ext >> P.index("top") & 1 and not ext >> P.index("v") & 1
    assert not is_regular_open(P, ext)


@given(st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_tarskian_agrees_with_classical(seed):
    rng = random.Random(seed)
    M = random_tarskian(rng)
    assert validate_fomodel(M) and M.has_total_functions()
    f = random_fo_formula(rng, M.signature, ["x", "y"], 3)
    g = {"x": rng.randrange(2), "y": rng.randrange(2)}
    assert fo_eval(M, 0, g, f) == tarski_eval(M, g, f)


seeds = st.integers(0, 10**6)


def model_and_formula(seed, **cfg):
    rng = random.Random(seed)
    M = random_fomodel(rng, FOGenConfig(**cfg))
    g = {v: rng.randrange(len(M.domain)) for v in ("x", "y", "z")}
    return rng, M, g


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_random_models_valid_and_extensions_regular_open(seed):
    rng, M, g = model_and_formula(seed)
    assert validate_fomodel(M)
    f = random_fo_formula(rng, M.signature, ["x", "y", "z"], 3)
    P = M.poset
    e = fo_extension(M, g, f)
    assert is_regular_open(P, e)
    assert fo_extension(M, g, Not(f)) == ro_neg(P, e)
    meet = P.full
    for a in range(len(M.domain)):
        meet &= fo_extension(M, {**g, "x": a}, f)
    assert fo_extension(M, g, Forall("x", f)) == meet


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_derived_clauses(seed):
    rng, M, g = model_and_formula(seed)
    P = M.poset
    sig = M.signature
    phi = random_fo_formula(rng, sig, ["x", "y"], 2)
    psi = random_fo_formula(rng, sig, ["x", "y"], 2)
    A, B = fo_extension(M, g, phi), fo_extension(M, g, psi)
    down = P.down
    for s in range(P.size):
        below = list(members(down[s]))
        assert fo_eval(M, s, g, Or(phi, psi)) == all(
            any((A | B) >> u & 1 for u in members(down[t])) for t in below)
        assert fo_eval(M, s, g, Implies(phi, psi)) == all(
            not A >> t & 1 or B >> t & 1 for t in below)
        assert fo_eval(M, s, g, Iff(phi, psi)) == all(
            bool(A >> t & 1) == bool(B >> t & 1) for t in below)
        exts = [fo_extension(M, {**g, "x": a}, phi) for a in range(len(M.domain))]
        assert fo_eval(M, s, g, Exists("x", phi)) == all(
            any(e >> u & 1 for e in exts for u in members(down[t])) for t in below)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_substitution_lemma(seed):
    rng, M, g = model_and_formula(seed)
    P = M.poset
    sig = M.signature
    phi = random_fo_formula(rng, sig, ["x", "y"], 2)
    t = random_term(rng, ["x", "y", "z"], sig.functions, 2)
    if not substitutable(phi, "x", t):
        return
    lhs = fo_extension(M, g, substitute(phi, "x", t))
    exts = [fo_extension(M, {**g, "x": a}, phi) for a in range(len(M.domain))]
    for s in range(P.size):
        rhs = all(all(exts[a] >> sp & 1 for a in members(_den_mask(M, sp, g, t)))
                  for sp in members(P.down[s]))
        assert bool(lhs >> s & 1) == rhs


def _den_mask(M, s, g, t):
    return sum(1 << M.guise(n) for n in denote(M, s, g, t))


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_term_substitution_lemma(seed):
    rng, M, g = model_and_formula(seed)
    fns = M.signature.functions
    u = random_term(rng, ["x", "y"], fns, 2)
    t = random_term(rng, ["x", "y", "z"], fns, 2)
    for s in range(M.size):
        dt = denote(M, s, g, t)
        # the class of t, and monotone growth under refinement
        for sp in members(M.poset.down[s]):
            assert dt <= denote(M, sp, g, t)
        for a in dt:
            assert denote(M, s, g, substitute_term(u, "x", t)) == denote(M, s, {**g, "x": a}, u)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_generated_submodel_elementary_equivalence(seed):
    rng, M, g = model_and_formula(seed, max_guises=3)
    s = rng.randrange(M.size)
    sub, t = generated_submodel(M, s)
    assert validate_fomodel(sub)
    for _ in range(15):
        f = random_fo_formula(rng, M.signature, ["x", "y"], 3)
        assert fo_eval(M, s, g, f) == fo_eval(sub, t, g, f)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_soundness_spot_checks(seed):
    rng, M, g = model_and_formula(seed)
    sig = M.signature
    phi = random_fo_formula(rng, sig, ["x", "y"], 2)
    psi = random_fo_formula(rng, sig, ["x", "y"], 2)
    full = M.poset.full
    axioms = [Implies(phi, Implies(psi, phi)), Or(phi, Not(phi)),
              Implies(Not(Not(phi)), phi), Eq(TVar("x"), TVar("x"))]
    t = random_term(rng, ["y", "z"], sig.functions, 1)
    if substitutable(phi, "x", t):
        axioms.append(Implies(Forall("x", phi), substitute(phi, "x", t)))
    if "x" not in fo_free_vars(phi):
        axioms.append(Implies(Forall("x", Implies(phi, psi)), Implies(phi, Forall("x", psi))))
    for ax in axioms:
        assert fo_extension(M, g, ax) == full, fo_show(ax)


def world_frame(names, domain, d, rel, eq=None):
    P = Poset.discrete(len(names), names)
    return FOModel.build(P, domain, eq=eq, d=d, relations={"0": rel})


def test_fact_world_two_worlds_constant_domain():
    M = world_frame(["w", "v"], ["a", "b"], {"w": ["a", "b"], "v": ["a", "b"]},
                    [(x, y) for x in "wv" for y in "wv"])
    r = fact_world_check(M)
    assert (r.fact_valid, r.world_valid) == oracle_fact_world(M)
    assert r.holds


def test_fact_world_three_worlds_varying_domain():
    M = world_frame(["u", "v", "w"], ["a", "b", "c"],
                    {"u": ["a"], "v": ["a", "b"], "w": ["b", "c"]},
                    [("u", "v"), ("u", "w"), ("v", "w"), ("w", "w")])
    r = fact_world_check(M)
    assert (r.fact_valid, r.world_valid) == oracle_fact_world(M)
    assert r.holds


def test_fact_world_both_valid_example():
    M = world_frame(["u", "v"], ["a", "b", "c"], {"u": ["a", "c"], "v": ["b", "c"]},
                    [("u", "u"), ("u", "v"), ("v", "v"), ("v", "u")])
    r = fact_world_check(M)
    assert r.fact_valid and r.world_valid and r.holds


def test_fact_world_errors():
    P = Poset.chain(2)
    with pytest.raises(InputError):
        fact_world_check(FOModel.build(P, ["a"], d={}, relations={"0": []}))
    M = world_frame(["w"], ["a"], {"w": ["a"]}, [])
    with pytest.raises(InputError):
        fact_world_check(FOModel.build(M.poset, ["a"]))
    big = world_frame([f"w{i}" for i in range(4)], ["a", "b", "c"],
                      {f"w{i}": ["a", "b", "c"] for i in range(4)}, [])
    with pytest.raises(CapExceeded):
        fact_world_check(big, cap=100)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_fact_world_random_against_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    names = [f"w{i}" for i in range(n)]
    dom = ["a", "b", "c"][:rng.randint(1, 3)]
    eq = {w: [[a for a in dom if rng.random() < 0.5]] for w in names}
    d = {}
    for w in names:
        chosen = {a for a in dom if rng.random() < 0.6}
        cls_ = set(eq[w][0])
        d[w] = sorted(chosen | cls_ if chosen & cls_ else chosen)  # d is a union of classes
    rel = [(x, y) for x in names for y in names if rng.random() < 0.5]
    M = world_frame(names, dom, d, rel, eq)
    r = fact_world_check(M)
    assert (r.fact_valid, r.world_valid) == oracle_fact_world(M)
    assert r.holds


def test_fact_and_world_formula_shapes():
    assert isinstance(fact_formula(), Implies)
    assert isinstance(world_formula("a").body.body, Box)
