import pytest

from lamsn.enumeration import EnumSpec, enumerate_terms
from lamsn.reduction import (
    ALL,
    BETA,
    PERM,
    Redex,
    Rule,
    StaleRedex,
    contract,
    decompose,
    find_redexes,
    head_parts,
    one_step_reducts,
    one_step_reducts_tagged,
    rewrite_at_root,
    rules_from_name,
)
from lamsn.terms import Var, alpha_eq, alpha_key, free_vars, parse_term as P, size

OMEGA = P(r"(\x.(x x) \x.(x x))")


def test_decompose():
    d = decompose(P("(x a b)"))
    assert d.head == Var("x") and list(d.args) == [Var("a"), Var("b")]
    assert decompose(P(r"\x.x")) is None
    d = decompose(P(r"(\x.x y)"))
    assert d.head == P(r"\x.x") and list(d.args) == [Var("y")]
    assert d.recompose() == P(r"(\x.x y)")


def test_find_redexes():
    assert find_redexes(OMEGA, BETA) == [Redex(Rule.BETA, ())]
    assert find_redexes(P(r"(\y.\x.(x y) z)"), {Rule.DELTA}) == [Redex(Rule.DELTA, ())]
    assert find_redexes(Var("x"), ALL) == []


def test_rule_instances():
    assert rewrite_at_root(P(r"(\x.(x x) y)"), Rule.BETA) == P("(y y)")
    assert alpha_eq(rewrite_at_root(P(r"(\x.x a b)"), Rule.GAMMA), P(r"(\x.(x b) a)"))
    assert alpha_eq(rewrite_at_root(P(r"(a (\x.b c))"), Rule.ASSOC), P(r"(\x.(a b) c)"))
    assert alpha_eq(rewrite_at_root(P(r"(\y.\x.(x y) z)"), Rule.DELTA), P(r"\x.(\y.(x y) z)"))


def test_side_conditions_by_renaming():
    # gamma with the binder free in the moved argument
    out = rewrite_at_root(P(r"(\x.x a x)"), Rule.GAMMA)
    assert alpha_eq(out, P(r"(\z.(z x) a)"))
    # assoc with the binder free in the function part
    out = rewrite_at_root(P(r"(x (\x.x c))"), Rule.ASSOC)
    assert alpha_eq(out, P(r"(\z.(x z) c)"))
    # delta with the inner binder free in the argument
    out = rewrite_at_root(P(r"(\y.\x.(x y) x)"), Rule.DELTA)
    assert alpha_eq(out, P(r"\z.(\y.(z y) x)"))


def test_one_step_reducts():
    assert one_step_reducts(OMEGA, BETA) == [OMEGA]
    assert one_step_reducts(P(r"\x.x"), ALL) == []
    got = {alpha_key(u) for u in one_step_reducts(P(r"(\y.\x.(x y) z)"), ALL)}
    assert got == {alpha_key(P(r"\x.(x z)")), alpha_key(P(r"\x.(\y.(x y) z)"))}


def test_tagged_reducts_rules():
    tagged = one_step_reducts_tagged(P(r"(\y.\x.(x y) z)"), ALL)
    assert {r for r, _ in tagged} == {Rule.BETA, Rule.DELTA}


def test_stale_redex():
    with pytest.raises(StaleRedex):
        contract(P("(x y)"), Redex(Rule.BETA, ()))


def test_rules_from_name():
    assert rules_from_name("beta") == BETA
    assert rules_from_name("perm") == PERM
    assert rules_from_name("all") == ALL
    assert rules_from_name("beta,gamma") == frozenset({Rule.BETA, Rule.GAMMA})
    with pytest.raises(ValueError):
        rules_from_name("eta")


def test_head_parts_examples():
    assert alpha_eq(head_parts(P(r"(\x.\y.x a b)")).d, P(r"(\y.(\x.x a) b)"))
    hp = head_parts(P(r"(\x.x a b)"))
    assert alpha_eq(hp.c, P(r"(\x.(x b) a)"))
    assert hp.arg == Var("a")
    assert hp.b == P("(a b)")
    assert alpha_eq(head_parts(P(r"(x (\y.y z))")).a[1], P(r"(\y.(x y) z)"))


def test_head_parts_are_one_step_reducts():
    for t in enumerate_terms(EnumSpec(7)):
        if decompose(t) is None:
            continue
        keys = {alpha_key(u) for u in one_step_reducts(t, ALL)}
        hp = head_parts(t)
        for u in [hp.b, hp.c, hp.d, *hp.a.values()]:
            if u is not None:
                assert alpha_key(u) in keys, t


def test_reducts_keep_free_variables_bounded():
    for t in enumerate_terms(EnumSpec(6)):
        for u in one_step_reducts(t, PERM):
            # permutations only move subterms around
            assert free_vars(u) == free_vars(t)
            assert size(u) == size(t)
