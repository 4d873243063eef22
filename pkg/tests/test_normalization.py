import pytest

from lamsn.normalization import (
    SN,
    Exhausted,
    FuelExhausted,
    NotSN,
    NotStronglyNormalizing,
    certify,
    decide_sn,
    eta,
    eta_sigma,
    explore,
    graph_to_dot,
    graph_to_json,
    size_sigma,
)
from lamsn.reduction import ALL, BETA
from lamsn.terms import alpha_eq, parse_term as P

OMEGA = P(r"(\x.(x x) \x.(x x))")


def test_explore_examples():
    g = explore(P(r"\x.x"), ALL, 10)
    assert (g.n_nodes, len(g.edges), g.complete) == (1, 0, True)
    g = explore(OMEGA, BETA, 10)
    assert g.n_nodes == 1 and [(s, d) for s, _, d in g.edges] == [(0, 0)] and g.complete
    g = explore(P(r"(\x.x y)"), BETA, 10)
    assert (g.n_nodes, len(g.edges), g.complete) == (2, 1, True)


def test_explore_truncates_at_fuel():
    # (\x.(x x x) \x.(x x x)) grows without bound
    g = explore(P(r"(\x.(x x x) \x.(x x x))"), BETA, 5)
    assert g.n_nodes == 5 and not g.complete


def test_decide_sn_examples():
    v = decide_sn(OMEGA, BETA)
    assert isinstance(v, NotSN)
    assert alpha_eq(v.cycle_witness[0], OMEGA) and alpha_eq(v.cycle_witness[-1], OMEGA)
    v = decide_sn(P(r"(\x.(x x) \y.y)"), BETA)
    assert isinstance(v, SN) and v.eta == 2
    v = decide_sn(P("x"), ALL)
    assert isinstance(v, SN) and v.eta == 0


def test_cycle_witness_is_a_reduction_path():
    from lamsn.reduction import one_step_reducts
    from lamsn.terms import alpha_key

    v = decide_sn(P(r"(y (\x.(x x) \x.(x x)))"), ALL)
    assert isinstance(v, NotSN)
    w = v.cycle_witness
    for a, b in zip(w, w[1:]):
        assert alpha_key(b) in {alpha_key(u) for u in one_step_reducts(a, ALL)}
    assert alpha_key(w[v.cycle_start]) == alpha_key(w[-1])


def test_growing_term_exhausts():
    v = decide_sn(P(r"(\x.(x x x) \x.(x x x))"), BETA, 200)
    assert isinstance(v, Exhausted)
    with pytest.raises(FuelExhausted):
        certify(P(r"(\x.(x x x) \x.(x x x))"), BETA, 200)
    with pytest.raises(NotStronglyNormalizing):
        certify(OMEGA, BETA)


def test_eta_examples():
    assert eta(P(r"\x.x")) == 0
    assert eta(P(r"(\x.x y)"), BETA) == 1
    assert eta(P(r"(\x.(x x) \y.y)"), BETA) == 2


def test_sigma_measures():
    assert size_sigma({"x": P("(y z)")}, P("(x x)")) == 6
    assert eta_sigma({"x": P(r"(\z.z w)")}, P("(x x)")) == 2
    assert size_sigma({"x": P("y")}, P("z")) == 0
    assert eta_sigma({"x": P("y")}, P("z")) == 0


def test_permutations_lengthen_reductions():
    # gamma and beta both apply here
    t = P(r"(\x.x a b)")
    assert eta(t, ALL) >= eta(t, BETA)


def test_graph_exports():
    g = explore(P(r"(\x.x y)"), BETA)
    js = graph_to_json(g)
    assert js["root"] == 0 and js["complete"] is True
    assert js["edges"] == [{"from": 0, "rule": "beta", "to": 1}]
    dot = graph_to_dot(g)
    assert dot.startswith("digraph") and 'n0 -> n1 [label="beta"]' in dot


def test_fuel_must_be_positive():
    with pytest.raises(ValueError):
        decide_sn(P("x"), ALL, 0)
