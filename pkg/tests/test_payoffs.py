from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from gamelift.arena import Arena, Player, random_arena
from gamelift.constructions import synth_Mk, synth_Mn
from gamelift.payoffs import (
    BadLetter,
    LassoPayoff,
    MeanPayoff,
    NotOnePlayer,
    ParityPayoff,
    PhiPayoff,
    PsiPayoff,
    eval_phi,
    eval_psi,
    mean_game_values,
    payoff_from_descriptor,
    simple_lassos,
)
from gamelift.product import restrict_by_chromatic

from conftest import arenas
from oracles import lasso_words, mean_minimax, optimum_over_lassos, phi_by_scan, product_graph, psi_by_simulation

pm = st.sampled_from([-1, 1])
bits = st.sampled_from([0, 1])


def test_psi_examples():
    assert eval_psi((), (1,)) == 1
    assert eval_psi((-1,), (1, -1)) == 1
    assert eval_psi((1,), (1, -1)) == 0
    assert eval_psi((), (-1,)) == 0
    with pytest.raises(BadLetter):
        eval_psi((), (0,))


def test_psi_zero_only_in_prefix_is_loss():
    assert eval_psi((1, -1, 1), (1, -1)) == 0


def test_phi_examples():
    assert eval_phi((), (1,), {3}) == 1
    assert eval_phi((), (0, 1, 1), {2}) == 1
    assert eval_phi((), (0,), {2}) == 0
    assert eval_phi((0, 1, 1, 1), (0,), {3}) == 1
    assert eval_phi((1, 1), (0, 1), {2}) == 0
    with pytest.raises(BadLetter):
        eval_phi((), (2,), {1})


def test_phi_needs_positive_T():
    with pytest.raises(ValueError):
        PhiPayoff(frozenset())
    with pytest.raises(ValueError):
        PhiPayoff(frozenset({0}))


def test_mean_example():
    assert MeanPayoff().evaluate((), (1, -1)) == 0
    assert MeanPayoff().evaluate((5,), (2, 1)) == Fraction(3, 2)


@given(st.lists(pm, max_size=6), st.lists(pm, min_size=1, max_size=6))
def test_psi_matches_simulation(p, c):
    assert eval_psi(p, c) == psi_by_simulation(p, c)


@given(st.lists(bits, max_size=8), st.lists(bits, min_size=1, max_size=8), st.sets(st.integers(1, 6), min_size=1))
def test_phi_matches_scan(p, c, T):
    assert eval_phi(p, c, T) == phi_by_scan(p, c, T)


@given(st.lists(pm, max_size=6), st.lists(pm, min_size=1, max_size=6))
def test_psi_positive_cycle_wins(p, c):
    assume(sum(c) > 0)
    assert eval_psi(p, c) == 1


@given(st.lists(bits, max_size=6), st.lists(bits, min_size=1, max_size=6),
       st.sets(st.integers(1, 5), min_size=1), st.sets(st.integers(1, 5)))
def test_phi_monotone_in_T(p, c, T, extra):
    assert eval_phi(p, c, T) <= eval_phi(p, c, T | extra)


def rotate(p, c, k):
    for _ in range(k):
        p, c = p + c[:1], c[1:] + c[:1]
    return p, c


@given(st.lists(st.integers(-1, 3), max_size=5), st.lists(st.integers(-1, 3), min_size=1, max_size=5),
       st.integers(0, 6), st.integers(1, 3))
def test_rotation_and_unroll_invariance(p, c, k, times):
    p, c = tuple(p), tuple(c)
    cases = [
        (PsiPayoff(), lambda x: 1 if x > 0 else -1),
        (PhiPayoff(frozenset({1, 2})), lambda x: 1 if x > 0 else 0),
        (ParityPayoff("even"), lambda x: x + 1),
        (ParityPayoff("odd"), lambda x: x + 1),
        (MeanPayoff(), lambda x: x),
    ]
    for payoff, f in cases:
        pp, cc = tuple(map(f, p)), tuple(map(f, c))
        base = payoff.evaluate(pp, cc)
        assert payoff.evaluate(*rotate(pp, cc, k)) == base
        assert payoff.evaluate(pp, cc * times) == base


def one_player(n, alphabet, side, seed, max_out=3):
    return random_arena(n, alphabet, seed, one_player=side.opponent, max_out=max_out)


def test_psi_oracle_examples():
    up = Arena.build([Player.MAX], [(0, 0, 1)])
    down = Arena.build([Player.MAX], [(0, 0, -1)])
    assert PsiPayoff().one_player_opt(up, Player.MAX).values == {0: 1}
    assert PsiPayoff().one_player_opt(down, Player.MAX).values == {0: 0}


def test_phi_oracle_examples():
    ones = Arena.build([Player.MAX], [(0, 0, 1)])
    zeros = Arena.build([Player.MAX], [(0, 0, 0)])
    assert PhiPayoff(frozenset({1})).one_player_opt(ones, Player.MAX).values == {0: 1}
    assert PhiPayoff(frozenset({1})).one_player_opt(zeros, Player.MAX).values == {0: 0}


def test_mean_oracle_example():
    a = Arena.build([Player.MAX], [(0, 0, 1), (0, 0, -1)])
    assert MeanPayoff().one_player_opt(a, Player.MAX).values == {0: 1}
    b = Arena.build([Player.MIN], [(0, 0, 1), (0, 0, -1)])
    assert MeanPayoff().one_player_opt(b, Player.MIN).values == {0: -1}


def test_not_one_player():
    a = Arena.build([Player.MAX, Player.MIN], [(0, 1, 1), (0, 0, 1), (1, 0, -1), (1, 1, 1)])
    for payoff in (PsiPayoff(), PhiPayoff(frozenset({1})), ParityPayoff(), MeanPayoff()):
        with pytest.raises(NotOnePlayer):
            payoff.one_player_opt(a, Player.MAX)


def witness_respects_values(a, payoff, side, res):
    """Every simple lasso of the arena restricted by the witness does at
    least as well as the reported value (from the witness's start states)."""
    p = restrict_by_chromatic(a, res.witness)
    for v in a.nodes:
        for l in simple_lassos(p.arena, p.node(p.skeleton.init, v)):
            val = payoff.value(p.arena, l)
            assert (val >= res.values[v]) if side is Player.MAX else (val <= res.values[v])


@pytest.mark.parametrize("side", [Player.MAX, Player.MIN])
@pytest.mark.parametrize("seed", range(40))
def test_psi_oracle_matches_product_lassos(side, seed):
    a = one_player(5, (-1, 1), side, seed)
    res = PsiPayoff().one_player_opt(a, side)
    m = synth_Mn(a.n_nodes)
    prod, at = product_graph(m.delta, m.alphabet, m.init, a)
    for v in a.nodes:
        assert res.values[v] == optimum_over_lassos(prod, at(v), eval_psi, side)
    witness_respects_values(a, PsiPayoff(), side, res)


@pytest.mark.parametrize("side", [Player.MAX, Player.MIN])
@pytest.mark.parametrize("seed", range(40))
def test_phi_oracle_matches_product_lassos(side, seed):
    T = frozenset({2})
    a = one_player(4, (0, 1), side, seed)
    res = PhiPayoff(T).one_player_opt(a, side)
    sk = synth_Mk(2, T)
    prod, at = product_graph(sk.delta, sk.alphabet, sk.init, a)
    for v in a.nodes:
        assert res.values[v] == optimum_over_lassos(prod, at(v), lambda p, c: eval_phi(p, c, T), side)
    witness_respects_values(a, PhiPayoff(T), side, res)


@pytest.mark.parametrize("side", [Player.MAX, Player.MIN])
@pytest.mark.parametrize("seed", range(40))
def test_mean_oracle_matches_lassos(side, seed):
    a = one_player(5, (-2, -1, 0, 1, 3), side, seed)
    res = MeanPayoff().one_player_opt(a, side)
    for v in a.nodes:
        assert res.values[v] == optimum_over_lassos(a, v, lambda p, c: Fraction(sum(c), len(c)), side)
    witness_respects_values(a, MeanPayoff(), side, res)


@pytest.mark.parametrize("side", [Player.MAX, Player.MIN])
@pytest.mark.parametrize("seed", range(30))
def test_parity_oracle_matches_lassos(side, seed):
    a = one_player(5, (0, 1, 2, 3), side, seed)
    payoff = ParityPayoff("odd")
    res = payoff.one_player_opt(a, side)
    for v in a.nodes:
        assert res.values[v] == optimum_over_lassos(a, v, payoff.evaluate, side)
    witness_respects_values(a, payoff, side, res)


@given(arenas(max_nodes=5, alphabet=(-1, 0, 1, 2), max_out=2, max_edges=9))
@settings(max_examples=60, deadline=None)
def test_mean_value_iteration_matches_minimax(a):
    assert mean_game_values(a) == mean_minimax(a)


def test_lasso_fallback_is_flagged():
    payoff = LassoPayoff(lambda p, c: max(c))
    a = Arena.build([Player.MAX], [(0, 0, 1), (0, 0, 4)])
    res = payoff.one_player_opt(a, Player.MAX)
    assert res.values == {0: 4} and not res.exact and res.witness is None


def test_simple_lassos_match_oracle():
    a = random_arena(5, (0, 1), 3)
    for v in a.nodes:
        mine = sorted(tuple(map(tuple, (tuple(a.edge[e].color for e in l.prefix), tuple(a.edge[e].color for e in l.cycle))))
                      for l in simple_lassos(a, v))
        assert mine == sorted(lasso_words(a, v))


def test_descriptors():
    assert isinstance(payoff_from_descriptor({"payoff": "psi"}), PsiPayoff)
    assert payoff_from_descriptor({"payoff": "phi", "T": [5]}).T == {5}
    assert payoff_from_descriptor({"payoff": "parity", "convention": "odd"}).max_wins_on == "odd"
    assert isinstance(payoff_from_descriptor({"payoff": "mean"}), MeanPayoff)
    with pytest.raises(ValueError):
        payoff_from_descriptor({"payoff": "discounted"})
