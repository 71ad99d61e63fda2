import json

import pytest

from gamelift.arena import Arena, Player
from gamelift.constructions import SQUARE, SQUARE_TO_TRIANGLE, TRIANGLE_LOOP, build_fig2, synth_Mn
from gamelift.equilibrium import check_equilibrium, play_counter
from gamelift.memory import MemorySkeleton, PositionalStrategy, enumerate_skeletons
from gamelift.payoffs import PsiPayoff, eval_psi
from gamelift.probes import (
    ProbeReport,
    default_isolated,
    max_counter_strategy,
    min_counter_strategy,
    mk_negative_control_arena,
    probe_Am_lower,
    probe_fig2_lower,
    probe_Mk_equilibrium,
    probe_Mn_sufficiency,
)

from oracles import canonical_dfa_count, optimum_over_lassos, product_graph


def strip_time(rep):
    d = rep.to_dict()
    d.pop("elapsed_ms")
    return d


def test_verdict_follows_trials():
    rep = ProbeReport("x", {}, [{"ok": True}, {"ok": True}])
    assert rep.verdict == "PASS"
    rep.trials.append({"ok": False})
    assert rep.verdict == "FAIL" and len(rep.failures()) == 1
    assert set(rep.to_dict()) == {"probe", "params", "trials", "verdict", "seed", "elapsed_ms"}


# ---------------------------------------------------------------- two-node counterexample


def test_fig2_probe_passes():
    rep = probe_fig2_lower(2)
    assert rep.passed
    counts = [t["strategies"] for t in rep.trials if t["check"] == "min-counter-beats-finite-max"]
    # one Max node: 2 moves per state, over every canonical skeleton
    one = canonical_dfa_count(2, 1)
    assert counts == [2 * one, 2 * one + 4 * (canonical_dfa_count(2, 2) - one)]
    json.dumps(rep.to_dict())


def test_min_counter_beats_positional_max():
    a = build_fig2()
    for s in (1, 2, 3):
        for move in (0, 1):
            sigma = PositionalStrategy(Player.MAX, {SQUARE: move})
            assert play_counter(a, SQUARE, sigma, min_counter_strategy(s)).value == 0


def test_max_counter_beats_positional_min():
    a = build_fig2()
    for move in (2, 3):
        tau = PositionalStrategy(Player.MIN, {1: move})
        assert play_counter(a, SQUARE, max_counter_strategy(), tau).value == 1


def test_min_counter_threshold_matters():
    # Max going to the triangle at once reaches sum 1; a threshold of 1 sends Min straight back to zero
    a = build_fig2()
    low = min_counter_strategy(-1)
    to_triangle = PositionalStrategy(Player.MAX, {SQUARE: SQUARE_TO_TRIANGLE})
    assert play_counter(a, SQUARE, to_triangle, low).value == 1


def test_min_always_loop_is_beaten():
    a = build_fig2()
    tau = PositionalStrategy(Player.MIN, {1: TRIANGLE_LOOP})
    out = play_counter(a, SQUARE, max_counter_strategy(), tau)
    assert out.value == 1 and out.drift > 0


# ---------------------------------------------------------------- cut arena


@pytest.mark.parametrize("m", [2, 3])
def test_Am_probe_passes(m):
    rep = probe_Am_lower(m)
    assert rep.passed
    assert rep.params["k"] == 2 * m + 1
    pig = rep.trials[0]
    assert pig["skeletons"] == sum(1 for _ in enumerate_skeletons((0, 1), m - 1))


def test_counting_skeleton_separates_entries():
    m = 4
    # state j >= 1 means j - 1 ones after the first zero, capped at m
    rows = [(1, 0)] + [(j, min(j + 1, m + 1)) for j in range(1, m + 2)]
    sk = MemorySkeleton((0, 1), tuple(rows))
    states = [sk.run((0,) + (1,) * i) for i in range(1, m + 1)]
    assert len(set(states)) == m


def test_Am_rejects_bad_T():
    with pytest.raises(ValueError):
        probe_Am_lower(2, T={3, 4})
    with pytest.raises(ValueError):
        probe_Am_lower(1)


# ---------------------------------------------------------------- bounded running sum


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_Mn_probe_passes(n):
    rep = probe_Mn_sufficiency(n, 15, seed=11, reverify=True)
    assert rep.passed
    assert len(rep.trials) == 30
    assert {t["optimizer"] for t in rep.trials} == {"Max", "Min"}
    assert all(t["nodes"] <= n for t in rep.trials)


def test_Mn_probe_is_deterministic():
    assert strip_time(probe_Mn_sufficiency(3, 10, seed=4)) == strip_time(probe_Mn_sufficiency(3, 10, seed=4))


def test_good_cycle_for_min():
    # 1 <-> 2 is a zero cycle; entered from 0 the sum stays positive, from 2 it stays negative
    a = Arena.build([Player.MIN] * 3, [(0, 1, 1), (1, 0, -1), (1, 2, 1), (2, 1, -1)], alphabet=(-1, 1))
    res = PsiPayoff().one_player_opt(a, Player.MIN)
    m = synth_Mn(3)
    prod, at = product_graph(m.delta, m.alphabet, m.init, a)
    expected = {v: optimum_over_lassos(prod, at(v), eval_psi, Player.MIN) for v in a.nodes}
    assert res.values == expected == {0: 0, 1: 1, 2: 0}
    sigma = PositionalStrategy(Player.MAX, {})
    assert check_equilibrium(a, PsiPayoff(), sigma, res.witness).ok


# ---------------------------------------------------------------- ones between zeros


def test_Mk_probe_passes_small():
    rep = probe_Mk_equilibrium({5}, 12, seed=2)
    assert rep.passed
    assert rep.params["k"] == 5 and rep.params["isolated"]
    assert all(t["nodes"] <= 25 for t in rep.trials)


def test_Mk_single_node_arenas():
    arenas = [Arena.build([p], [(0, 0, c)], alphabet=(0, 1)) for p in Player for c in (0, 1)]
    assert probe_Mk_equilibrium({5}, 0, seed=0, arenas=arenas).passed


def test_Mk_probe_is_deterministic():
    assert strip_time(probe_Mk_equilibrium({5}, 5, seed=9)) == strip_time(probe_Mk_equilibrium({5}, 5, seed=9))


def test_Mk_negative_control_fails():
    T = {5, 6}
    assert default_isolated({5}) == 5
    with pytest.raises(ValueError):
        default_isolated(T)
    rep = probe_Mk_equilibrium(T, 0, seed=0, k=5, arenas=[mk_negative_control_arena()])
    assert rep.verdict == "FAIL"
    assert not rep.params["isolated"]
    assert rep.failures()[0]["counterexample"]["deviating_player"] == "Max"
