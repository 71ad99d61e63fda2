"""Acceptance suite: nine end-to-end criteria at their full sizes and time limits.

Each test appends one PASS/FAIL line to the summary printed at the end of the
pytest run (and echoes it to stdout).  Run alone with
``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
"""
import random
import time

import pytest

from gamelift.arena import Player, random_arena
from gamelift.equilibrium import check_equilibrium, play
from gamelift.lifting import compute_g, lift_with_skeleton, parity_oracle, payoff_oracle, positional_lift
from gamelift.memory import MemorySkeleton, PositionalStrategy
from gamelift.parity import ParityGame, solve
from gamelift.payoffs import MeanPayoff, ParityPayoff, mean_game_values
from gamelift.probes import probe_Am_lower, probe_fig2_lower, probe_Mk_equilibrium, probe_Mn_sufficiency
from gamelift.product import check_trivial

from conftest import ACCEPTANCE_LINES
from oracles import parity_winners, positional_choices

SEED = 20240601


def record(number, title, ok, elapsed, limit, detail=""):
    ok = ok and elapsed < limit
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f} s, limit {limit:g} s){'  ' + detail if detail else ''}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_c1_parity_solver_vs_brute_force():
    t0 = time.perf_counter()
    bad = []
    for i in range(500):
        a = random_arena(6, (0, 1, 2, 3), SEED + i, max_out=3, max_edges=8)
        prio = {e.id: e.color for e in a.edges}
        conv = ("even", "odd")[i % 2]
        if solve(ParityGame(a, prio, conv)).winner != parity_winners(a, prio, conv):
            bad.append(i)
    el = time.perf_counter() - t0
    assert record(1, "parity solver matches brute force on 500 games", not bad, el, 60, f"mismatches={bad[:5]}")


def test_c2_positional_lift_differential():
    t0 = time.perf_counter()
    bad = []
    for i in range(300):
        a = random_arena(6, (0, 1, 2, 3), SEED + 1000 + i, max_out=3)
        conv = ("even", "odd")[i % 2]
        payoff = ParityPayoff(conv)
        res = positional_lift(a, payoff, parity_oracle(payoff))
        win = solve(payoff.game(a)).winner
        vals = {v: payoff.value(a, play(a, v, res.sigma, res.tau)) for v in a.nodes}
        if not res.report.ok or any(vals[v] != (win[v] is Player.MAX) for v in a.nodes):
            bad.append(("parity", i))

        w = random_arena(6, (-2, -1, 0, 1, 2), SEED + 2000 + i, max_out=3)
        mean = MeanPayoff()
        res = positional_lift(w, mean, payoff_oracle(mean))
        direct = mean_game_values(w)
        if not res.report.ok or any(mean.value(w, play(w, v, res.sigma, res.tau)) != direct[v] for v in w.nodes):
            bad.append(("mean", i))
    el = time.perf_counter() - t0
    assert record(2, "positional lift from one-player oracles on 300 arenas x {parity, mean}", not bad, el, 300,
                  f"failures={bad[:5]}")


def test_c3_skeleton_lift():
    t0 = time.perf_counter()
    rng = random.Random(SEED + 3)
    bad, calls = [], 0
    for i in range(100):
        a = random_arena(4, (0, 1, 2, 3), SEED + 3000 + i, max_out=3)
        m = MemorySkeleton(a.alphabet, tuple(tuple(rng.randrange(2) for _ in a.alphabet) for _ in range(2)))
        limit = 2 * a.n_nodes * m.n_states - 1
        inner = parity_oracle()

        def watching(arena, w):
            nonlocal calls
            calls += 1
            assert arena.n_nodes <= limit
            assert check_trivial(w.skeleton, arena, w) is None
            return inner(arena, w)

        out = lift_with_skeleton(a, m, ParityPayoff(), watching)
        if not out.report.ok:
            bad.append(i)
    el = time.perf_counter() - t0
    assert record(3, "skeleton lift with 2-state skeletons on 100 arenas", not bad, el, 300,
                  f"oracle calls={calls} failures={bad[:5]}")


def test_c4_compute_g_constant():
    t0 = time.perf_counter()
    ok = all(compute_g([k] * (2 * k * n), n) == k for k in range(1, 6) for n in range(1, 101))
    el = time.perf_counter() - t0
    assert record(4, "g equals k for constant f = k, k in 1..5, n in 1..100", ok, el, 1)


def test_c5_running_sum_memory_suffices():
    t0 = time.perf_counter()
    failed = []
    for n in range(1, 7):
        rep = probe_Mn_sufficiency(n, 200, SEED + n, reverify=True)
        if not rep.passed or len(rep.trials) != 400:
            failed.append(n)
    el = time.perf_counter() - t0
    assert record(5, "running-sum memory suffices on one-player arenas, n = 1..6, 200 trials each", not failed, el, 600,
                  f"failed n={failed}")


def test_c6_two_node_counterexample():
    t0 = time.perf_counter()
    rep = probe_fig2_lower(2)
    el = time.perf_counter() - t0
    per_s = {t["s"] for t in rep.trials if t["check"] == "min-counter-beats-finite-max" and t["ok"]}
    assert record(6, "two-node counterexample for Max skeletons with s <= 2 states", rep.passed and per_s == {1, 2},
                  el, 600)


def test_c7_cut_arena_lower_bound():
    t0 = time.perf_counter()
    reps = [probe_Am_lower(m) for m in (2, 3)]
    el = time.perf_counter() - t0
    ok = all(r.passed and not r.trials[0]["without_collision"] for r in reps)
    assert record(7, "cut arena forces m states, m in {2, 3}", ok, el, 120,
                  "skeletons=" + ",".join(str(r.trials[0]["skeletons"]) for r in reps))


def test_c8_ones_counter_equilibria():
    t0 = time.perf_counter()
    rep = probe_Mk_equilibrium({5}, 100, SEED + 8)
    el = time.perf_counter() - t0
    ok = rep.passed and len(rep.trials) == 100 and all(t["nodes"] <= 25 for t in rep.trials)
    sizes = max(t["nodes"] for t in rep.trials)
    assert record(8, "ones-counter memory gives equilibria for T = {5}, 100 arenas", ok, el, 600,
                  f"largest arena={sizes} nodes")


def all_equilibria(a, payoff):
    out = []
    for sm in positional_choices(a, Player.MAX):
        s = PositionalStrategy(Player.MAX, sm)
        for tm in positional_choices(a, Player.MIN):
            t = PositionalStrategy(Player.MIN, tm)
            if check_equilibrium(a, payoff, s, t).ok:
                out.append((s, t))
    return out


def test_c9_cartesian_product_law():
    t0 = time.perf_counter()
    payoff = ParityPayoff()
    found, bad, i = 0, [], 0
    while found < 100 and i < 5000:
        a = random_arena(4, (0, 1, 2, 3), SEED + 9000 + i, max_out=2, exact_nodes=True)
        i += 1
        eqs = all_equilibria(a, payoff)
        if len(eqs) < 2:
            continue
        found += 1
        for s1, _ in eqs:
            for _, t2 in eqs:
                if not check_equilibrium(a, payoff, s1, t2).ok:
                    bad.append(i - 1)
    el = time.perf_counter() - t0
    assert record(9, "mixed equilibrium pairs are equilibria on 100 arenas", found == 100 and not bad, el, 300,
                  f"arenas scanned={i} failures={bad[:5]}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
