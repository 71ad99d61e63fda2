"""Desk-scale probes of the memory bounds: each returns a JSON-ready report
whose verdict is derived from its per-instance results."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arena import Arena, Player, random_arena
from .constructions import (
    SQUARE,
    SQUARE_LOOP,
    SQUARE_TO_TRIANGLE,
    TRIANGLE,
    TRIANGLE_LOOP,
    TRIANGLE_TO_SQUARE,
    AmLayout,
    build_Am,
    build_fig2,
    is_isolated_element,
    is_isolated_in_window,
    synth_Mn,
)
from .equilibrium import check_equilibrium, play, play_counter
from .memory import ChromaticStrategy, CounterStrategy, PositionalStrategy, enumerate_skeletons
from .payoffs import PhiPayoff, PsiPayoff, eval_phi, lasso_optimum, solve_phi_product
from .product import project_equilibrium, restrict_by_chromatic


@dataclass
class ProbeReport:
    probe: str
    params: dict
    trials: list[dict] = field(default_factory=list)
    seed: int | None = None
    elapsed_ms: float = 0.0

    @property
    def verdict(self) -> str:
        return "PASS" if all(t["ok"] for t in self.trials) else "FAIL"

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def failures(self) -> list[dict]:
        return [t for t in self.trials if not t["ok"]]

    def to_dict(self) -> dict:
        return {
            "probe": self.probe,
            "params": self.params,
            "trials": self.trials,
            "verdict": self.verdict,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


class _Timer:
    def __init__(self, report: ProbeReport):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed_ms = (time.perf_counter() - self.t0) * 1000
        return False


# ---------------------------------------------------------------- running sum, two nodes


def min_counter_strategy(s: int) -> CounterStrategy:
    """At the triangle: loop (+1) while the sum is below s + 2, else return to the square."""
    t = s + 2
    return CounterStrategy(
        Player.MIN,
        1,
        0,
        lambda m, e: 0,
        lambda m, lv, v: TRIANGLE_LOOP if lv[t] < 0 else TRIANGLE_TO_SQUARE,
        (t,),
        name=f"min-counter-{s}",
    )


def max_counter_strategy() -> CounterStrategy:
    """At the square: loop (-1) while the sum is positive, else go to the triangle."""
    return CounterStrategy(
        Player.MAX,
        1,
        0,
        lambda m, e: 0,
        lambda m, lv, v: SQUARE_LOOP if lv[0] > 0 else SQUARE_TO_TRIANGLE,
        (0,),
        name="max-counter",
    )


def _chromatic_strategies(a: Arena, owner: Player, max_states: int):
    """Every skeleton strategy of ``owner`` with at most ``max_states`` states."""
    nodes = a.owned_by(owner)
    for sk in enumerate_skeletons(a.alphabet, max_states):
        slots = [(m, v) for m in sk.states for v in nodes]
        choices = [[e.id for e in a.out_edges[v]] for _, v in slots]

        def rec(i, acc):
            if i == len(slots):
                yield ChromaticStrategy(owner, sk, dict(acc))
                return
            for eid in choices[i]:
                acc[slots[i]] = eid
                yield from rec(i + 1, acc)
            del acc[slots[i]]

        yield from rec(0, {})


def _square_visits_hit_zero(a: Arena, lasso) -> bool:
    """Along two passes of the play, each stay at the square contains a zero sum."""
    edges = lasso.prefix + lasso.cycle * 2
    s, at_square, seen_zero = 0, True, True  # the play starts at the square with sum 0
    for eid in edges:
        e = a.edge[eid]
        if e.src == SQUARE and e.dst == TRIANGLE:
            if not seen_zero:
                return False
            at_square = False
        s += e.color
        if e.dst == SQUARE and not at_square:
            at_square, seen_zero = True, s == 0
        elif at_square and s == 0:
            seen_zero = True
    return True


def probe_fig2_lower(s_max: int = 2, min_states: int = 2) -> ProbeReport:
    """Every Max skeleton strategy with <= s states loses to the Min counter
    strategy with threshold s + 2; the Max counter strategy beats every Min
    skeleton strategy with <= ``min_states`` states."""
    a = build_fig2()
    rep = ProbeReport("fig2", {"s_max": s_max, "min_states": min_states})
    with _Timer(rep):
        for s in range(1, s_max + 1):
            tau = min_counter_strategy(s)
            count, bad = 0, []
            for sigma in _chromatic_strategies(a, Player.MAX, s):
                count += 1
                out = play_counter(a, SQUARE, sigma, tau)
                if out.value != 0:
                    bad.append({"skeleton": [list(r) for r in sigma.skeleton.delta], "moves": sorted(sigma.moves.items())})
            rep.trials.append({"check": "min-counter-beats-finite-max", "s": s, "strategies": count,
                               "counterexamples": bad[:5], "ok": not bad})
        sigma = max_counter_strategy()
        count, bad, argument = 0, [], True
        for tau in _chromatic_strategies(a, Player.MIN, min_states):
            count += 1
            out = play_counter(a, SQUARE, sigma, tau)
            argument = argument and _square_visits_hit_zero(a, out.lasso)
            if out.value != 1:
                bad.append({"skeleton": [list(r) for r in tau.skeleton.delta], "moves": sorted(tau.moves.items())})
        rep.trials.append({"check": "max-counter-beats-finite-min", "states": min_states, "strategies": count,
                           "counterexamples": bad[:5], "ok": not bad})
        rep.trials.append({"check": "square-visits-reach-zero", "ok": argument})
    return rep


# ---------------------------------------------------------------- cut arena


def probe_Am_lower(m: int, T: Iterable[int] | None = None, exhaustive: bool = True) -> ProbeReport:
    """Skeletons with fewer than m states merge two entry words 0 1^i, and
    (optionally) no such skeleton strategy wins from every left node."""
    if m < 2:
        raise ValueError("m must be >= 2")
    T = frozenset(T) if T is not None else frozenset({2 * m + 1})
    k = next((x for x in sorted(T) if x > m and is_isolated_in_window(T, x, m)), None)
    if k is None:
        raise ValueError(f"T has no element above {m} isolated in its window")
    rep = ProbeReport("am", {"m": m, "T": sorted(T), "k": k, "window": "(k-m, k+m)"})
    with _Timer(rep):
        words = [(0,) + (1,) * i for i in range(1, m + 1)]
        count, missing = 0, []
        for sk in enumerate_skeletons((0, 1), m - 1):
            count += 1
            seen: dict[int, int] = {}
            hit = None
            for i, w in enumerate(words, 1):
                st = sk.run(w)
                if st in seen:
                    hit = (seen[st], i)
                    break
                seen[st] = i
            if hit is None:
                missing.append([list(r) for r in sk.delta])
        rep.trials.append({"check": "pigeonhole", "skeletons": count, "without_collision": missing, "ok": not missing})
        if exhaustive:
            lay = AmLayout(m, k)
            a = build_Am(m, k, lay)
            tau = PositionalStrategy(Player.MIN, {})
            winners = []
            total = 0
            for sigma in _chromatic_strategies(a, Player.MAX, m - 1):
                total += 1
                if all(_phi_of_play(a, play(a, v, sigma, tau), T) == 1 for v in lay.left):
                    winners.append(sorted(sigma.moves.items()))
            rep.trials.append({"check": "no-small-strategy-wins-everywhere", "strategies": total,
                               "winners": winners[:5], "ok": not winners})
    return rep


def _phi_of_play(a: Arena, lasso, T) -> int:
    pre = tuple(a.edge[e].color for e in lasso.prefix)
    cyc = tuple(a.edge[e].color for e in lasso.cycle)
    return eval_phi(pre, cyc, T)


# ---------------------------------------------------------------- running sum, one-player


def _lifted(s, skeleton) -> ChromaticStrategy:
    if isinstance(s, ChromaticStrategy):
        return s
    return ChromaticStrategy(s.owner, skeleton, {(m, v): e for m in skeleton.states for v, e in s.moves.items()})


def probe_Mn_sufficiency(n: int, trials: int, seed: int, reverify: bool = False, max_out: int = 3) -> ProbeReport:
    """One-player arenas with <= n nodes (both orientations) get uniform
    M_n skeleton equilibria from the one-player pipelines."""
    rep = ProbeReport("mn", {"n": n, "trials": trials, "reverify": reverify, "max_out": max_out}, seed=seed)
    sk = synth_Mn(n)
    oracle_payoff = PsiPayoff(bound=n)
    check_payoff = PsiPayoff()
    with _Timer(rep):
        for t in range(trials):
            for no_choice in (Player.MIN, Player.MAX):
                a = random_arena(n, (-1, 1), seed * 1_000_003 + 2 * t + (no_choice is Player.MAX), one_player=no_choice,
                                 max_out=max_out)
                opt = no_choice.opponent
                res = oracle_payoff.one_player_opt(a, opt)
                own = res.witness
                other = _lifted(PositionalStrategy(no_choice, {v: a.out_edges[v][0].id for v in a.owned_by(no_choice)}), sk)
                sigma, tau = (own, other) if opt is Player.MAX else (other, own)
                report = check_equilibrium(a, check_payoff, sigma, tau)
                row = {"trial": t, "optimizer": opt.value, "nodes": a.n_nodes, "edges": len(a.edges),
                       "verdict": report.verdict, "ok": report.ok}
                if not report.ok:
                    row["counterexample"] = report.counterexample
                if reverify and report.ok:
                    row["reverified"] = _reverify_lassos(a, check_payoff, sigma, tau, report)
                    row["ok"] = row["reverified"]
                rep.trials.append(row)
    return rep


def _reverify_lassos(a: Arena, payoff, sigma, tau, report) -> bool:
    """Best responses recomputed by enumerating simple lassos of the product."""
    for fixed in (tau, sigma):
        p = restrict_by_chromatic(a, fixed)
        side = fixed.owner.opponent
        extreme = 1 if side is Player.MAX else 0
        for row in report.starts:
            if row.value == extreme:
                continue  # no deviation can beat the best possible value
            best = lasso_optimum(p.arena, payoff, side, p.node(p.skeleton.init, row.start), stop_at=extreme)
            if best != row.value:
                return False
    return True


# ---------------------------------------------------------------- ones between zeros


def default_isolated(T: Iterable[int]) -> int:
    T = frozenset(T)
    for x in sorted(T):
        if is_isolated_element(T, x):
            return x
    raise ValueError("T has no isolated element")


def probe_Mk_equilibrium(
    T: Iterable[int],
    trials: int,
    seed: int,
    k: int | None = None,
    cap: int = 64,
    arenas: Sequence[Arena] | None = None,
    max_out: int = 3,
) -> ProbeReport:
    """Solve the 3-priority game on M_k x A, project, and check the pair
    against the original payoff on random two-player arenas."""
    T = frozenset(T)
    if k is None:
        k = default_isolated(T)
    n_max = min(k * k, cap)
    rep = ProbeReport("mk", {"T": sorted(T), "k": k, "isolated": is_isolated_element(T, k), "max_nodes": n_max,
                             "trials": trials if arenas is None else len(arenas), "max_out": max_out}, seed=seed)
    payoff = PhiPayoff(T)
    with _Timer(rep):
        if arenas is None:
            arenas = [random_arena(n_max, (0, 1), seed * 1_000_003 + t, max_out=max_out) for t in range(trials)]
        for t, a in enumerate(arenas):
            p, sol = solve_phi_product(a, k, T)
            sigma, tau = project_equilibrium(p, sol.max_strategy, sol.min_strategy)
            report = check_equilibrium(a, payoff, sigma, tau)
            row = {"trial": t, "nodes": a.n_nodes, "edges": len(a.edges), "verdict": report.verdict, "ok": report.ok}
            if not report.ok:
                row["counterexample"] = report.counterexample
            rep.trials.append(row)
    return rep


def mk_negative_control_arena() -> Arena:
    """Max chooses between cycles reading 0 1 and 0 1^6; the lower edge id
    leads to the short one."""
    edges = [(0, 1, 0), (1, 0, 1), (0, 2, 0)]
    chain = [2, 3, 4, 5, 6, 7]
    for a, b in zip(chain, chain[1:]):
        edges.append((a, b, 1))
    edges.append((7, 0, 1))
    return Arena.build([Player.MAX] * 8, edges, alphabet=(0, 1))
