"""Payoff functions on ultimately periodic color words and their
one-player optimum oracles."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .arena import Arena, Color, Lasso, Player, choice_free, color_word
from .constructions import synth_Mk, synth_Mn
from .memory import ChromaticStrategy, PositionalStrategy, default_strategy
from .parity import ParityGame, solve
from .product import ProductArena, build


class BadLetter(ValueError):
    pass


class NotOnePlayer(ValueError):
    pass


@dataclass
class OnePlayerResult:
    """Optimal value from every node for ``side`` plus a strategy attaining it."""

    side: Player
    values: dict[int, object]
    witness: PositionalStrategy | ChromaticStrategy | None
    exact: bool = True


# ---------------------------------------------------------------- evaluation


def eval_psi(prefix: Sequence[int], cycle: Sequence[int]) -> int:
    """1 iff the running sum tends to +infinity or returns to 0 infinitely often."""
    for c in (*prefix, *cycle):
        if c not in (-1, 1):
            raise BadLetter(f"psi expects weights -1/+1, got {c!r}")
    return psi_of_weights(prefix, cycle)


def psi_of_weights(prefix: Sequence[int], cycle: Sequence[int]) -> int:
    """Same condition for arbitrary integer weights."""
    d = sum(cycle)
    if d > 0:
        return 1
    if d < 0:
        return 0
    s = sum(prefix)
    for c in cycle:
        s += c
        if s == 0:
            return 1
    return 0


def eval_phi(prefix: Sequence[int], cycle: Sequence[int], T: Iterable[int]) -> int:
    """1 iff finitely many zeros, or some 0 1^t 0 with t in T occurs."""
    for c in (*prefix, *cycle):
        if c not in (0, 1):
            raise BadLetter(f"phi expects letters 0/1, got {c!r}")
    if all(c == 1 for c in cycle):
        return 1
    T = set(T)
    word = (*prefix, *cycle, *cycle)
    run = None  # ones since the last zero, None before the first zero
    for c in word:
        if c == 0:
            if run is not None and run in T:
                return 1
            run = 0
        elif run is not None:
            run += 1
    return 0


def eval_mean(cycle: Sequence, weight: Callable = int) -> Fraction:
    return Fraction(sum(weight(c) for c in cycle), len(cycle))


# ---------------------------------------------------------------- cycle tools


def _digraph(a: Arena, nodes: set[int], weight=None) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    g.add_nodes_from(nodes)
    for e in a.edges:
        if e.src in nodes and e.dst in nodes:
            g.add_edge(e.src, e.dst, key=e.id)
    return g


def cyclic_components(a: Arena, nodes: set[int]) -> list[set[int]]:
    """Strongly connected components (within ``nodes``) that contain a cycle."""
    g = _digraph(a, nodes)
    out = []
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1 or g.has_edge(next(iter(comp)), next(iter(comp))):
            out.append(set(comp))
    return out


def best_mean_cycle(a: Arena, comp: set[int], weight: Callable, maximize: bool = True):
    """Karp's algorithm on a strongly connected ``comp``: the best cycle mean
    and one simple cycle (edge ids, in order) attaining it."""
    sign = 1 if maximize else -1
    nodes = sorted(comp)
    edges = [e for e in a.edges if e.src in comp and e.dst in comp]
    w = {e.id: sign * weight(e.color) for e in edges}
    n = len(nodes)
    NEG = None
    D = [{v: NEG for v in nodes} for _ in range(n + 1)]
    D[0][nodes[0]] = 0
    for k in range(1, n + 1):
        prev, cur = D[k - 1], D[k]
        for e in edges:
            if prev[e.src] is not None:
                val = prev[e.src] + w[e.id]
                if cur[e.dst] is None or val > cur[e.dst]:
                    cur[e.dst] = val
    best = None
    for v in nodes:
        if D[n][v] is None:
            continue
        worst = None
        for k in range(n):
            if D[k][v] is not None:
                r = Fraction(D[n][v] - D[k][v], n - k)
                if worst is None or r < worst:
                    worst = r
        if worst is not None and (best is None or worst > best):
            best = worst
    # longest-path potentials for the reweighted graph; its optimal cycles are tight
    d = {v: None for v in nodes}
    d[nodes[0]] = Fraction(0)
    for _ in range(n):
        changed = False
        for e in edges:
            if d[e.src] is not None:
                val = d[e.src] + w[e.id] - best
                if d[e.dst] is None or val > d[e.dst]:
                    d[e.dst] = val
                    changed = True
        if not changed:
            break
    tight = nx.MultiDiGraph()
    for e in edges:
        if d[e.src] + w[e.id] - best == d[e.dst]:
            tight.add_edge(e.src, e.dst, key=e.id)
    cyc = nx.find_cycle(tight)
    return sign * best, [key for (_, _, key) in cyc]


def attract_to_cycles(a: Arena, groups: Sequence[Sequence[list[int]]], allowed: set[int]):
    """Positional routing towards cycles, group by group.

    Each group is a list of cycles (edge id lists).  Nodes on a cycle follow
    it; every other node of ``allowed`` that can reach a cycle of the group
    (through still unassigned nodes) takes a shortest path to it.  Earlier
    groups take precedence.  Returns ``(moves, group_of)``.
    """
    moves: dict[int, int] = {}
    group_of: dict[int, int] = {}
    preds: dict[int, list] = {v: [] for v in allowed}
    for e in a.edges:
        if e.src in allowed and e.dst in allowed:
            preds[e.dst].append(e)
    for gi, cycles in enumerate(groups):
        frontier = []
        for cyc in cycles:
            srcs = [a.edge[eid].src for eid in cyc]
            if any(s in moves for s in srcs):
                continue
            for eid, s in zip(cyc, srcs):
                moves[s] = eid
                group_of[s] = gi
                frontier.append(s)
        i = 0
        while i < len(frontier):
            x = frontier[i]
            i += 1
            for e in sorted(preds[x], key=lambda e: e.id):
                if e.src not in moves:
                    moves[e.src] = e.id
                    group_of[e.src] = gi
                    frontier.append(e.src)
    return moves, group_of


def extreme_path_weight(a: Arena, nodes: set[int], weight: Callable, maximize: bool) -> int:
    """Largest |weight| of a path inside ``nodes`` in the given direction; the
    subgraph must have no cycle of that sign."""
    sign = 1 if maximize else -1
    d = {v: 0 for v in nodes}
    edges = [e for e in a.edges if e.src in nodes and e.dst in nodes]
    for _ in range(len(nodes) + 1):
        changed = False
        for e in edges:
            val = sign * weight(e.color) + d[e.dst]
            if val > d[e.src]:
                d[e.src] = val
                changed = True
        if not changed:
            break
    return max(d.values(), default=0)


def _require_one_player(a: Arena, side: Player) -> None:
    if not choice_free(a, side.opponent):
        raise NotOnePlayer(f"{side.opponent.value} has choices; arena is not one-player for {side.value}")


def _merge_witness(a: Arena, side: Player, skeleton, outer: dict[int, int], product: ProductArena | None,
                   product_moves: Mapping[int, int] | None) -> ChromaticStrategy:
    moves = {}
    for m in skeleton.states:
        for v in a.owned_by(side):
            if v in outer:
                moves[(m, v)] = outer[v]
            elif product is not None and product.node(m, v) in product_moves:
                moves[(m, v)] = product.edge_origin[product_moves[product.node(m, v)]][1]
            else:
                moves[(m, v)] = a.out_edges[v][0].id
    return ChromaticStrategy(side, skeleton, moves)


# ---------------------------------------------------------------- payoffs


class Payoff:
    """Base class.  Values are ordered; Max maximizes, Min minimizes."""

    name = "payoff"
    exact = True

    def evaluate(self, prefix: Sequence[Color], cycle: Sequence[Color]):
        raise NotImplementedError

    def value(self, a: Arena, lasso: Lasso):
        return self.evaluate(*color_word(a, lasso))

    def one_player_opt(self, a: Arena, side: Player) -> OnePlayerResult:
        _require_one_player(a, side)
        return lasso_fallback(a, self, side)

    def descriptor(self) -> dict:
        return {"payoff": self.name}


@dataclass(eq=False)
class PsiPayoff(Payoff):
    """Max wins iff the running sum of +-1 weights diverges to +infinity or
    hits 0 infinitely often.

    ``bound`` fixes the skeleton M_bound used by the oracle's witnesses; by
    default it is the largest path weight (in the optimizer's direction) in
    the arena left after removing the nodes that reach a cycle of the
    optimizer's sign.  That never exceeds the node count and is already exact.
    """

    bound: int | None = None
    name = "psi"

    def evaluate(self, prefix, cycle):
        return eval_psi(prefix, cycle)

    def one_player_opt(self, a: Arena, side: Player) -> OnePlayerResult:
        _require_one_player(a, side)
        if side is Player.MAX:
            return _psi_max(a, self.bound)
        return _psi_min(a, self.bound)


def _psi_max(a: Arena, bound: int | None) -> OnePlayerResult:
    nodes = set(a.nodes)
    positive = []
    for comp in cyclic_components(a, nodes):
        mean, cyc = best_mean_cycle(a, comp, int, maximize=True)
        if mean > 0:
            positive.append(cyc)
    outer, _ = attract_to_cycles(a, [positive], nodes)
    rest = nodes - set(outer)
    B = bound if bound is not None else max(1, extreme_path_weight(a, rest, int, maximize=True))
    sk = synth_Mn(B)
    p = build(sk, a)
    zero = sk.init
    prio = {pe: (2 if p.node_origin[p.arena.edge[pe].src][0] == zero else 1) for pe in p.arena.edge}
    sol = solve(ParityGame(p.arena, prio, "even"))
    values = {}
    for v in a.nodes:
        if v in outer:
            values[v] = 1
        else:
            values[v] = 1 if sol.winner[p.node(zero, v)] is Player.MAX else 0
    witness = _merge_witness(a, Player.MAX, sk, outer, p, sol.max_strategy.moves)
    return OnePlayerResult(Player.MAX, values, witness)


def _psi_min(a: Arena, bound: int | None) -> OnePlayerResult:
    nodes = set(a.nodes)
    negative = []
    for comp in cyclic_components(a, nodes):
        mean, cyc = best_mean_cycle(a, comp, int, maximize=False)
        if mean < 0:
            negative.append(cyc)
    outer, _ = attract_to_cycles(a, [negative], nodes)
    rest = nodes - set(outer)
    B = bound if bound is not None else max(1, extreme_path_weight(a, rest, int, maximize=False))
    sk = synth_Mn(B)
    p = build(sk, a)
    zero = sk.init
    live = {x for x, (m, v) in p.node_origin.items() if v in rest}
    off_zero = {x for x in live if p.node_origin[x][0] != zero}
    good = []
    for comp in cyclic_components(p.arena, off_zero):
        mean, cyc = best_mean_cycle(p.arena, comp, int, maximize=False)
        if mean == 0:
            good.append(cyc)
    pmoves, _ = attract_to_cycles(p.arena, [good], live)
    values = {}
    for v in a.nodes:
        if v in outer:
            values[v] = 0
        else:
            values[v] = 0 if p.node(zero, v) in pmoves else 1
    witness = _merge_witness(a, Player.MIN, sk, outer, p, pmoves)
    return OnePlayerResult(Player.MIN, values, witness)


@dataclass(eq=False)
class PhiPayoff(Payoff):
    """Max wins iff finitely many zeros, or a block 0 1^t 0 with t in T occurs."""

    T: frozenset[int] = field(default_factory=frozenset)
    name = "phi"

    def __post_init__(self):
        self.T = frozenset(self.T)
        if not self.T or min(self.T) < 1:
            raise ValueError("T must be a nonempty set of positive integers")

    def evaluate(self, prefix, cycle):
        return eval_phi(prefix, cycle, self.T)

    def one_player_opt(self, a: Arena, side: Player) -> OnePlayerResult:
        _require_one_player(a, side)
        k = max(self.T)
        p, sol = solve_phi_product(a, k, self.T)
        init = p.skeleton.init
        values = {v: (1 if sol.winner[p.node(init, v)] is Player.MAX else 0) for v in a.nodes}
        witness = _merge_witness(a, side, p.skeleton, {}, p, sol.strategy(side).moves)
        return OnePlayerResult(side, values, witness)

    def descriptor(self):
        return {"payoff": "phi", "T": sorted(self.T)}


def phi_priorities(p: ProductArena) -> dict[int, int]:
    """3 on edges leaving the absorbing state F, else 2 for color 0 and 1 for color 1."""
    F = 1
    out = {}
    for e in p.arena.edges:
        if p.node_origin[e.src][0] == F:
            out[e.id] = 3
        else:
            out[e.id] = 2 if e.color == 0 else 1
    return out


def solve_phi_product(a: Arena, k: int, T: Iterable[int]):
    """Odd-wins 3-priority parity game on M_k x A; returns (product, solution)."""
    p = build(synth_Mk(k, T), a)
    return p, solve(ParityGame(p.arena, phi_priorities(p), "odd"))


@dataclass(eq=False)
class ParityPayoff(Payoff):
    """Colors are priorities (optionally through ``priority``)."""

    max_wins_on: str = "even"
    priority: Mapping | None = None
    name = "parity"

    def prio(self, c) -> int:
        return int(c) if self.priority is None else self.priority[c]

    def evaluate(self, prefix, cycle):
        top = max(self.prio(c) for c in cycle)
        good = 0 if self.max_wins_on == "even" else 1
        return 1 if top % 2 == good else 0

    def game(self, a: Arena) -> ParityGame:
        return ParityGame(a, {e.id: self.prio(e.color) for e in a.edges}, self.max_wins_on)

    def one_player_opt(self, a: Arena, side: Player) -> OnePlayerResult:
        _require_one_player(a, side)
        sol = solve(self.game(a))
        values = {v: (1 if w is Player.MAX else 0) for v, w in sol.winner.items()}
        return OnePlayerResult(side, values, sol.strategy(side))

    def descriptor(self):
        return {"payoff": "parity", "convention": self.max_wins_on}


@dataclass(eq=False)
class MeanPayoff(Payoff):
    """Average weight of the cycle; weights default to ``int(color)``."""

    weights: Mapping | None = None
    name = "mean"

    def weight(self, c) -> int:
        return int(c) if self.weights is None else self.weights[c]

    def evaluate(self, prefix, cycle):
        return eval_mean(cycle, self.weight)

    def one_player_opt(self, a: Arena, side: Player) -> OnePlayerResult:
        _require_one_player(a, side)
        maximize = side is Player.MAX
        found = []
        for comp in cyclic_components(a, set(a.nodes)):
            found.append(best_mean_cycle(a, comp, self.weight, maximize))
        found.sort(key=lambda mc: mc[0], reverse=maximize)
        groups, group_values = [], []
        for mean, cyc in found:
            if group_values and group_values[-1] == mean:
                groups[-1].append(cyc)
            else:
                groups.append([cyc])
                group_values.append(mean)
        moves, group_of = attract_to_cycles(a, groups, set(a.nodes))
        values = {v: group_values[group_of[v]] for v in a.nodes}
        witness = PositionalStrategy(side, {v: moves[v] for v in a.owned_by(side)})
        return OnePlayerResult(side, values, witness)


@dataclass(eq=False)
class LassoPayoff(Payoff):
    """User payoff given by a function of (prefix, cycle) color words.

    Its one-player oracle enumerates simple lassos, which is exact only when
    the optimum is attained by a positional play.
    """

    fn: Callable = None
    name = "custom"
    exact = False

    def evaluate(self, prefix, cycle):
        return self.fn(tuple(prefix), tuple(cycle))


# ---------------------------------------------------------------- brute force


def simple_lassos(a: Arena, start: int) -> Iterator[Lasso]:
    """All plays from ``start`` that stop at the first repeated node."""
    index = {start: 0}
    path: list[int] = []

    def rec(v):
        for e in a.out_edges[v]:
            j = index.get(e.dst)
            if j is not None:
                yield Lasso(start, tuple(path[:j]), tuple(path[j:]) + (e.id,))
            else:
                index[e.dst] = len(path) + 1
                path.append(e.id)
                yield from rec(e.dst)
                path.pop()
                del index[e.dst]

    yield from rec(start)


def lasso_optimum(a: Arena, payoff: Payoff, side: Player, start: int, stop_at=None):
    """Best value over simple lassos from ``start``; stops early once
    ``stop_at`` (a value nothing can beat) is reached."""
    best = None
    better = (lambda x, y: x > y) if side is Player.MAX else (lambda x, y: x < y)
    for l in simple_lassos(a, start):
        val = payoff.value(a, l)
        if best is None or better(val, best):
            best = val
            if stop_at is not None and best == stop_at:
                break
    return best


def lasso_fallback(a: Arena, payoff: Payoff, side: Player) -> OnePlayerResult:
    values = {v: lasso_optimum(a, payoff, side, v) for v in a.nodes}
    return OnePlayerResult(side, values, None, exact=False)


def mean_game_values(a: Arena, weight: Callable = int) -> dict[int, Fraction]:
    """Two-player mean-payoff values by value iteration.

    After ``4 n^3 W`` rounds the average is within ``1/(2 n^2)`` of the value,
    which is the unique fraction with denominator <= n in that window.
    """
    n = a.n_nodes
    W = max((abs(weight(e.color)) for e in a.edges), default=0) or 1
    rounds = 4 * n ** 3 * W
    v = [0] * n
    for _ in range(rounds):
        nv = []
        for x in a.nodes:
            opts = [weight(e.color) + v[e.dst] for e in a.out_edges[x]]
            nv.append(max(opts) if a.owners[x] is Player.MAX else min(opts))
        v = nv
    return {x: Fraction(v[x], rounds).limit_denominator(n) for x in a.nodes}


def payoff_from_descriptor(d: Mapping) -> Payoff:
    kind = d.get("payoff")
    if kind == "psi":
        return PsiPayoff(d.get("bound"))
    if kind == "phi":
        return PhiPayoff(frozenset(d["T"]))
    if kind == "parity":
        return ParityPayoff(d.get("convention", "even"))
    if kind == "mean":
        return MeanPayoff()
    raise ValueError(f"unknown payoff descriptor {d!r}")


def unique_strategy(a: Arena, player: Player) -> PositionalStrategy:
    return default_strategy(a, player)
