"""Parity games with edge priorities, solved by Zielonka's recursive algorithm.

A play is won by Max iff the largest priority seen infinitely often has the
parity given by ``max_wins_on``.  Node priorities can be encoded by stamping
each node's priority on its out-edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping

from .arena import Arena, Lasso, NotAPath, Player, check_path
from .memory import PositionalStrategy

Parity = Literal["even", "odd"]
MAX_PRIORITY = 64


@dataclass(frozen=True)
class ParityGame:
    arena: Arena
    priority: Mapping[int, int]
    max_wins_on: Parity = "even"

    def __post_init__(self):
        for e in self.arena.edges:
            p = self.priority.get(e.id)
            if p is None or not 0 <= p <= MAX_PRIORITY:
                raise ValueError(f"edge {e.id} needs a priority in [0, {MAX_PRIORITY}]")
        if self.max_wins_on not in ("even", "odd"):
            raise ValueError("max_wins_on must be 'even' or 'odd'")

    def winner_of(self, top_priority: int) -> Player:
        good = 0 if self.max_wins_on == "even" else 1
        return Player.MAX if top_priority % 2 == good else Player.MIN


@dataclass(frozen=True)
class ParitySolution:
    winner: dict[int, Player]
    max_strategy: PositionalStrategy
    min_strategy: PositionalStrategy

    def region(self, player: Player) -> set[int]:
        return {v for v, w in self.winner.items() if w is player}

    def strategy(self, player: Player) -> PositionalStrategy:
        return self.max_strategy if player is Player.MAX else self.min_strategy


def evaluate_parity(g: ParityGame, lasso: Lasso) -> Player:
    check_path(g.arena, lasso.prefix + lasso.cycle, lasso.start)
    if g.arena.edge[lasso.cycle[0]].src != g.arena.edge[lasso.cycle[-1]].dst:
        raise NotAPath("lasso cycle is not closed")
    return g.winner_of(max(g.priority[e] for e in lasso.cycle))


class _Graph:
    """Subdivided game graph: node ``v`` of the arena keeps its id, edge ``e``
    becomes a middle node carrying the edge's priority."""

    def __init__(self, g: ParityGame):
        a = g.arena
        n = a.n_nodes
        self.n_base = n
        self.mid_edge: list[int] = []
        # player 0 wants even, player 1 wants odd
        max_side = 0 if g.max_wins_on == "even" else 1
        self.owner: list[int] = [max_side if o is Player.MAX else 1 - max_side for o in a.owners]
        self.prio: list[int] = [0] * n
        self.succ: list[list[int]] = [[] for _ in range(n)]
        for e in a.edges:
            x = n + len(self.mid_edge)
            self.mid_edge.append(e.id)
            self.owner.append(0)
            self.prio.append(g.priority[e.id])
            self.succ.append([e.dst])
            self.succ[e.src].append(x)
        self.pred: list[list[int]] = [[] for _ in self.succ]
        for x, ys in enumerate(self.succ):
            for y in ys:
                self.pred[y].append(x)
        self.max_side = max_side

    def attractor(self, region: set[int], target: set[int], player: int):
        attr = set(target)
        strat: dict[int, int] = {}
        count = {}
        queue = list(target)
        while queue:
            y = queue.pop()
            for x in self.pred[y]:
                if x not in region or x in attr:
                    continue
                if self.owner[x] == player:
                    attr.add(x)
                    strat[x] = y
                    queue.append(x)
                else:
                    if x not in count:
                        count[x] = sum(1 for z in self.succ[x] if z in region)
                    count[x] -= 1
                    if count[x] == 0:
                        attr.add(x)
                        queue.append(x)
        return attr, strat

    def solve(self, region: set[int]):
        """Winning regions ``(W0, W1)`` and a strategy map for each player's
        own nodes inside their region."""
        win = (set(), set())
        strat: dict[int, int] = {}
        while region:
            p = max(self.prio[x] for x in region)
            i = p % 2
            top = {x for x in region if self.prio[x] == p}
            attr, astrat = self.attractor(region, top, i)
            sub_win, sub_strat = self.solve(region - attr)
            if not sub_win[1 - i]:
                strat.update(sub_strat)
                strat.update(astrat)
                for x in top:
                    if self.owner[x] == i:
                        strat[x] = next(y for y in self.succ[x] if y in region)
                win[i].update(region)
                return win, strat
            battr, bstrat = self.attractor(region, sub_win[1 - i], 1 - i)
            for x in sub_win[1 - i]:
                if self.owner[x] == 1 - i and x in sub_strat:
                    strat[x] = sub_strat[x]
            strat.update(bstrat)
            win[1 - i].update(battr)
            region = region - battr
        return win, strat


def solve(g: ParityGame) -> ParitySolution:
    graph = _Graph(g)
    a = g.arena
    win, strat = graph.solve(set(range(len(graph.succ))))
    max_side = graph.max_side
    winner = {}
    moves = {Player.MAX: {}, Player.MIN: {}}
    for v in a.nodes:
        side = 0 if v in win[0] else 1
        w = Player.MAX if side == max_side else Player.MIN
        winner[v] = w
        owner = a.owners[v]
        if owner is w:
            moves[owner][v] = graph.mid_edge[strat[v] - graph.n_base]
        else:
            moves[owner][v] = a.out_edges[v][0].id
    return ParitySolution(
        winner,
        PositionalStrategy(Player.MAX, moves[Player.MAX]),
        PositionalStrategy(Player.MIN, moves[Player.MIN]),
    )
