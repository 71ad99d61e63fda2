"""Plays, best responses and equilibrium verification."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .arena import Arena, Lasso, Player
from .memory import ChromaticStrategy, as_counter, default_strategy
from .payoffs import OnePlayerResult, Payoff, psi_of_weights
from .product import ProductArena, restrict_by_chromatic


class NonNumericAlphabet(ValueError):
    pass


def _memory(s):
    if isinstance(s, ChromaticStrategy):
        return s.skeleton
    return None


def play(a: Arena, v: int, sigma, tau) -> Lasso:
    """The unique play from ``v`` consistent with both strategies."""
    strat = {sigma.owner: sigma, tau.owner: tau}
    if len(strat) != 2:
        raise ValueError("need one strategy per player")
    sk = {p: _memory(s) for p, s in strat.items()}
    mem = {p: (0 if sk[p] is None else sk[p].init) for p in strat}
    seen: dict[tuple, int] = {}
    edges: list[int] = []
    x = v
    while True:
        conf = (x, mem[Player.MAX], mem[Player.MIN])
        if conf in seen:
            i = seen[conf]
            return Lasso(v, tuple(edges[:i]), tuple(edges[i:]))
        seen[conf] = len(edges)
        owner = a.owners[x]
        eid = strat[owner].move(x, mem[owner])
        e = a.edge[eid]
        if e.src != x:
            raise ValueError(f"strategy of {owner.value} plays edge {eid} away from node {x}")
        for p in strat:
            if sk[p] is not None:
                mem[p] = sk[p].step(mem[p], e.color)
        edges.append(eid)
        x = e.dst


@dataclass
class CounterOutcome:
    """Result of :func:`play_counter`.  ``lasso`` is a genuine lasso of the
    infinite play; ``drift`` is the weight of its cycle."""

    lasso: Lasso
    drift: int
    value: int
    exact_repeat: bool
    steps: int


def _weights(a: Arena, weights: Mapping | None) -> dict:
    out = {}
    for c in a.alphabet:
        try:
            out[c] = int(c) if weights is None else int(weights[c])
        except (KeyError, TypeError, ValueError):
            raise NonNumericAlphabet(f"no integer weight for color {c!r}") from None
    return out


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def play_counter(a: Arena, v: int, s1, s2, weights: Mapping | None = None, max_steps: int = 10 ** 6) -> CounterOutcome:
    """Evaluate the running-sum payoff on the play of two (counter) strategies.

    The simulation tracks (node, mode1, mode2, counter).  It stops when a
    configuration repeats exactly, or when (node, mode1, mode2) repeats with a
    nonzero drift while every counter value in between lies strictly on the
    far side of all thresholds in the drift direction: from then on every
    threshold test answers the same, so the segment repeats forever.
    """
    w = _weights(a, weights)
    c1, c2 = as_counter(s1), as_counter(s2)
    if c1.owner is c2.owner:
        raise ValueError("need one strategy per player")
    theta = sorted(set(c1.thresholds) | set(c2.thresholds))
    x, m1, m2, cnt = v, c1.initial, c2.initial, 0
    edges: list[int] = []
    counters: list[int] = []
    seen: dict[tuple, int] = {}
    last: dict[tuple, int] = {}
    for step in range(max_steps + 1):
        key = (x, m1, m2)
        conf = key + (cnt,)
        i = seen.get(conf)
        if i is None and key in last:
            j = last[key]
            d = cnt - counters[j]
            seg = counters[j:] + [cnt]
            if d != 0 and (not theta or (d < 0 and max(seg) < theta[0]) or (d > 0 and min(seg) > theta[-1])):
                i = j
        if i is not None:
            lasso = Lasso(v, tuple(edges[:i]), tuple(edges[i:]))
            pw = [w[a.edge[e].color] for e in lasso.prefix]
            cw = [w[a.edge[e].color] for e in lasso.cycle]
            return CounterOutcome(lasso, sum(cw), psi_of_weights(pw, cw), conf in seen, step)
        seen[conf] = step
        last[key] = step
        counters.append(cnt)
        s, mode = (c1, m1) if a.owners[x] is c1.owner else (c2, m2)
        levels = {t: _sign(cnt - t) for t in s.thresholds}
        eid = s.move(mode, levels, x)
        e = a.edge[eid]
        if e.src != x:
            raise ValueError(f"strategy {s.name or s.owner.value} plays edge {eid} away from node {x}")
        m1 = c1.update(m1, e)
        m2 = c2.update(m2, e)
        cnt += w[e.color]
        edges.append(eid)
        x = e.dst
    raise RuntimeError("play_counter exceeded max_steps")


def _restricted_opt(a: Arena, payoff: Payoff, fixed) -> tuple[ProductArena, OnePlayerResult]:
    p = restrict_by_chromatic(a, fixed)
    return p, payoff.one_player_opt(p.arena, fixed.owner.opponent)


def best_response_value(a: Arena, payoff: Payoff, fixed, v: int):
    """Best value the opponent of ``fixed.owner`` can force from ``v``."""
    p, res = _restricted_opt(a, payoff, fixed)
    return res.values[p.node(p.skeleton.init, v)]


def _deviation(p: ProductArena, res: OnePlayerResult, fixed_owner: Player, v: int) -> Lasso | None:
    """The optimizer's witness play from ``v``, read back in the base arena."""
    if res.witness is None:
        return None
    pa = p.arena
    x = p.node(p.skeleton.init, v)
    other = default_strategy(pa, fixed_owner)
    pl = play(pa, x, res.witness, other)
    back = lambda es: tuple(p.edge_origin[e][1] for e in es)
    return Lasso(v, back(pl.prefix), back(pl.cycle))


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


@dataclass
class StartResult:
    start: int
    play: Lasso
    value: object
    max_best: object
    min_best: object

    @property
    def ok(self) -> bool:
        return self.value == self.max_best == self.min_best

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "play": {"prefix": list(self.play.prefix), "cycle": list(self.play.cycle)},
            "value": _jsonable(self.value),
            "max_best_response": _jsonable(self.max_best),
            "min_best_response": _jsonable(self.min_best),
        }


@dataclass
class EquilibriumReport:
    verdict: str
    starts: list[StartResult] = field(default_factory=list)
    counterexample: dict | None = None
    exact: bool = True

    @property
    def ok(self) -> bool:
        return self.verdict == "yes"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "exact": self.exact,
            "starts": [r.to_dict() for r in self.starts],
            "counterexample": self.counterexample,
        }


def check_equilibrium(a: Arena, payoff: Payoff, sigma, tau, starts: Iterable[int] | None = None) -> EquilibriumReport:
    """Check that ``sigma`` (Max) and ``tau`` (Min) are optimal responses to
    each other from every start node (all nodes by default)."""
    if sigma.owner is not Player.MAX or tau.owner is not Player.MIN:
        raise ValueError("sigma must belong to Max and tau to Min")
    sigma.check(a)
    tau.check(a)
    starts = sorted(set(a.nodes if starts is None else starts))
    p_max, r_max = _restricted_opt(a, payoff, tau)  # Max deviates against tau
    p_min, r_min = _restricted_opt(a, payoff, sigma)
    report = EquilibriumReport("yes", exact=r_max.exact and r_min.exact)
    for v in starts:
        lasso = play(a, v, sigma, tau)
        val = payoff.value(a, lasso)
        mb = r_max.values[p_max.node(p_max.skeleton.init, v)]
        nb = r_min.values[p_min.node(p_min.skeleton.init, v)]
        row = StartResult(v, lasso, val, mb, nb)
        report.starts.append(row)
        if not row.ok and report.counterexample is None:
            report.verdict = "no"
            if mb != val:
                side, best, dev = "Max", mb, _deviation(p_max, r_max, Player.MIN, v)
            else:
                side, best, dev = "Min", nb, _deviation(p_min, r_min, Player.MAX, v)
            report.counterexample = {
                "start": v,
                "deviating_player": side,
                "play_value": _jsonable(val),
                "deviation_value": _jsonable(best),
                "deviation": None if dev is None else {"prefix": list(dev.prefix), "cycle": list(dev.cycle)},
            }
    return report
