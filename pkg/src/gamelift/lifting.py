"""Building two-player positional (or memory-skeleton) equilibria from a
one-player oracle, by splitting a node's out-edges and gluing the two
halves into a one-player bridge arena."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .arena import Arena, Edge, Player, arena_to_dict, choice_free
from .equilibrium import EquilibriumReport, check_equilibrium
from .memory import ChromaticStrategy, CounterStrategy, MemorySkeleton, PositionalStrategy, default_strategy, restrict
from .parity import solve
from .payoffs import ParityPayoff, Payoff
from .product import TrivialWitness, build, check_trivial, degenerate, project_equilibrium

Oracle = Callable[[Arena, "TrivialWitness | None"], "tuple[PositionalStrategy, PositionalStrategy]"]


class OracleFailure(Exception):
    """The one-player oracle returned something that is not an equilibrium."""

    def __init__(self, arena: Arena, reason: str):
        super().__init__(reason)
        self.arena = arena
        self.reason = reason

    def to_dict(self) -> dict:
        return {"error": "OracleFailure", "reason": self.reason, "arena": arena_to_dict(self.arena)}


class LiftVerificationError(Exception):
    def __init__(self, report: EquilibriumReport):
        super().__init__("lifted pair is not an equilibrium")
        self.report = report


# ---------------------------------------------------------------- bridge


@dataclass(frozen=True)
class Bridge:
    """Two copies of the node set glued at ``w``.

    Left copies keep their node and edge ids; the right copy of node
    ``v != w`` is ``n + rank(v)`` and its edges are shifted by ``stride``.
    """

    arena: Arena
    w: int
    left: dict[int, int]
    right: dict[int, int]
    proto: tuple[int, ...]
    edge_origin: dict[int, tuple[int, int]]  # bridge edge -> (part 1 or 2, base edge)

    def part_of_move(self, eid: int) -> int:
        return self.edge_origin[eid][0]


def build_bridge(a1: Arena, a2: Arena, w: int) -> Bridge:
    n = a1.n_nodes
    if a2.n_nodes != n or not 0 <= w < n:
        raise ValueError("both parts need the same node set containing w")
    left = {v: v for v in range(n)}
    right = {}
    proto = list(range(n))
    for v in range(n):
        if v == w:
            right[v] = w
        else:
            right[v] = len(proto)
            proto.append(v)
    stride = max((e.id for e in (*a1.edges, *a2.edges)), default=-1) + 1
    edges = []
    origin = {}
    for e in a1.edges:
        edges.append(Edge(e.id, left[e.src], left[e.dst], e.color))
        origin[e.id] = (1, e.id)
    for e in a2.edges:
        bid = stride + e.id
        edges.append(Edge(bid, right[e.src], right[e.dst], e.color))
        origin[bid] = (2, e.id)
    owners = tuple(a1.owners[v] for v in proto)
    arena = Arena(owners, tuple(edges), a1.alphabet)
    return Bridge(arena, w, left, right, tuple(proto), origin)


def build_switch_strategy(s1: PositionalStrategy, s2: PositionalStrategy, w: int, E1, E2, initial: int = 1) -> CounterStrategy:
    """Play ``s1`` or ``s2`` according to a mode that flips whenever the
    play leaves ``w`` through an edge outside the current mode's part."""
    if s1.owner is not s2.owner:
        raise ValueError("both strategies must belong to the same player")
    parts = (frozenset(E1), frozenset(E2))
    strats = (s1, s2)

    def update(mode: int, e: Edge) -> int:
        if e.src == w and e.id not in parts[mode]:
            return 1 - mode
        return mode

    def move(mode: int, levels, v: int) -> int:
        return strats[mode].moves[v]

    return CounterStrategy(s1.owner, 2, initial - 1, update, move, (), name=f"switch{initial}{3 - initial}")


# ---------------------------------------------------------------- trace


@dataclass
class SplitRecord:
    side: Player
    node: int
    e1: tuple[int, ...]
    e2: tuple[int, ...]
    chosen: int
    children: tuple[int, int]
    bridge_nodes: int

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "node": self.node,
            "E1": list(self.e1),
            "E2": list(self.e2),
            "chosen": self.chosen,
            "children": list(self.children),
            "bridge_nodes": self.bridge_nodes,
        }


@dataclass
class SubResult:
    id: int
    sigma: PositionalStrategy
    tau: PositionalStrategy
    n_edges: int
    kind: str  # "oracle" or "split"
    max_split: SplitRecord | None = None
    min_split: SplitRecord | None = None

    def to_dict(self) -> dict:
        d = {"id": self.id, "kind": self.kind, "n_edges": self.n_edges}
        if self.max_split:
            d["max_split"] = self.max_split.to_dict()
        if self.min_split:
            d["min_split"] = self.min_split.to_dict()
        return d


@dataclass
class LiftResult:
    sigma: PositionalStrategy
    tau: PositionalStrategy
    root: int
    nodes: list[SubResult]
    oracle_calls: int = 0
    memo_hits: int = 0
    max_oracle_nodes: int = 0
    report: EquilibriumReport | None = None

    def trace_dict(self) -> dict:
        return {
            "root": self.root,
            "subarenas": [r.to_dict() for r in self.nodes],
            "oracle_calls": self.oracle_calls,
            "memo_hits": self.memo_hits,
            "max_oracle_nodes": self.max_oracle_nodes,
        }


# ---------------------------------------------------------------- engine


def _lowest_choice_node(a: Arena, side: Player) -> int | None:
    for v in a.owned_by(side):
        if len(a.out_edges[v]) >= 2:
            return v
    return None


def split(a: Arena, w: int) -> tuple[Arena, Arena, tuple[int, ...], tuple[int, ...]]:
    """Singleton (lowest edge id) versus the rest of ``w``'s out-edges."""
    out = [e.id for e in a.out_edges[w]]
    if len(out) < 2:
        raise ValueError(f"node {w} has no choice to split")
    e1, e2 = (out[0],), tuple(out[1:])
    drop1, drop2 = set(e2), set(e1)
    a1 = a.with_edges(e.id for e in a.edges if e.id not in drop1)
    a2 = a.with_edges(e.id for e in a.edges if e.id not in drop2)
    return a1, a2, e1, e2


class _Engine:
    def __init__(self, payoff: Payoff, oracle: Oracle, witness: TrivialWitness | None, n_nodes: int, verify_oracle: bool):
        self.payoff = payoff
        self.oracle = oracle
        self.witness = witness
        self.limit = 2 * n_nodes - 1
        self.verify_oracle = verify_oracle
        self.memo: dict[frozenset, SubResult] = {}
        self.oracle_memo: dict[tuple, tuple] = {}
        self.nodes: list[SubResult] = []
        self.calls = 0
        self.hits = 0
        self.max_nodes = 0

    def starts(self, w: TrivialWitness | None, a: Arena):
        return list(a.nodes) if w is None else w.starts()

    def call(self, a: Arena, w: TrivialWitness | None):
        assert a.n_nodes <= self.limit, f"oracle arena has {a.n_nodes} > {self.limit} nodes"
        assert choice_free(a, Player.MIN) or choice_free(a, Player.MAX), "oracle arena is not one-player"
        if w is not None:
            assert check_trivial(w.skeleton, a, w) is None, "oracle arena is not M-trivial"
        key = (a.key(), None if w is None else w.f)
        if key in self.oracle_memo:
            self.hits += 1
            return self.oracle_memo[key]
        self.calls += 1
        self.max_nodes = max(self.max_nodes, a.n_nodes)
        sigma, tau = self.oracle(a, w)
        try:
            sigma.check(a)
            tau.check(a)
        except ValueError as exc:
            raise OracleFailure(a, f"invalid strategy: {exc}") from None
        if self.verify_oracle:
            rep = check_equilibrium(a, self.payoff, sigma, tau, self.starts(w, a))
            if not rep.ok:
                raise OracleFailure(a, "oracle output is not an equilibrium of its arena")
        self.oracle_memo[key] = (sigma, tau)
        return sigma, tau

    def solve(self, a: Arena) -> SubResult:
        key = frozenset(e.id for e in a.edges)
        hit = self.memo.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        if choice_free(a, Player.MIN) or choice_free(a, Player.MAX):
            sigma, tau = self.call(a, self.witness)
            res = SubResult(len(self.nodes), sigma, tau, len(a.edges), "oracle")
        else:
            sigma, rec_a = self.part(a, Player.MAX)
            tau, rec_b = self.part(a, Player.MIN)
            res = SubResult(len(self.nodes), sigma, tau, len(a.edges), "split", rec_a, rec_b)
        self.nodes.append(res)
        self.memo[key] = res
        return res

    def part(self, a: Arena, side: Player) -> tuple[PositionalStrategy, SplitRecord]:
        """Positional strategy of ``side`` for ``a`` from the two halves of a
        split at ``side``'s lowest node with a choice."""
        w = _lowest_choice_node(a, side)
        a1, a2, e1, e2 = split(a, w)
        r1, r2 = self.solve(a1), self.solve(a2)
        if side is Player.MAX:
            own1, own2, opp1, opp2 = r1.sigma, r2.sigma, r1.tau, r2.tau
        else:
            own1, own2, opp1, opp2 = r1.tau, r2.tau, r1.sigma, r2.sigma
        br = build_bridge(restrict(a1, opp1), restrict(a2, opp2), w)
        bw = None
        if self.witness is not None:
            bw = TrivialWitness(self.witness.skeleton, tuple(self.witness.f[v] for v in br.proto))
        bs, bt = self.call(br.arena, bw)
        own_b = bs if side is Player.MAX else bt
        chosen = br.part_of_move(own_b.moves[br.w])
        rec = SplitRecord(side, w, e1, e2, chosen, (r1.id, r2.id), br.arena.n_nodes)
        return (own1 if chosen == 1 else own2), rec


def positional_lift(
    a: Arena,
    payoff: Payoff,
    oracle: Oracle,
    witness: TrivialWitness | None = None,
    verify: bool = True,
    verify_oracle: bool = True,
) -> LiftResult:
    """Positional equilibrium of ``a`` using only one-player oracle calls.

    With a labeling ``witness`` the pair is an equilibrium from the nodes
    labeled with the skeleton's initial state, otherwise from every node.
    """
    if witness is not None and check_trivial(witness.skeleton, a, witness) is not None:
        raise ValueError("witness labeling does not commute with the skeleton")
    eng = _Engine(payoff, oracle, witness, a.n_nodes, verify_oracle)
    root = eng.solve(a)
    res = LiftResult(root.sigma, root.tau, root.id, eng.nodes, eng.calls, eng.hits, eng.max_nodes)
    if verify:
        res.report = check_equilibrium(a, payoff, root.sigma, root.tau, eng.starts(witness, a))
        if not res.report.ok:
            raise LiftVerificationError(res.report)
    return res


@dataclass
class SkeletonLift:
    sigma: ChromaticStrategy
    tau: ChromaticStrategy
    inner: LiftResult
    report: EquilibriumReport | None = None


def lift_with_skeleton(
    a: Arena, m: MemorySkeleton, payoff: Payoff, oracle: Oracle, verify: bool = True, verify_oracle: bool = True
) -> SkeletonLift:
    """Skeleton-strategy equilibrium of ``a`` via a positional one on the product."""
    p = build(m, a)
    inner = positional_lift(p.arena, payoff, oracle, p.projection(), verify=verify, verify_oracle=verify_oracle)
    sigma, tau = project_equilibrium(p, inner.sigma, inner.tau)
    out = SkeletonLift(sigma, tau, inner)
    if verify:
        out.report = check_equilibrium(a, payoff, sigma, tau)
        if not out.report.ok:
            raise LiftVerificationError(out.report)
    return out


# ---------------------------------------------------------------- oracles


def _optimizer(a: Arena) -> Player:
    return Player.MAX if choice_free(a, Player.MIN) else Player.MIN


def _same_automaton(m1: MemorySkeleton, m2: MemorySkeleton) -> bool:
    return (m1.alphabet, m1.delta, m1.init) == (m2.alphabet, m2.delta, m2.init)


def payoff_oracle(payoff: Payoff) -> Oracle:
    """One-player oracle from ``payoff.one_player_opt``.  Skeleton witnesses
    are made positional through the labeling, which must use the same skeleton."""

    def oracle(a: Arena, w: TrivialWitness | None):
        side = _optimizer(a)
        res = payoff.one_player_opt(a, side)
        s = res.witness
        if s is None:
            raise OracleFailure(a, "payoff has no constructive one-player oracle")
        if isinstance(s, ChromaticStrategy):
            if w is None or not _same_automaton(w.skeleton, s.skeleton):
                raise OracleFailure(a, "oracle needs memory the labeling does not provide")
            s = degenerate(w.skeleton, a, w, s)
        other = default_strategy(a, side.opponent)
        return (s, other) if side is Player.MAX else (other, s)

    return oracle


def parity_oracle(payoff: ParityPayoff | None = None) -> Oracle:
    """Parity solver used on one-player arenas only."""
    payoff = payoff or ParityPayoff()

    def oracle(a: Arena, w: TrivialWitness | None):
        sol = solve(payoff.game(a))
        return sol.max_strategy, sol.min_strategy

    return oracle


# ---------------------------------------------------------------- g(n)


def compute_g(f: Sequence[int] | Mapping[int, int] | Callable[[int], int], n: int, m_max: int | None = None):
    """f at the first m with f(m) / (m + 1) <= 1 / (2n), or None if no such
    m is tabulated.  A sequence is read as f(1), f(2), ..."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if callable(f):
        if m_max is None:
            raise ValueError("m_max is required for a callable f")
        get, top = f, m_max
    elif isinstance(f, Mapping):
        get, top = f.__getitem__, max(f) if m_max is None else m_max
    else:
        get, top = (lambda m: f[m - 1]), len(f) if m_max is None else m_max
    for m in range(1, top + 1):
        fm = get(m)
        if fm * 2 * n <= m + 1:
            return fm
    return None
