"""Product arenas M x A and M-trivial labelings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arena import Arena, Edge, arena_to_dict
from .memory import ChromaticStrategy, MemorySkeleton, PositionalStrategy, as_chromatic, restrict


@dataclass(frozen=True)
class ProductArena:
    """``arena`` has node ``m * |V| + v`` for the pair (m, v) and edge
    ``m * (max_edge_id + 1) + e`` for the pair (m, e).  Use the origin maps
    rather than decoding ids by hand."""

    arena: Arena
    skeleton: MemorySkeleton
    base: Arena
    node_origin: dict[int, tuple[int, int]]
    edge_origin: dict[int, tuple[int, int]]

    def node(self, m: int, v: int) -> int:
        return m * self.base.n_nodes + v

    def edge_id(self, m: int, e: int) -> int:
        return m * self._stride + e

    @property
    def _stride(self) -> int:
        return max((e.id for e in self.base.edges), default=-1) + 1

    def projection(self) -> "TrivialWitness":
        return TrivialWitness(self.skeleton, tuple(self.node_origin[x][0] for x in self.arena.nodes))

    def restricted(self, keep_edges) -> "ProductArena":
        return ProductArena(self.arena.with_edges(keep_edges), self.skeleton, self.base, self.node_origin, self.edge_origin)


@dataclass(frozen=True)
class TrivialWitness:
    """Labeling ``f`` of nodes by skeleton states, one entry per node."""

    skeleton: MemorySkeleton
    f: tuple[int, ...]

    def starts(self) -> list[int]:
        """Nodes labeled with the initial state."""
        return [v for v, m in enumerate(self.f) if m == self.skeleton.init]


def build(m: MemorySkeleton, a: Arena) -> ProductArena:
    if not m.covers(a.alphabet):
        raise ValueError("skeleton alphabet does not cover the arena alphabet")
    n = a.n_nodes
    stride = max((e.id for e in a.edges), default=-1) + 1
    owners = tuple(a.owners[v] for _ in m.states for v in a.nodes)
    edges = []
    edge_origin = {}
    for s in m.states:
        for e in a.edges:
            pid = s * stride + e.id
            edges.append(Edge(pid, s * n + e.src, m.step(s, e.color) * n + e.dst, e.color))
            edge_origin[pid] = (s, e.id)
    node_origin = {s * n + v: (s, v) for s in m.states for v in a.nodes}
    return ProductArena(Arena(owners, tuple(edges), a.alphabet), m, a, node_origin, edge_origin)


def check_trivial(m: MemorySkeleton, a: Arena, f: TrivialWitness | Sequence[int]) -> int | None:
    """``None`` if ``f`` commutes with the skeleton on every edge, else the first violating edge id."""
    labels = f.f if isinstance(f, TrivialWitness) else tuple(f)
    for e in sorted(a.edges, key=lambda e: e.id):
        if m.step(labels[e.src], e.color) != labels[e.dst]:
            return e.id
    return None


def lift_positional(p: ProductArena, s: ChromaticStrategy) -> PositionalStrategy:
    """The positional strategy on the product that plays ``s``."""
    moves = {}
    for x in p.arena.owned_by(s.owner):
        m, v = p.node_origin[x]
        moves[x] = p.edge_id(m, s.moves[(m, v)])
    return PositionalStrategy(s.owner, moves)


def project(p: ProductArena, s: PositionalStrategy) -> ChromaticStrategy:
    moves = {}
    for x, pe in s.moves.items():
        m, v = p.node_origin[x]
        m2, e = p.edge_origin[pe]
        assert m2 == m
        moves[(m, v)] = e
    return ChromaticStrategy(s.owner, p.skeleton, moves)


def project_equilibrium(p: ProductArena, sigma_hat: PositionalStrategy, tau_hat: PositionalStrategy):
    """Read positional product strategies as skeleton strategies on the base arena."""
    return project(p, sigma_hat), project(p, tau_hat)


def degenerate(m: MemorySkeleton, a: Arena, f: TrivialWitness, s: ChromaticStrategy) -> PositionalStrategy:
    """Positional strategy playing ``s`` with the memory state read off the labeling."""
    return PositionalStrategy(s.owner, {v: s.moves[(f.f[v], v)] for v in a.owned_by(s.owner)})


def restrict_by_chromatic(a: Arena, s: ChromaticStrategy | PositionalStrategy) -> ProductArena:
    """Product with the strategy's skeleton, restricted by its positional image.

    A positional strategy is treated as a one-state skeleton strategy.
    """
    s = as_chromatic(s, a.alphabet)
    p = build(s.skeleton, a)
    kept = restrict(p.arena, lift_positional(p, s))
    return p.restricted(e.id for e in kept.edges)


def product_to_dict(p: ProductArena) -> dict:
    d = arena_to_dict(p.arena)
    d["origin"] = {
        "nodes": {str(x): list(o) for x, o in sorted(p.node_origin.items())},
        "edges": {str(x): list(o) for x, o in sorted(p.edge_origin.items()) if x in p.arena.edge},
    }
    return d

