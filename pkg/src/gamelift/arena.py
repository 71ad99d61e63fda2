"""Edge-colored two-player arenas, plays as lassos, validation and I/O."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

Color = Hashable


class Player(str, enum.Enum):
    MAX = "Max"
    MIN = "Min"

    @property
    def opponent(self) -> "Player":
        return Player.MIN if self is Player.MAX else Player.MAX


class OnePlayer(str, enum.Enum):
    MIN_HAS_NO_CHOICE = "MinHasNoChoice"
    MAX_HAS_NO_CHOICE = "MaxHasNoChoice"
    TWO_PLAYER = "TwoPlayer"


class ArenaError(Exception):
    pass


class DeadEndNode(ArenaError):
    def __init__(self, node):
        super().__init__(f"node {node} has no outgoing edge")
        self.node = node


class DanglingEdge(ArenaError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} has an endpoint outside the node set")
        self.edge = edge


class UnknownColor(ArenaError):
    def __init__(self, edge, color=None):
        super().__init__(f"edge {edge} carries color {color!r} outside the alphabet")
        self.edge = edge
        self.color = color


class InvalidArena(ArenaError):
    def __init__(self, problems: list[ArenaError]):
        super().__init__("; ".join(str(p) for p in problems))
        self.problems = problems


class NotAPath(ArenaError):
    pass


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int
    color: Color


@dataclass(frozen=True)
class Arena:
    """A finite arena.

    Nodes are ``0..len(owners)-1``.  Edge ids are unique but need not be
    dense: sub-arenas obtained by deleting edges keep the ids of their
    parent so strategies transfer between them unchanged.
    """

    owners: tuple[Player, ...]
    edges: tuple[Edge, ...]
    alphabet: tuple[Color, ...]

    @classmethod
    def build(cls, owners: Iterable, edges: Iterable, alphabet: Iterable | None = None) -> "Arena":
        """Convenience constructor; ``edges`` are ``(src, dst, color)`` triples numbered in order."""
        owners = tuple(Player(o) for o in owners)
        es = tuple(Edge(i, s, d, c) for i, (s, d, c) in enumerate(edges))
        if alphabet is None:
            alphabet = sorted({e.color for e in es}, key=_color_key)
        return cls(owners, es, tuple(alphabet))

    @property
    def n_nodes(self) -> int:
        return len(self.owners)

    @property
    def nodes(self) -> range:
        return range(len(self.owners))

    @cached_property
    def edge(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def out_edges(self) -> tuple[tuple[Edge, ...], ...]:
        out: list[list[Edge]] = [[] for _ in self.owners]
        for e in self.edges:
            if 0 <= e.src < len(out):
                out[e.src].append(e)
        return tuple(tuple(sorted(es, key=lambda e: e.id)) for es in out)

    def owned_by(self, player: Player) -> list[int]:
        return [v for v, o in enumerate(self.owners) if o is player]

    def with_edges(self, keep: Iterable[int]) -> "Arena":
        """Sub-arena on the same nodes keeping only the listed edge ids."""
        keep = set(keep)
        return Arena(self.owners, tuple(e for e in self.edges if e.id in keep), self.alphabet)

    def key(self) -> tuple:
        return (self.owners, tuple((e.id, e.src, e.dst, e.color) for e in self.edges))


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play: ``prefix`` then ``cycle`` repeated forever (edge ids)."""

    start: int
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def unrolled(self, times: int) -> "Lasso":
        return Lasso(self.start, self.prefix, self.cycle * times)

    def rotated(self) -> "Lasso":
        """Move the first cycle edge into the prefix; same infinite play."""
        c = self.cycle
        return Lasso(self.start, self.prefix + c[:1], c[1:] + c[:1])


def _color_key(c):
    return (0, c, "") if isinstance(c, (int, float)) else (1, 0, str(c))


def validate(a: Arena) -> list[ArenaError]:
    """Return every violated arena invariant; an empty list means the arena is legal."""
    problems: list[ArenaError] = []
    alphabet = set(a.alphabet)
    n = a.n_nodes
    for e in a.edges:
        if not (0 <= e.src < n and 0 <= e.dst < n):
            problems.append(DanglingEdge(e.id))
        if e.color not in alphabet:
            problems.append(UnknownColor(e.id, e.color))
    for v in a.nodes:
        if not a.out_edges[v]:
            problems.append(DeadEndNode(v))
    return problems


def ensure_valid(a: Arena) -> Arena:
    problems = validate(a)
    if problems:
        raise InvalidArena(problems)
    return a


def choice_free(a: Arena, player: Player) -> bool:
    return all(len(a.out_edges[v]) == 1 for v in a.owned_by(player))


def is_one_player(a: Arena) -> OnePlayer:
    if choice_free(a, Player.MIN):
        return OnePlayer.MIN_HAS_NO_CHOICE
    if choice_free(a, Player.MAX):
        return OnePlayer.MAX_HAS_NO_CHOICE
    return OnePlayer.TWO_PLAYER


def check_path(a: Arena, edges: Sequence[int], start: int | None = None) -> None:
    prev = start
    for eid in edges:
        if eid not in a.edge:
            raise NotAPath(f"unknown edge {eid}")
        e = a.edge[eid]
        if prev is not None and e.src != prev:
            raise NotAPath(f"edge {eid} does not start at node {prev}")
        prev = e.dst


def reachable(a: Arena, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for e in a.out_edges[v]:
            if e.dst not in seen:
                seen.add(e.dst)
                stack.append(e.dst)
    return seen


def color_word(a: Arena, p: Sequence[int] | Lasso):
    """Colors along a finite path, or ``(prefix_word, cycle_word)`` for a lasso."""
    if isinstance(p, Lasso):
        check_path(a, p.prefix + p.cycle, p.start)
        first = a.edge[p.cycle[0]].src
        last = a.edge[p.cycle[-1]].dst
        if first != last:
            raise NotAPath("lasso cycle is not closed")
        return (tuple(a.edge[e].color for e in p.prefix), tuple(a.edge[e].color for e in p.cycle))
    check_path(a, p)
    return tuple(a.edge[e].color for e in p)


def random_arena(
    n_max: int,
    alphabet: Sequence[Color],
    seed: int,
    one_player: Player | None = None,
    max_out: int = 3,
    max_edges: int | None = None,
    exact_nodes: bool = False,
) -> Arena:
    """Random valid arena with at most ``n_max`` nodes.

    ``one_player`` names the side that gets no choices (out-degree exactly 1).
    """
    if n_max < 1 or not alphabet:
        raise ValueError("need n_max >= 1 and a nonempty alphabet")
    rng = random.Random(seed)
    cap = n_max if max_edges is None else min(n_max, max_edges)
    n = cap if exact_nodes else rng.randint(1, cap)
    owners = [rng.choice((Player.MAX, Player.MIN)) for _ in range(n)]
    degrees = []
    for v in range(n):
        if owners[v] is one_player:
            degrees.append(1)
        else:
            degrees.append(rng.randint(1, max_out))
    if max_edges is not None:
        while sum(degrees) > max_edges:
            candidates = [v for v in range(n) if degrees[v] > 1]
            degrees[rng.choice(candidates)] -= 1
    triples = []
    for v in range(n):
        for _ in range(degrees[v]):
            triples.append((v, rng.randrange(n), rng.choice(list(alphabet))))
    return Arena.build(owners, triples, alphabet)


def _parse_color(s):
    if isinstance(s, str):
        try:
            return int(s)
        except ValueError:
            return s
    return s


def arena_to_dict(a: Arena, priorities: dict[int, int] | None = None) -> dict:
    edges = []
    for e in a.edges:
        d = {"id": e.id, "src": e.src, "dst": e.dst, "color": str(e.color)}
        if priorities is not None and e.id in priorities:
            d["priority"] = priorities[e.id]
        edges.append(d)
    return {
        "alphabet": [str(c) for c in a.alphabet],
        "nodes": [{"id": v, "owner": o.value} for v, o in enumerate(a.owners)],
        "edges": edges,
    }


def arena_from_dict(d: dict) -> Arena:
    nodes = sorted(d["nodes"], key=lambda x: x["id"])
    if [x["id"] for x in nodes] != list(range(len(nodes))):
        raise ArenaError("node ids must be 0..n-1")
    owners = tuple(Player(x["owner"]) for x in nodes)
    edges = tuple(
        Edge(int(x["id"]), int(x["src"]), int(x["dst"]), _parse_color(x["color"])) for x in d["edges"]
    )
    if len({e.id for e in edges}) != len(edges):
        raise ArenaError("duplicate edge id")
    alphabet = tuple(_parse_color(c) for c in d["alphabet"])
    return ensure_valid(Arena(owners, edges, alphabet))


def priorities_from_dict(d: dict) -> dict[int, int] | None:
    pr = {int(x["id"]): int(x["priority"]) for x in d["edges"] if "priority" in x}
    return pr or None


def to_json(a: Arena, **kw) -> str:
    return json.dumps(arena_to_dict(a), **kw)


def from_json(s: str) -> Arena:
    return arena_from_dict(json.loads(s))


def to_dot(a: Arena, name: str = "arena") -> str:
    lines = [f"digraph {name} {{"]
    for v, o in enumerate(a.owners):
        shape = "box" if o is Player.MAX else "triangle"
        lines.append(f'  n{v} [label="{v}", shape={shape}];')
    for e in a.edges:
        lines.append(f'  n{e.src} -> n{e.dst} [label="{e.color}"];')
    lines.append("}")
    return "\n".join(lines)
