"""Memory skeletons and the strategy representations built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterator, Mapping, Sequence

from .arena import Arena, Color, Edge, Player, UnknownColor


@dataclass(frozen=True)
class MemorySkeleton:
    """Deterministic automaton over colors.

    ``delta[m][i]`` is the successor of state ``m`` on ``alphabet[i]``.
    ``labels`` are cosmetic names for states (defaults to the ids).
    """

    alphabet: tuple[Color, ...]
    delta: tuple[tuple[int, ...], ...]
    init: int = 0
    labels: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        k = len(self.delta)
        if not 0 <= self.init < k:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != len(self.alphabet) or any(not 0 <= t < k for t in row):
                raise ValueError("transition table must be total over the alphabet")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def states(self) -> range:
        return range(len(self.delta))

    @cached_property
    def _index(self) -> dict:
        return {c: i for i, c in enumerate(self.alphabet)}

    def step(self, m: int, color: Color) -> int:
        try:
            return self.delta[m][self._index[color]]
        except KeyError:
            raise UnknownColor(None, color) from None

    def run(self, word: Sequence[Color], start: int | None = None) -> int:
        m = self.init if start is None else start
        for c in word:
            m = self.step(m, c)
        return m

    def label(self, m: int):
        return m if self.labels is None else self.labels[m]

    def state_of(self, label) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def covers(self, alphabet: Sequence[Color]) -> bool:
        return set(alphabet) <= set(self.alphabet)


def trivial_skeleton(alphabet: Sequence[Color]) -> MemorySkeleton:
    return MemorySkeleton(tuple(alphabet), ((0,) * len(alphabet),))


def run_skeleton(m: MemorySkeleton, word: Sequence[Color]) -> int:
    return m.run(word)


@dataclass(frozen=True)
class PositionalStrategy:
    owner: Player
    moves: Mapping[int, int]

    def move(self, node: int, state: int = 0) -> int:
        return self.moves[node]

    def check(self, a: Arena) -> None:
        for v in a.owned_by(self.owner):
            e = a.edge.get(self.moves.get(v))
            if e is None or e.src != v:
                raise ValueError(f"strategy has no legal move at node {v}")


@dataclass(frozen=True)
class ChromaticStrategy:
    owner: Player
    skeleton: MemorySkeleton
    moves: Mapping[tuple[int, int], int]

    def move(self, node: int, state: int) -> int:
        return self.moves[(state, node)]

    def check(self, a: Arena) -> None:
        for m in self.skeleton.states:
            for v in a.owned_by(self.owner):
                e = a.edge.get(self.moves.get((m, v)))
                if e is None or e.src != v:
                    raise ValueError(f"strategy has no legal move at ({m}, {v})")


Strategy = PositionalStrategy | ChromaticStrategy


def skeleton_of(s: Strategy, alphabet: Sequence[Color]) -> MemorySkeleton:
    if isinstance(s, ChromaticStrategy):
        return s.skeleton
    return trivial_skeleton(alphabet)


def as_chromatic(s: Strategy, alphabet: Sequence[Color]) -> ChromaticStrategy:
    if isinstance(s, ChromaticStrategy):
        return s
    return ChromaticStrategy(s.owner, trivial_skeleton(alphabet), {(0, v): e for v, e in s.moves.items()})


def default_strategy(a: Arena, player: Player) -> PositionalStrategy:
    """Lowest-id out-edge everywhere; the unique strategy when ``player`` has no choices."""
    return PositionalStrategy(player, {v: a.out_edges[v][0].id for v in a.owned_by(player)})


@dataclass(frozen=True)
class CounterStrategy:
    """Finite-mode strategy that may also consult a running integer counter.

    The counter is the sum of edge weights so far.  ``move(mode, levels, node)``
    sees the counter only through ``levels``, a dict mapping each threshold
    ``t`` to the sign of ``counter - t``.  ``update(mode, edge)`` is the mode
    transition, applied after every edge.
    """

    owner: Player
    n_modes: int
    initial: int
    update: Callable[[int, Edge], int]
    move: Callable[[int, Mapping[int, int], int], int]
    thresholds: tuple[int, ...] = ()
    name: str = field(default="", compare=False)


def as_counter(s: Strategy | CounterStrategy) -> CounterStrategy:
    if isinstance(s, CounterStrategy):
        return s
    if isinstance(s, PositionalStrategy):
        return CounterStrategy(s.owner, 1, 0, lambda m, e: 0, lambda m, lv, v: s.moves[v])
    sk = s.skeleton
    return CounterStrategy(
        s.owner, sk.n_states, sk.init, lambda m, e: sk.step(m, e.color), lambda m, lv, v: s.moves[(m, v)]
    )


def restrict(a: Arena, s: PositionalStrategy) -> Arena:
    """Drop every edge of ``s.owner`` that ``s`` does not use (edge ids preserved)."""
    keep = [e.id for e in a.edges if a.owners[e.src] is not s.owner or s.moves[e.src] == e.id]
    return a.with_edges(keep)


def canonical_form(alphabet_size: int, delta: Sequence[Sequence[int]], init: int = 0) -> tuple:
    """Reachable part of a DFA, states renamed in BFS order from ``init``."""
    order = [init]
    name = {init: 0}
    i = 0
    while i < len(order):
        m = order[i]
        for c in range(alphabet_size):
            t = delta[m][c]
            if t not in name:
                name[t] = len(order)
                order.append(t)
        i += 1
    return tuple(tuple(name[delta[m][c]] for c in range(alphabet_size)) for m in order)


def enumerate_skeletons(alphabet: Sequence[Color], max_states: int) -> Iterator[MemorySkeleton]:
    """Every skeleton with at most ``max_states`` states, up to renaming.

    Tables are generated directly in BFS-canonical form: the entry for
    ``(state, letter)`` is either an already discovered state or the next
    fresh one, and a row is only filled once its state has been discovered.
    """
    if max_states < 1:
        raise ValueError("max_states must be >= 1")
    alphabet = tuple(alphabet)
    k = len(alphabet)

    def fill(table: list[int], discovered: int):
        if len(table) == discovered * k:
            yield MemorySkeleton(alphabet, tuple(tuple(table[r * k:(r + 1) * k]) for r in range(discovered)))
            return
        for t in range(discovered):
            table.append(t)
            yield from fill(table, discovered)
            table.pop()
        if discovered < max_states:
            table.append(discovered)
            yield from fill(table, discovered + 1)
            table.pop()

    yield from fill([], 1)


def skeleton_to_dict(m: MemorySkeleton) -> dict:
    d = {
        "alphabet": [str(c) for c in m.alphabet],
        "init": m.init,
        "delta": [list(r) for r in m.delta],
    }
    if m.labels is not None:
        d["labels"] = [str(x) for x in m.labels]
    return d


def skeleton_from_dict(d: dict) -> MemorySkeleton:
    from .arena import _parse_color

    labels = tuple(_parse_color(x) for x in d["labels"]) if "labels" in d else None
    return MemorySkeleton(
        tuple(_parse_color(c) for c in d["alphabet"]),
        tuple(tuple(int(t) for t in r) for r in d["delta"]),
        int(d.get("init", 0)),
        labels,
    )


def strategy_to_dict(s: Strategy) -> dict:
    if isinstance(s, PositionalStrategy):
        return {"kind": "positional", "owner": s.owner.value, "moves": {str(v): e for v, e in sorted(s.moves.items())}}
    return {
        "kind": "chromatic",
        "owner": s.owner.value,
        "skeleton": skeleton_to_dict(s.skeleton),
        "moves": [[m, v, e] for (m, v), e in sorted(s.moves.items())],
    }


def strategy_from_dict(d: dict) -> Strategy:
    owner = Player(d["owner"])
    if d["kind"] == "positional":
        return PositionalStrategy(owner, {int(v): int(e) for v, e in d["moves"].items()})
    if d["kind"] == "chromatic":
        return ChromaticStrategy(
            owner, skeleton_from_dict(d["skeleton"]), {(int(m), int(v)): int(e) for m, v, e in d["moves"]}
        )
    raise ValueError(f"unknown strategy kind {d['kind']!r}")
