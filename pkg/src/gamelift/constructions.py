"""Concrete skeletons and arenas: the bounded running-sum memory, the
ones-after-last-zero counter, the two-node counterexample arena and the
cut arena A_m."""
from __future__ import annotations

from typing import Callable, Iterable

from .arena import Arena, Player
from .memory import MemorySkeleton

BOT = "bot"

# edge ids of build_fig2()
SQUARE, TRIANGLE = 0, 1
SQUARE_LOOP, SQUARE_TO_TRIANGLE, TRIANGLE_LOOP, TRIANGLE_TO_SQUARE = 0, 1, 2, 3


def synth_Mn(n: int) -> MemorySkeleton:
    """Running sum of +-1 weights while its absolute value stays <= n, then a sink.

    State ``s + n`` holds sum ``s``; state ``2n + 1`` is the sink.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    bot = 2 * n + 1
    rows = []
    for s in range(-n, n + 1):
        row = []
        for c in (-1, 1):
            t = s + c
            row.append(t + n if abs(t) <= n else bot)
        rows.append(tuple(row))
    rows.append((bot, bot))
    labels = tuple(range(-n, n + 1)) + (BOT,)
    return MemorySkeleton((-1, 1), tuple(rows), init=n, labels=labels)


def synth_Mk(k: int, T: Iterable[int]) -> MemorySkeleton:
    """Counts ones after the last zero up to k; reading a zero after a count
    in T (within 1..k) moves to the absorbing state F.

    States: 0 = I, 1 = F, 2 + i = q_i (0 <= i <= k), k + 3 = q_{>k}.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    T = set(T)
    I, F, over = 0, 1, k + 3

    def q(i):
        return 2 + i

    rows = [(q(0), I), (F, F)]  # columns: color 0, color 1
    for i in range(k + 1):
        on0 = F if (1 <= i <= k and i in T) else q(0)
        on1 = q(i + 1) if i < k else over
        rows.append((on0, on1))
    rows.append((q(0), over))
    labels = ("I", "F") + tuple(f"q{i}" for i in range(k + 1)) + (f"q>{k}",)
    return MemorySkeleton((0, 1), tuple(rows), init=I, labels=labels)


def build_fig2() -> Arena:
    """Square (Max) with a -1 loop and a +1 edge to the triangle (Min), which
    has a +1 loop and a -1 edge back."""
    return Arena.build(
        [Player.MAX, Player.MIN],
        [
            (SQUARE, SQUARE, -1),
            (SQUARE, TRIANGLE, 1),
            (TRIANGLE, TRIANGLE, 1),
            (TRIANGLE, SQUARE, -1),
        ],
        alphabet=(-1, 1),
    )


class AmLayout:
    """Node bookkeeping for :func:`build_Am`."""

    def __init__(self, m: int, k: int):
        self.m, self.k = m, k
        self.left: list[int] = []
        self.right: list[int] = []
        self.center = -1


def build_Am(m: int, k: int, layout: AmLayout | None = None) -> Arena:
    """Max-only arena: left node i reaches the center along colors 0 1^i, the
    center reaches right node i along 1^(k-i), right nodes loop on 0."""
    if not k > m >= 1:
        raise ValueError("need k > m >= 1")
    lay = layout if layout is not None else AmLayout(m, k)
    n = 0
    edges: list[tuple[int, int, int]] = []

    def fresh():
        nonlocal n
        n += 1
        return n - 1

    lay.center = fresh()
    for i in range(1, m + 1):
        lay.left.append(fresh())
    for i in range(1, m + 1):
        lay.right.append(fresh())
    for i in range(1, m + 1):
        word = [0] + [1] * i
        cur = lay.left[i - 1]
        for j, c in enumerate(word):
            nxt = lay.center if j == len(word) - 1 else fresh()
            edges.append((cur, nxt, c))
            cur = nxt
    for i in range(1, m + 1):
        cur = lay.center
        for j in range(k - i):
            nxt = lay.right[i - 1] if j == k - i - 1 else fresh()
            edges.append((cur, nxt, 1))
            cur = nxt
        edges.append((lay.right[i - 1], lay.right[i - 1], 0))
    return Arena.build([Player.MAX] * n, edges, alphabet=(0, 1))


IntSet = Iterable[int] | Callable[[int], int]


def _elements_upto(T: IntSet, bound: int) -> list[int]:
    """Elements of T that are <= bound.  A callable T is read as the
    increasing enumeration n -> T(n), n = 1, 2, ..."""
    if callable(T):
        out, n = [], 1
        while True:
            x = T(n)
            if x > bound:
                return out
            out.append(x)
            n += 1
    return sorted(x for x in set(T) if x <= bound)


def good_elements(T: IntSet, horizon: int) -> list[int]:
    """Elements k <= horizon of T with no other element strictly between k and k^4."""
    out = []
    for k in _elements_upto(T, horizon):
        if not any(k < l < k ** 4 for l in _elements_upto(T, k ** 4)):
            out.append(k)
    return out


def is_sparse(T: IntSet, horizon: int, min_count: int = 1) -> bool:
    """Finite proxy for sparseness: at least ``min_count`` good elements up to ``horizon``."""
    return len(good_elements(T, horizon)) >= min_count


def is_isolated_element(T: IntSet, k: int) -> bool:
    """k in T and no other element of T lies in the open window (k/2, k^4)."""
    els = _elements_upto(T, k ** 4)
    return k in els and not any(l != k and 2 * l > k and l < k ** 4 for l in els)


def is_isolated_in_window(T: IntSet, k: int, m: int) -> bool:
    """k in T, k > m, and no other element of T in the open window (k - m, k + m)."""
    els = _elements_upto(T, k + m)
    return k > m and k in els and not any(l != k and k - m < l < k + m for l in els)


def smallest_isolated_above(T: IntSet, m: int, horizon: int = 10 ** 6) -> int | None:
    for k in _elements_upto(T, horizon):
        if k > m and is_isolated_in_window(T, k, m):
            return k
    return None
