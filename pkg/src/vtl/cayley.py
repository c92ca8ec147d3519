"""Cayley graphs of the torus-bundle groups: generating sets, BFS balls, growth.

Edges are implicit. A vertex g is joined to g*s for every s in the
symmetric closure of the generating set; the canonical undirected edge
set is {(v, v*s) : s positive}.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from ._arrays import ElementIndex, Packing, right_multiply, power_columns
from .errors import IdentityGenerator, RadiusExceeded, ResourceLimit, UnsupportedGroup
from .group import (
    E,
    GroupElement,
    HEISENBERG,
    Kind,
    SOL,
    TorusBundleGroup,
    Word,
    Z2,
    evaluate_word,
    inverse,
    multiply,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 50_000_000


@dataclass(frozen=True)
class GeneratorSet:
    positives: tuple[tuple[str, GroupElement], ...]
    closure: tuple[GroupElement, ...]
    closure_labels: tuple[str, ...]

    @classmethod
    def from_positives(cls, G: TorusBundleGroup, positives) -> GeneratorSet:
        kept: list[tuple[str, GroupElement]] = []
        seen: set[GroupElement] = set()
        for label, g in positives:
            if g == E:
                raise IdentityGenerator(f"generator {label!r} is the identity")
            if not G.contains(g):
                raise UnsupportedGroup(f"generator {label!r}={g!r} is not in {G}")
            # a later copy of g or of g^-1 would duplicate canonical edges
            if g in seen:
                continue
            kept.append((label, g))
            seen.add(g)
            seen.add(inverse(G, g))
        closure = [g for _, g in kept]
        labels = [label for label, _ in kept]
        for label, g in kept:
            gi = inverse(G, g)
            if gi not in closure:
                closure.append(gi)
                labels.append(f"{label}^-1")
        return cls(tuple(kept), tuple(closure), tuple(labels))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.positives)

    def __len__(self):
        return len(self.closure)

    def describe(self) -> str:
        return ";".join(f"{label}:{g.p},{g.q},{g.k}" for label, g in self.positives)


# words over {a, b, t} for the face-sharing translates of the fundamental domain
DEFAULT_WORDS = {
    "z2": [("a", "a"), ("b", "b")],
    "nil": [("b", "b"), ("c", "Ba"), ("t", "t"), ("tb", "tb")],
    # b1*b2 = b, so c1c2 = a b a, t c2^-1 c1^-1 = t A B A and t b1 c1^-1 = t A
    "sol": [
        ("d", "ab"),
        ("t", "t"),
        ("c1c2", "aba"),
        ("td^-1", "tBA"),
        ("tc2^-1c1^-1", "tABA"),
        ("tb1c1^-1", "tA"),
    ],
}


def default_generators(G: TorusBundleGroup) -> GeneratorSet:
    for name, H in (("z2", Z2), ("nil", HEISENBERG), ("sol", SOL)):
        if G.kind is H.kind and G.matrix == H.matrix:
            pos = [(label, evaluate_word(G, w)) for label, w in DEFAULT_WORDS[name]]
            return GeneratorSet.from_positives(G, pos)
    raise UnsupportedGroup(f"no default generating set for matrix {G.matrix}; pass explicit words")


def custom_generators(G: TorusBundleGroup, words: Sequence[Word | str]) -> GeneratorSet:
    pos = []
    for w in words:
        if isinstance(w, str):
            w = Word.parse(w)
        g = evaluate_word(G, w)
        if g == E:
            raise IdentityGenerator(f"word {w} evaluates to the identity")
        pos.append((str(w.reduced()), g))
    return GeneratorSet.from_positives(G, pos)


def neighbors(G: TorusBundleGroup, S: GeneratorSet, g: GroupElement) -> list[GroupElement]:
    return [multiply(G, g, s) for s in S.closure]


@dataclass(frozen=True, eq=False)
class CayleyBall:
    """Elements of word length <= radius in canonical (dist, k, p, q) order."""

    group: TorusBundleGroup
    gens: GeneratorSet
    radius: int
    p: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    k: np.ndarray = field(repr=False)
    dist: np.ndarray = field(repr=False)
    sizes: tuple[int, ...] = ()

    def __len__(self):
        return len(self.p)

    def __eq__(self, other):
        if not isinstance(other, CayleyBall):
            return NotImplemented
        return (
            self.group == other.group
            and self.gens == other.gens
            and self.radius == other.radius
            and self.sizes == other.sizes
            and all(np.array_equal(getattr(self, a), getattr(other, a)) for a in "pqk")
            and np.array_equal(self.dist, other.dist)
        )

    @cached_property
    def index(self) -> ElementIndex:
        return ElementIndex(self.p, self.q, self.k)

    def element(self, i: int) -> GroupElement:
        return GroupElement(int(self.p[i]), int(self.q[i]), int(self.k[i]))

    def elements(self) -> Iterator[GroupElement]:
        for i in range(len(self)):
            yield self.element(i)

    def word_length(self, g: GroupElement) -> int | None:
        i = int(self.index.lookup(g.p, g.q, g.k))
        return None if i < 0 else int(self.dist[i])

    def __contains__(self, g: GroupElement):
        return self.word_length(g) is not None

    def truncate(self, r: int) -> CayleyBall:
        if r > self.radius:
            raise RadiusExceeded(f"radius {r} exceeds ball radius {self.radius}")
        if r == self.radius:
            return self
        n = self.sizes[r]
        return CayleyBall(
            self.group, self.gens, r, self.p[:n], self.q[:n], self.k[:n], self.dist[:n], self.sizes[: r + 1]
        )

    def level(self, r: int):
        lo = self.sizes[r - 1] if r > 0 else 0
        hi = self.sizes[r]
        return self.p[lo:hi], self.q[lo:hi], self.k[lo:hi]


def _closure_arrays(S: GeneratorSet):
    return [(s.p, s.q, s.k) for s in S.closure]


def _next_level(G, S, cur, prev):
    """Elements at distance d+1 given the levels at distance d and d-1."""
    P, Q, K = cur
    powers = power_columns(G, K)
    moves = [right_multiply(G, P, Q, K, sp, sq, sk, powers) for sp, sq, sk in _closure_arrays(S)]
    packing = Packing.covering(cur, prev, *moves)
    old = np.union1d(packing.pack(*cur), packing.pack(*prev))
    new = np.empty(0, dtype=np.int64)
    for m in moves:
        keys = np.setdiff1d(np.unique(packing.pack(*m)), old, assume_unique=True)
        new = np.union1d(new, keys)
    return packing.unpack(new)


def _grow(G, S, start: CayleyBall | None, r: int, cap: int) -> CayleyBall:
    empty = np.empty(0, dtype=np.int64)
    if start is None:
        one = np.zeros(1, dtype=np.int64)
        levels = [(one, one.copy(), one.copy())]
    else:
        levels = [start.level(i) for i in range(start.radius + 1)]
    sizes = [int(x) for x in np.cumsum([len(lv[0]) for lv in levels])]
    while len(levels) <= r:
        prev = levels[-2] if len(levels) > 1 else (empty, empty, empty)
        nxt = _next_level(G, S, levels[-1], prev)
        levels.append(nxt)
        sizes.append(sizes[-1] + len(nxt[0]))
        if sizes[-1] > cap:
            raise ResourceLimit(f"ball of radius {len(levels) - 1} has {sizes[-1]} elements, cap is {cap}")
        log.debug("level %d: %d new, %d total", len(levels) - 1, len(nxt[0]), sizes[-1])
    dist = np.concatenate([np.full(len(lv[0]), d, dtype=np.int64) for d, lv in enumerate(levels)])
    P, Q, K = (np.concatenate([lv[i] for lv in levels]) for i in range(3))
    return CayleyBall(G, S, r, P, Q, K, dist, tuple(sizes))


_MEMO: OrderedDict = OrderedDict()
_MEMO_SIZE = 6


def clear_ball_memo():
    _MEMO.clear()


def enumerate_ball(G: TorusBundleGroup, S: GeneratorSet, r: int, cap: int = DEFAULT_CAP) -> CayleyBall:
    """B(r): all elements at word distance <= r, with exact distances.

    Balls are memoised per (group, generators); a larger cached ball is
    truncated, a smaller one is extended level by level.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    key = (G, S)
    cached = _MEMO.get(key)
    if cached is not None and cached.radius >= r:
        _MEMO.move_to_end(key)
        if cached.sizes[r] > cap:
            raise ResourceLimit(f"ball of radius {r} has {cached.sizes[r]} elements, cap is {cap}")
        return cached.truncate(r)
    ball = _grow(G, S, cached, r, cap)
    _MEMO[key] = ball
    _MEMO.move_to_end(key)
    while len(_MEMO) > _MEMO_SIZE:
        _MEMO.popitem(last=False)
    return ball


def remember_ball(ball: CayleyBall):
    """Seed the ball store, e.g. with a ball read from a cache file."""
    key = (ball.group, ball.gens)
    cur = _MEMO.get(key)
    if cur is None or cur.radius < ball.radius:
        _MEMO[key] = ball


def growth_series(G: TorusBundleGroup, S: GeneratorSet, rmax: int, cap: int = DEFAULT_CAP) -> list[int]:
    return list(enumerate_ball(G, S, rmax, cap).sizes)


def word_length(ball: CayleyBall, g: GroupElement) -> int | None:
    return ball.word_length(g)
