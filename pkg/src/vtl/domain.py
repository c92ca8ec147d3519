"""Finite domains with multiplicities, their mass, boundary and gradient."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from ._arrays import ElementIndex, _maxabs, power_columns, right_multiply
from .cayley import CayleyBall, GeneratorSet
from .errors import ArithmeticOverflow, DegenerateInput, EmptyBox, RadiusExceeded
from .group import E, INT64_MAX, GroupElement, Kind, TorusBundleGroup, inverse, multiply

RNG_NAME = "pcg64"


@dataclass(frozen=True)
class BoundaryEdge:
    source: GroupElement
    via: str
    target: GroupElement
    delta: int


@dataclass(frozen=True, eq=False)
class Domain:
    """phi: V -> N with finite support, stored sorted by (k, p, q)."""

    group: TorusBundleGroup
    gens: GeneratorSet
    p: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    k: np.ndarray = field(repr=False)
    mult: np.ndarray = field(repr=False)
    seed: int | None = None

    @classmethod
    def from_arrays(cls, G, S, P, Q, K, M, seed=None) -> Domain:
        P, Q, K, M = (np.asarray(x, dtype=np.int64).ravel() for x in (P, Q, K, M))
        if np.any(M < 0):
            raise DegenerateInput("multiplicities must be non-negative")
        keep = M > 0
        P, Q, K, M = P[keep], Q[keep], K[keep], M[keep]
        if len(P) == 0:
            raise DegenerateInput("domain has empty support")
        if G.kind is Kind.ABELIAN2 and np.any(K != 0):
            raise DegenerateInput("Z^2 domain elements must have k = 0")
        order = np.lexsort((Q, P, K))
        P, Q, K, M = P[order], Q[order], K[order], M[order]
        dup = (P[1:] == P[:-1]) & (Q[1:] == Q[:-1]) & (K[1:] == K[:-1])
        if dup.any():
            raise DegenerateInput("duplicate support elements")
        return cls(G, S, P, Q, K, M, seed)

    @classmethod
    def from_mapping(cls, G, S, phi: Mapping[GroupElement, int], seed=None) -> Domain:
        items = [(g, int(m)) for g, m in phi.items()]
        return cls.from_arrays(
            G, S, [g.p for g, _ in items], [g.q for g, _ in items], [g.k for g, _ in items], [m for _, m in items], seed
        )

    def __len__(self):
        return len(self.p)

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return (
            self.group == other.group
            and self.gens == other.gens
            and self.seed == other.seed
            and all(np.array_equal(getattr(self, a), getattr(other, a)) for a in ("p", "q", "k", "mult"))
        )

    @cached_property
    def index(self) -> ElementIndex:
        return ElementIndex(self.p, self.q, self.k)

    @cached_property
    def powers(self):
        return power_columns(self.group, self.k)

    @property
    def mass(self) -> int:
        return int(self.mult.sum())

    @property
    def is_characteristic(self) -> bool:
        return bool(np.all(self.mult == 1))

    @property
    def support(self) -> list[GroupElement]:
        return [GroupElement(int(a), int(b), int(c)) for a, b, c in zip(self.p, self.q, self.k)]

    @property
    def phi(self) -> dict[GroupElement, int]:
        return dict(zip(self.support, (int(m) for m in self.mult)))

    def values_at(self, P, Q, K) -> np.ndarray:
        """phi evaluated elementwise, zero off the support."""
        idx = self.index.lookup(P, Q, K)
        return np.where(idx >= 0, self.mult[np.maximum(idx, 0)], 0)

    def __call__(self, g: GroupElement) -> int:
        return int(self.values_at(g.p, g.q, g.k))

    def scaled(self, c: int) -> Domain:
        if c < 1:
            raise DegenerateInput("scale must be >= 1")
        return Domain(self.group, self.gens, self.p, self.q, self.k, self.mult * c, self.seed)


def singleton(G: TorusBundleGroup, S: GeneratorSet, multiplicity: int = 1) -> Domain:
    return Domain.from_mapping(G, S, {E: multiplicity})


def from_ball(ball: CayleyBall, n: int) -> Domain:
    if n > ball.radius:
        raise RadiusExceeded(f"n = {n} exceeds ball radius {ball.radius}")
    m = ball.sizes[n]
    return Domain.from_arrays(ball.group, ball.gens, ball.p[:m], ball.q[:m], ball.k[:m], np.ones(m, dtype=np.int64))


def from_box(G: TorusBundleGroup, S: GeneratorSet, lo: Sequence[int], hi: Sequence[int]) -> Domain:
    """Characteristic domain on the coordinate box lo <= (p, q, k) <= hi."""
    lo, hi = list(lo), list(hi)
    if G.kind is Kind.ABELIAN2:
        lo, hi = lo[:2] + [0], hi[:2] + [0]
    if len(lo) != 3 or len(hi) != 3:
        raise EmptyBox("box corners need three coordinates")
    if any(a > b for a, b in zip(lo, hi)):
        raise EmptyBox(f"box {lo}..{hi} is empty")
    P, Q, K = np.meshgrid(*(np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)), indexing="ij")
    return Domain.from_arrays(G, S, P, Q, K, np.ones(P.size, dtype=np.int64))


def random_connected(
    G: TorusBundleGroup, S: GeneratorSet, target_mass: int, max_mult: int, seed: int
) -> Domain:
    """Grow a connected support from the identity until the mass reaches target_mass.

    Each step adds a uniformly chosen unvisited neighbour of the current
    support and gives it a multiplicity uniform in [1, max_mult]. Uses
    numpy's PCG64 seeded with ``seed`` (taken mod 2^64).
    """
    if target_mass < 1 or max_mult < 1:
        raise DegenerateInput("target_mass and max_mult must be >= 1")
    seed = int(seed) % 2**64
    rng = np.random.default_rng(seed)
    phi = {E: int(rng.integers(1, max_mult + 1))}
    total = phi[E]
    frontier: list[GroupElement] = []
    in_frontier: set[GroupElement] = set()
    last = E
    while total < target_mass:
        for h in (multiply(G, last, s) for s in S.closure):
            if h not in phi and h not in in_frontier:
                frontier.append(h)
                in_frontier.add(h)
        i = int(rng.integers(len(frontier)))
        last = frontier[i]
        frontier[i] = frontier[-1]
        frontier.pop()
        in_frontier.discard(last)
        m = int(rng.integers(1, max_mult + 1))
        phi[last] = m
        total += m
    return Domain.from_mapping(G, S, phi, seed=seed)


def mass(D: Domain) -> int:
    return D.mass


def _edge_terms(D: Domain):
    """Per positive generator s: phi(v), phi(v s), phi(v s^-1) over the support."""
    G = D.group
    out = []
    for label, s in D.gens.positives:
        fwd = right_multiply(G, D.p, D.q, D.k, s.p, s.q, s.k, D.powers)
        si = inverse(G, s)
        back = right_multiply(G, D.p, D.q, D.k, si.p, si.q, si.k, D.powers)
        out.append((label, fwd, D.values_at(*fwd), back, D.values_at(*back)))
    return out


def gradient(D: Domain) -> int:
    """Sum of |phi(i) - phi(t)| over all edges of the Cayley graph."""
    total = 0
    for _, _, ahead, _, behind in _edge_terms(D):
        # edges leaving the support, plus edges entering it from phi = 0
        total += int(np.abs(D.mult - ahead).sum()) + int(D.mult[behind == 0].sum())
    return total


def _at(P, Q, K, i) -> GroupElement:
    return GroupElement(int(P[i]), int(Q[i]), int(K[i]))


def varopoulos_boundary(D: Domain) -> list[BoundaryEdge]:
    """Edges (v, v s), s positive, whose endpoint values differ. Each edge once."""
    found = []
    for j, (label, fwd, ahead, back, behind) in enumerate(_edge_terms(D)):
        for i in np.flatnonzero(D.mult != ahead):
            delta = int(abs(D.mult[i] - ahead[i]))
            found.append((j, BoundaryEdge(_at(D.p, D.q, D.k, i), label, _at(*fwd, i), delta)))
        for i in np.flatnonzero(behind == 0):
            found.append((j, BoundaryEdge(_at(*back, i), label, _at(D.p, D.q, D.k, i), int(D.mult[i]))))
    found.sort(key=lambda e: (e[1].source.sort_key, e[0]))
    return [e for _, e in found]


def translate_left(D: Domain, g: GroupElement) -> Domain:
    """The domain phi'(g x) = phi(x)."""
    G = D.group
    if G.kind is Kind.ABELIAN2 and g.k != 0:
        raise DegenerateInput("Z^2 has no fiber direction")
    m11, m12, m21, m22 = G.power(g.k).entries
    bound = max(abs(g.p), abs(g.q)) + max(abs(m11) + abs(m12), abs(m21) + abs(m22)) * max(_maxabs(D.p), _maxabs(D.q))
    if bound > INT64_MAX or _maxabs(D.k) + abs(g.k) > 2**31 - 1:
        raise ArithmeticOverflow("left translation leaves the checked range")
    P = g.p + m11 * D.p + m12 * D.q
    Q = g.q + m21 * D.p + m22 * D.q
    return Domain.from_arrays(G, D.gens, P, Q, D.k + g.k, D.mult, D.seed)
