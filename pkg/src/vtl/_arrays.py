"""Array-level group arithmetic and packed-key element lookup.

Elements are held as three int64 arrays (p, q, k). A set of elements is
indexed by packing each triple into one int64 key, with k most significant,
then p, then q, so sorting keys reproduces the canonical (k, p, q) order.
"""

from __future__ import annotations

import numpy as np

from .errors import ArithmeticOverflow, ResourceLimit
from .group import INT64_MAX, Kind, TorusBundleGroup

_SAFE = 2**62


def _maxabs(x) -> int:
    x = np.asarray(x)
    if x.size == 0:
        return 0
    return max(abs(int(x.min())), abs(int(x.max())))


def power_columns(G: TorusBundleGroup, K: np.ndarray):
    """Entries of A^k for every k in K, as four int64 arrays shaped like K."""
    K = np.asarray(K, dtype=np.int64)
    if G.kind is Kind.ABELIAN2 or K.size == 0:
        one, zero = np.ones_like(K), np.zeros_like(K)
        return one, zero, zero, one
    uniq, inv = np.unique(K, return_inverse=True)
    table = np.array([G.power(int(k)).entries for k in uniq], dtype=np.int64)
    inv = inv.reshape(K.shape)
    return table[inv, 0], table[inv, 1], table[inv, 2], table[inv, 3]


def right_multiply(G, P, Q, K, hp, hq, hk, powers=None):
    """(P, Q, K) * (hp, hq, hk) elementwise with broadcasting.

    ``powers`` may carry precomputed ``power_columns(G, K)``.
    """
    m11, m12, m21, m22 = powers if powers is not None else power_columns(G, K)
    hp = np.asarray(hp, dtype=np.int64)
    hq = np.asarray(hq, dtype=np.int64)
    bp = _maxabs(P) + _maxabs(m11) * _maxabs(hp) + _maxabs(m12) * _maxabs(hq)
    bq = _maxabs(Q) + _maxabs(m21) * _maxabs(hp) + _maxabs(m22) * _maxabs(hq)
    if max(bp, bq) > INT64_MAX:
        raise ArithmeticOverflow("coordinates would exceed the signed 64-bit range")
    if _maxabs(K) + _maxabs(hk) > 2**31 - 1:
        raise ArithmeticOverflow("fiber coordinate would exceed the signed 32-bit range")
    return (P + m11 * hp + m12 * hq, Q + m21 * hp + m22 * hq, K + np.asarray(hk, dtype=np.int64))


class Packing:
    """Mixed-radix packing of (p, q, k) inside a fixed bounding box."""

    def __init__(self, lo: tuple[int, int, int], hi: tuple[int, int, int]):
        self.lo = tuple(int(x) for x in lo)
        self.hi = tuple(int(x) for x in hi)
        self.span = tuple(h - l + 1 for l, h in zip(self.lo, self.hi))
        if self.span[0] * self.span[1] * self.span[2] >= _SAFE:
            raise ResourceLimit("coordinate range too wide for packed 64-bit keys")

    @classmethod
    def covering(cls, *triples) -> Packing:
        los, his = [], []
        for P, Q, K in triples:
            if np.size(P):
                los.append((int(P.min()), int(Q.min()), int(K.min())))
                his.append((int(P.max()), int(Q.max()), int(K.max())))
        if not los:
            return cls((0, 0, 0), (0, 0, 0))
        return cls(tuple(map(min, zip(*los))), tuple(map(max, zip(*his))))

    def inside(self, P, Q, K) -> np.ndarray:
        (pl, ql, kl), (ph, qh, kh) = self.lo, self.hi
        return (P >= pl) & (P <= ph) & (Q >= ql) & (Q <= qh) & (K >= kl) & (K <= kh)

    def pack(self, P, Q, K) -> np.ndarray:
        pl, ql, kl = self.lo
        sp, sq, _ = self.span
        return ((K - kl) * sp + (P - pl)) * sq + (Q - ql)

    def unpack(self, keys):
        pl, ql, kl = self.lo
        sp, sq, _ = self.span
        keys = np.asarray(keys, dtype=np.int64)
        Q = keys % sq + ql
        rest = keys // sq
        P = rest % sp + pl
        K = rest // sp + kl
        return P, Q, K


class ElementIndex:
    """Position lookup for a fixed set of distinct elements."""

    def __init__(self, P, Q, K):
        self.packing = Packing.covering((P, Q, K))
        keys = self.packing.pack(P, Q, K)
        self.order = np.argsort(keys, kind="stable")
        self.sorted_keys = keys[self.order]
        if len(keys) > 1 and np.any(self.sorted_keys[1:] == self.sorted_keys[:-1]):
            raise ValueError("duplicate elements in index")

    def __len__(self):
        return len(self.sorted_keys)

    def lookup(self, P, Q, K) -> np.ndarray:
        """Positions of the queried elements, -1 where absent."""
        P, Q, K = np.broadcast_arrays(*(np.asarray(x, dtype=np.int64) for x in (P, Q, K)))
        out = np.full(P.shape, -1, dtype=np.int64)
        if len(self.sorted_keys) == 0:
            return out
        mask = self.packing.inside(P, Q, K)
        if not mask.any():
            return out
        keys = self.packing.pack(P[mask], Q[mask], K[mask])
        pos = np.searchsorted(self.sorted_keys, keys)
        pos = np.minimum(pos, len(self.sorted_keys) - 1)
        hit = self.sorted_keys[pos] == keys
        found = np.where(hit, self.order[pos], -1)
        out[mask] = found
        return out
