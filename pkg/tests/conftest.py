"""Shared fixtures and brute-force oracles.

The oracles here are deliberately naive pure-Python re-derivations. They
only use group.multiply / group.inverse and never touch the vectorised
code paths they are checking.
"""

import itertools

import pytest

from vtl.cayley import clear_ball_memo, default_generators
from vtl.group import E, HEISENBERG, SOL, Z2, GroupElement, inverse, multiply

GROUPS = {"z2": Z2, "nil": HEISENBERG, "sol": SOL}


@pytest.fixture(params=sorted(GROUPS))
def group_and_gens(request):
    G = GROUPS[request.param]
    return G, default_generators(G)


@pytest.fixture
def nil():
    return HEISENBERG, default_generators(HEISENBERG)


@pytest.fixture
def sol():
    return SOL, default_generators(SOL)


@pytest.fixture
def z2():
    return Z2, default_generators(Z2)


@pytest.fixture(autouse=True, scope="module")
def _fresh_memo():
    clear_ball_memo()
    yield


def brute_word_lengths(G, S, r):
    """Word length of every element expressible by <= r closure letters,
    by enumerating every letter sequence explicitly."""
    lengths = {E: 0}
    for n in range(1, r + 1):
        for seq in itertools.product(S.closure, repeat=n):
            g = E
            for s in seq:
                g = multiply(G, g, s)
            lengths.setdefault(g, n)
    return lengths


def edge_scan_gradient(G, S, phi):
    """Sum |phi(v) - phi(v s)| over every canonical edge touching the support."""
    seen = set()
    total = 0
    for v in phi:
        for _, s in S.positives:
            for a in (v, multiply(G, v, inverse(G, s))):
                b = multiply(G, a, s)
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                total += abs(phi.get(a, 0) - phi.get(b, 0))
    return total


def characteristic_cut(G, S, support):
    """Number of canonical edges with exactly one endpoint in the support."""
    cut = set()
    for v in support:
        for _, s in S.positives:
            w = multiply(G, v, s)
            if w not in support:
                cut.add((v, w))
            u = multiply(G, v, inverse(G, s))
            if u not in support:
                cut.add((u, v))
    return len(cut)


def naive_transport(G, phi, g):
    return sum(abs(m - phi.get(multiply(G, s, g), 0)) for s, m in phi.items())


def geodesic(G, S, ball, g):
    """Closure letters spelling a shortest word for g, by BFS-parent descent."""
    letters = []
    d = ball.word_length(g)
    while d:
        for s in S.closure:
            parent = multiply(G, g, inverse(G, s))
            if ball.word_length(parent) == d - 1:
                letters.append(s)
                g, d = parent, d - 1
                break
        else:
            raise AssertionError(f"no parent for {g}")
    return letters[::-1]


def el(p, q, k=0):
    return GroupElement(p, q, k)
