"""Varopoulos transport of a domain by right translation.

T(D, g) = sum over sigma in supp(phi) of |phi(sigma) - phi(sigma g)|.

With r minimal such that |B(r)| >= 2 mass(D), the mean of T over B(r)
is at least mass/2 and T(D, g) <= |g| * gradient(D) for every g.
Both are checked here in exact integer arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._arrays import right_multiply
from .cayley import DEFAULT_CAP, CayleyBall, enumerate_ball
from .domain import Domain, gradient
from .errors import InvariantViolation, NotCharacteristic, WitnessNotFound
from .group import GroupElement, multiply

log = logging.getLogger(__name__)

# max entries of one (gamma x sigma) block
BLOCK = 1 << 20


def _transport_block(D: Domain, gp, gq, gk) -> np.ndarray:
    gp, gq, gk = (np.asarray(x, dtype=np.int64)[:, None] for x in (gp, gq, gk))
    m = tuple(c[None, :] for c in D.powers)
    moved = right_multiply(D.group, D.p[None, :], D.q[None, :], D.k[None, :], gp, gq, gk, m)
    return np.abs(D.mult[None, :] - D.values_at(*moved)).sum(axis=1)


def transport_many(D: Domain, P, Q, K) -> np.ndarray:
    """T(D, g) for every g = (P[i], Q[i], K[i])."""
    P, Q, K = (np.asarray(x, dtype=np.int64).ravel() for x in (P, Q, K))
    step = max(1, BLOCK // max(1, len(D)))
    out = np.empty(len(P), dtype=np.int64)
    for lo in range(0, len(P), step):
        hi = lo + step
        out[lo:hi] = _transport_block(D, P[lo:hi], Q[lo:hi], K[lo:hi])
    return out


def transport(D: Domain, g: GroupElement) -> int:
    return int(transport_many(D, [g.p], [g.q], [g.k])[0])


def transport_set_difference(D: Domain, g: GroupElement) -> int:
    """|{sigma in D : sigma g not in D}| for a characteristic domain."""
    if not D.is_characteristic:
        raise NotCharacteristic("set-difference transport needs all multiplicities equal to 1")
    support = set(D.support)
    return sum(1 for s in support if multiply(D.group, s, g) not in support)


def select_radius(D: Domain, cap: int = DEFAULT_CAP) -> int:
    """Least r with |B(r)| >= 2 mass(D)."""
    target = 2 * D.mass
    r = 0
    while True:
        ball = enumerate_ball(D.group, D.gens, r, cap)
        if ball.sizes[-1] >= target:
            return r
        r += 1


def _ball(D: Domain, r: int, ball: CayleyBall | None, cap: int) -> CayleyBall:
    if ball is not None and ball.radius >= r:
        return ball.truncate(r)
    return enumerate_ball(D.group, D.gens, r, cap)


def ball_transports(D: Domain, r: int, ball: CayleyBall | None = None, cap: int = DEFAULT_CAP):
    """(B(r), T(D, g) for every g in B(r) in canonical order)."""
    B = _ball(D, r, ball, cap)
    return B, transport_many(D, B.p, B.q, B.k)


def average_transport(D: Domain, r: int, ball: CayleyBall | None = None, cap: int = DEFAULT_CAP) -> Fraction:
    B, T = ball_transports(D, r, ball, cap)
    if len(B) < 2 * D.mass:
        log.warning("radius %d is below the admissible radius; the averaging bound need not hold", r)
    return Fraction(int(T.sum()), len(B))


def find_witness(D: Domain, r: int, ball: CayleyBall | None = None, cap: int = DEFAULT_CAP):
    """First g in canonical order of B(r) with 2 T(D, g) >= mass(D)."""
    B = _ball(D, r, ball, cap)
    step = max(1, BLOCK // max(1, len(D)))
    for lo in range(0, len(B), step):
        T = transport_many(D, B.p[lo : lo + step], B.q[lo : lo + step], B.k[lo : lo + step])
        hits = np.flatnonzero(2 * T >= D.mass)
        if len(hits):
            i = lo + int(hits[0])
            return B.element(i), int(T[hits[0]])
    raise WitnessNotFound(f"no g in B({r}) with 2T >= {D.mass}; is r below the admissible radius?")


@dataclass(frozen=True)
class TransportReport:
    group: str
    radius: int
    ball_size: int
    mass: int
    gradient: int
    total_transport: int
    average: Fraction
    witness: GroupElement
    witness_length: int
    witness_transport: int
    max_ratio: Fraction
    admissible: bool

    @property
    def averaging_bound_holds(self) -> bool:
        return 2 * self.total_transport >= self.ball_size * self.mass

    @property
    def length_bound_holds(self) -> bool:
        return self.max_ratio <= 1

    @property
    def witness_holds(self) -> bool:
        return 2 * self.witness_transport >= self.mass

    def to_record(self) -> dict:
        rat = lambda x: f"{x.numerator}/{x.denominator}"  # noqa: E731
        w = self.witness
        return {
            "group": self.group,
            "radius": self.radius,
            "admissible": self.admissible,
            "ball_size": self.ball_size,
            "mass": self.mass,
            "gradient": self.gradient,
            "total_transport": self.total_transport,
            "average": rat(self.average),
            "witness": [w.p, w.q, w.k],
            "witness_length": self.witness_length,
            "witness_transport": self.witness_transport,
            "max_ratio": rat(self.max_ratio),
            "averaging_bound_holds": self.averaging_bound_holds,
            "length_bound_holds": self.length_bound_holds,
        }


def verify_bounds(
    D: Domain, r: int | None = None, cap: int = DEFAULT_CAP, check: bool = True
) -> TransportReport:
    """Compute T over B(r) and check both transport inequalities exactly.

    r defaults to select_radius(D). With check=True a failed inequality on
    an admissible radius raises InvariantViolation.
    """
    if r is None:
        r = select_radius(D, cap)
    B, T = ball_transports(D, r, cap=cap)
    grad = gradient(D)
    admissible = len(B) >= 2 * D.mass
    L = B.dist
    bad = np.flatnonzero(T > L * grad)
    if len(bad) and check:
        i = int(bad[0])
        raise InvariantViolation(
            f"length bound T <= l*gradient fails at {B.element(i)!r}: T={int(T[i])}, l={int(L[i])}, gradient={grad}"
        )
    # exact max of T/(l*grad) over g != e: best T per length, then compare fractions
    best = Fraction(0)
    for d in range(1, r + 1):
        lo, hi = B.sizes[d - 1], B.sizes[d]
        if hi > lo:
            best = max(best, Fraction(int(T[lo:hi].max()), d * grad))
    hits = np.flatnonzero(2 * T >= D.mass)
    if len(hits):
        wi = int(hits[0])
        witness, wt = B.element(wi), int(T[wi])
    elif check and admissible:
        raise WitnessNotFound(f"no g in B({r}) with 2T >= {D.mass}")
    else:
        wi, witness, wt = 0, B.element(0), 0
    report = TransportReport(
        group=str(D.group),
        radius=r,
        ball_size=len(B),
        mass=D.mass,
        gradient=grad,
        total_transport=int(T.sum()),
        average=Fraction(int(T.sum()), len(B)),
        witness=witness,
        witness_length=int(B.dist[wi]),
        witness_transport=wt,
        max_ratio=best,
        admissible=admissible,
    )
    if check and admissible and not report.averaging_bound_holds:
        raise InvariantViolation(
            f"averaging bound fails: 2*{report.total_transport} < {report.ball_size}*{report.mass}"
        )
    return report
