"""Empirical isoperimetric profiles and exponent fits.

For a family of domains the profiler records (gradient, mass) pairs and
fits ln(mass) against ln(gradient). Upper bounds to compare against:
mass <~ gradient^2 on Z^2, gradient^(4/3) on Nil lattices and
gradient * ln(gradient) on Sol lattices. Fits are float; everything
upstream of them is exact.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cayley import DEFAULT_CAP, GeneratorSet, enumerate_ball
from .domain import Domain, from_ball, from_box, gradient, random_connected
from .errors import DegenerateFit, DegenerateInput
from .group import TorusBundleGroup
from .transport import select_radius, verify_bounds

log = logging.getLogger(__name__)


class Family(enum.Enum):
    BALLS = "balls"
    BOXES = "boxes"
    RANDOM = "random"


class ExponentClaim(enum.Enum):
    QUADRATIC = "quadratic"
    FOUR_THIRDS = "four-thirds"
    NLOGN = "nlogn"


CLAIMS = {"abelian": ExponentClaim.QUADRATIC, "nil": ExponentClaim.FOUR_THIRDS, "sol": ExponentClaim.NLOGN}


@dataclass(frozen=True)
class ProfileParams:
    seed: int = 0
    max_mult: int = 1
    # random family: domain n has target mass random_mass_step * max(n, 1)
    random_mass_step: int = 20
    cap: int = DEFAULT_CAP
    # transport is computed when |supp D| * |B(r)| stays within this budget
    transport_budget: int = 500_000_000


@dataclass(frozen=True)
class ProfilePoint:
    family: str
    n: int
    mass: int
    gradient: int
    radius: int
    avg_transport: Fraction | None = None
    witness_length: int | None = None

    def __post_init__(self):
        if self.mass < 1 or self.gradient < 1:
            raise DegenerateInput(f"profile point needs mass, gradient >= 1, got {self.mass}, {self.gradient}")


@dataclass
class ProfileReport:
    group: str
    family: str
    points: list[ProfilePoint]
    loglog_slope: float | None = None
    loglog_intercept: float | None = None
    r_squared: float | None = None
    nlogn_ratios: list[float] = field(default_factory=list)
    exponent_claim: ExponentClaim | None = None

    @classmethod
    def build(cls, G: TorusBundleGroup, family: Family | str, points: list[ProfilePoint]) -> ProfileReport:
        rep = cls(str(G), Family(family).value, points, exponent_claim=CLAIMS.get(G.geometry))
        try:
            rep.loglog_slope, rep.loglog_intercept, rep.r_squared = fit_loglog_slope(points)
        except DegenerateFit as exc:
            log.info("no log-log fit: %s", exc)
        try:
            rep.nlogn_ratios = fit_nlogn_ratios(points)
        except DegenerateInput as exc:
            log.info("no n ln n ratios: %s", exc)
        return rep

    def summary(self) -> str:
        def fmt(x):
            return "none" if x is None else f"{x:.9g}"

        lines = [
            f"group={self.group}",
            f"family={self.family}",
            f"points={len(self.points)}",
            f"exponent_claim={self.exponent_claim.value if self.exponent_claim else 'none'}",
            f"loglog_slope={fmt(self.loglog_slope)}",
            f"loglog_intercept={fmt(self.loglog_intercept)}",
            f"r_squared={fmt(self.r_squared)}",
        ]
        if self.nlogn_ratios:
            lo, hi = min(self.nlogn_ratios), max(self.nlogn_ratios)
            lines += [
                "nlogn_ratios=" + ",".join(f"{x:.9g}" for x in self.nlogn_ratios),
                f"nlogn_ratio_spread={hi / lo:.9g}",
            ]
        return "\n".join(lines) + "\n"


def family_domain(G, S, family: Family, n: int, params: ProfileParams, ball=None) -> Domain:
    if family is Family.BALLS:
        return from_ball(ball if ball is not None else enumerate_ball(G, S, n, params.cap), n)
    if family is Family.BOXES:
        return from_box(G, S, (-n, -n, -n), (n, n, n))
    return random_connected(G, S, params.random_mass_step * max(n, 1), params.max_mult, params.seed + n)


def profile_point(D: Domain, family: str, n: int, params: ProfileParams) -> ProfilePoint:
    r = select_radius(D, params.cap)
    grad = gradient(D)
    work = len(D) * enumerate_ball(D.group, D.gens, r, params.cap).sizes[-1]
    if work > params.transport_budget:
        log.info("%s n=%d: transport skipped (work %d over budget)", family, n, work)
        return ProfilePoint(family, n, D.mass, grad, r)
    rep = verify_bounds(D, r, params.cap)
    return ProfilePoint(family, n, D.mass, grad, r, rep.average, rep.witness_length)


def isoperimetric_profile(
    G: TorusBundleGroup,
    S: GeneratorSet,
    family: Family | str,
    n_range: Iterable[int],
    params: ProfileParams | None = None,
) -> list[ProfilePoint]:
    family = Family(family)
    params = params or ProfileParams()
    ns = list(n_range)
    if not ns:
        raise DegenerateInput("empty n range")
    ball = enumerate_ball(G, S, max(ns), params.cap) if family is Family.BALLS else None
    return [profile_point(family_domain(G, S, family, n, params, ball), family.value, n, params) for n in ns]


def _ols(x: np.ndarray, y: np.ndarray):
    X = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    ss_res = float((resid**2).sum())
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return float(slope), float(intercept), r2


def fit_loglog_slope(points: Sequence[ProfilePoint]):
    """OLS of ln(mass) on ln(gradient). Returns (slope, intercept, r_squared)."""
    if len({p.gradient for p in points}) < 3:
        raise DegenerateFit("need at least 3 distinct gradients")
    x = np.log([float(p.gradient) for p in points])
    y = np.log([float(p.mass) for p in points])
    return _ols(x, y)


def fit_nlogn_ratios(points: Sequence[ProfilePoint]) -> list[float]:
    if any(p.gradient < 2 for p in points):
        raise DegenerateInput("n ln n ratios need every gradient >= 2")
    return [p.mass / (p.gradient * math.log(p.gradient)) for p in points]


def _window(series: Sequence[int], r_lo: int, r_hi: int):
    if r_lo < 2 or r_hi > len(series) - 1:
        raise DegenerateFit(f"window [{r_lo}, {r_hi}] outside [2, {len(series) - 1}]")
    if r_hi - r_lo + 1 < 3:
        raise DegenerateFit("need at least 3 radii to fit")
    r = np.arange(r_lo, r_hi + 1, dtype=float)
    return r, np.log(np.asarray(series[r_lo : r_hi + 1], dtype=float))


def growth_exponent(series: Sequence[int], r_lo: int, r_hi: int):
    """Polynomial degree estimate: OLS slope of ln|B(r)| on ln r. Returns (slope, r_squared)."""
    r, y = _window(series, r_lo, r_hi)
    slope, _, r2 = _ols(np.log(r), y)
    return slope, r2


def exponential_growth_rate(series: Sequence[int], r_lo: int, r_hi: int):
    """OLS of ln|B(r)| on r. Returns (rate, intercept, r_squared)."""
    r, y = _window(series, r_lo, r_hi)
    return _ols(r, y)


CSV_HEADER = ["group", "family", "n", "mass", "gradient", "radius", "avg_num", "avg_den", "witness_len"]


def points_csv(group: str, points: Sequence[ProfilePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        avg = p.avg_transport
        w.writerow(
            [
                group,
                p.family,
                p.n,
                p.mass,
                p.gradient,
                p.radius,
                "" if avg is None else avg.numerator,
                "" if avg is None else avg.denominator,
                "" if p.witness_length is None else p.witness_length,
            ]
        )
    return buf.getvalue()
