"""Numeric-to-symbolic conversion via trapezoidal membership functions.

A parameter value is mapped to a conflict-free mass on a binary action
frame: the true/false memberships feed the two singletons and whatever
they leave uncommitted goes to the full frame as doubt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonFiniteInputError, PartitionOverlapError
from .masses import FrameOfDiscernment, MassDistribution

#: Admissible excess of mu_true + mu_false over 1.
OVERLAP_TOL = 1e-9

#: Grid resolution of the overlap scan, as a fraction of the domain width.
SCAN_STEP = 1e-3


@dataclass(frozen=True)
class TrapezoidMembership:
    """Standard trapezoid: 0 below a, linear a->b, 1 on [b, c], linear c->d,
    0 above d.  A None a/b pair opens the left plateau to -inf, a None c/d
    pair opens the right plateau to +inf."""

    a: float | None
    b: float | None
    c: float | None
    d: float | None

    def __post_init__(self) -> None:
        if (self.a is None) != (self.b is None) or (self.c is None) != (self.d is None):
            raise ValueError("open plateaus need both knots of the pair set to None")
        knots = [
            -math.inf if self.a is None else self.a,
            -math.inf if self.b is None else self.b,
            math.inf if self.c is None else self.c,
            math.inf if self.d is None else self.d,
        ]
        if any(k != k for k in knots):
            raise ValueError("membership knots must not be NaN")
        if not (knots[0] <= knots[1] <= knots[2] <= knots[3]):
            raise ValueError(f"knots must be ordered a <= b <= c <= d, got {knots}")

    def __call__(self, x: float) -> float:
        if self.a is not None:
            if x < self.a:
                return 0.0
            if x < self.b:
                return (x - self.a) / (self.b - self.a)
        if self.d is not None:
            if x > self.d:
                return 0.0
            if x > self.c:
                return (self.d - x) / (self.d - self.c)
        return 1.0

    def finite_knots(self) -> list[float]:
        return [k for k in (self.a, self.b, self.c, self.d) if k is not None]


@dataclass(frozen=True)
class PartitionReport:
    """Outcome of an overlap scan: the x where 1 - muT - muF is smallest."""

    ok: bool
    worst_x: float
    worst_total: float

    @property
    def margin(self) -> float:
        return 1.0 - self.worst_total


def _scan_domain(mu_true: TrapezoidMembership, mu_false: TrapezoidMembership,
                 domain: tuple[float, float] | None) -> tuple[float, float]:
    if domain is not None:
        lo, hi = float(domain[0]), float(domain[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise ValueError(f"invalid scan domain {domain!r}")
        return lo, hi
    knots = mu_true.finite_knots() + mu_false.finite_knots()
    if not knots:
        return 0.0, 1.0
    return min(knots), max(knots)


def validate_memberships(mu_true: TrapezoidMembership, mu_false: TrapezoidMembership,
                         domain: tuple[float, float] | None = None) -> PartitionReport:
    """Check mu_true + mu_false <= 1 over the domain.

    The sum of two trapezoids is piecewise linear, so knots are checked
    exactly; a dense grid (step 1e-3 of the domain width) backs that up
    against configuration typos.
    """
    lo, hi = _scan_domain(mu_true, mu_false, domain)
    points = [k for k in mu_true.finite_knots() + mu_false.finite_knots() if lo <= k <= hi]
    points.extend((lo, hi))
    if hi > lo:
        step = (hi - lo) * SCAN_STEP
        points.extend(lo + i * step for i in range(1, 1000))
    worst_x, worst_total = lo, -math.inf
    for x in points:
        total = mu_true(x) + mu_false(x)
        if total > worst_total:
            worst_x, worst_total = x, total
    return PartitionReport(ok=worst_total <= 1.0 + OVERLAP_TOL,
                           worst_x=worst_x, worst_total=worst_total)


@dataclass(frozen=True)
class FuzzyPartition:
    """True/false memberships for one parameter, overlap-checked on
    construction over `domain` (default: hull of the finite knots)."""

    mu_true: TrapezoidMembership
    mu_false: TrapezoidMembership
    domain: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.domain is not None:
            object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))
        report = validate_memberships(self.mu_true, self.mu_false, self.domain)
        if not report.ok:
            raise PartitionOverlapError(
                f"memberships sum to {report.worst_total!r} at x={report.worst_x!r}"
            )


def validate_partition(p: FuzzyPartition,
                       domain: tuple[float, float] | None = None) -> PartitionReport:
    """Re-scan a partition, optionally over a different domain."""
    return validate_memberships(p.mu_true, p.mu_false, domain if domain is not None else p.domain)


def fuzzify_value(x: float, p: FuzzyPartition, frame: FrameOfDiscernment) -> MassDistribution:
    """Mass on a binary frame from one numeric value: memberships feed the
    singletons, the complement goes to the full frame, nothing on empty."""
    if frame.n != 2:
        raise ValueError(f"fuzzification needs a binary frame, got {frame.labels!r}")
    x = float(x)
    if not math.isfinite(x):
        raise NonFiniteInputError(f"parameter value {x!r} is not finite")
    mt = p.mu_true(x)
    mf = p.mu_false(x)
    omega = 1.0 - (mt + mf)
    if omega < -OVERLAP_TOL:
        raise PartitionOverlapError(f"memberships sum to {mt + mf!r} at x={x!r}")
    return MassDistribution(frame, (0.0, mt, mf, max(0.0, omega)))
