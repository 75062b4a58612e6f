"""Unnormalized belief-mass arithmetic on small finite frames of discernment.

Subsets are addressed by n-bit masks (bit i set means label i is a member),
so mask 0 is the empty set and mask 2**n - 1 the whole frame.  Mass vectors
are stored densely in mask order; on a binary frame a vector reads
``[m(empty), m(first), m(second), m(both)]``.

Mass on the empty set is allowed throughout (open-world reading): sources
are built conflict-free, but combination results legitimately carry
conflict, which downstream change detection consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    AlphaOutOfRangeError,
    BadSubsetError,
    FrameMismatchError,
    NegativeMassError,
    NotNormalizedError,
    TotalConflictError,
)

#: Tolerance on the unit-sum invariant at construction time.
SUM_TOL = 1e-9

#: Empty-set mass at or above 1 - this is treated as total conflict.
TOTAL_CONFLICT_TOL = 1e-12

#: Frames are capped so dense powerset vectors stay small.
MAX_LABELS = 16

#: Conventional labels of a binary action frame; the first label is the
#: affirmative hypothesis ("the action is happening").
TRUE_LABEL = "R"
FALSE_LABEL = "F"

SubsetLike = "int | str | Iterable[str]"


@dataclass(frozen=True)
class FrameOfDiscernment:
    """Ordered, pairwise-distinct hypothesis labels (1 to 16 of them)."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= MAX_LABELS:
            raise BadSubsetError(
                f"frame needs between 1 and {MAX_LABELS} labels, got {len(labels)}"
            )
        if len(set(labels)) != len(labels):
            raise BadSubsetError(f"labels must be pairwise distinct: {labels!r}")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        """Number of subsets, 2**n."""
        return 1 << len(self.labels)

    @property
    def full_mask(self) -> int:
        return self.size - 1

    def singleton(self, label: str) -> int:
        """Mask of the singleton {label}."""
        try:
            return 1 << self.labels.index(label)
        except ValueError:
            raise BadSubsetError(f"unknown label {label!r} for frame {self.labels!r}") from None

    def mask_of(self, subset) -> int:
        """Coerce a subset reference (mask, label, 'A|B' string, or iterable
        of labels) to its bit mask."""
        if isinstance(subset, bool):
            raise BadSubsetError(f"invalid subset reference {subset!r}")
        if isinstance(subset, int):
            if not 0 <= subset < self.size:
                raise BadSubsetError(f"mask {subset} out of range for {self.n}-label frame")
            return subset
        if isinstance(subset, str):
            if subset == "":
                return 0
            mask = 0
            for part in subset.split("|"):
                mask |= self.singleton(part)
            return mask
        try:
            parts = list(subset)
        except TypeError:
            raise BadSubsetError(f"invalid subset reference {subset!r}") from None
        mask = 0
        for part in parts:
            mask |= self.singleton(part)
        return mask

    def members(self, mask: int) -> tuple[str, ...]:
        """Labels contained in the subset `mask`."""
        if not 0 <= mask < self.size:
            raise BadSubsetError(f"mask {mask} out of range for {self.n}-label frame")
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def subset_label(self, mask: int) -> str:
        """'|'-joined member labels; the empty set renders as ''."""
        return "|".join(self.members(mask))


def binary_frame(true_label: str = TRUE_LABEL, false_label: str = FALSE_LABEL) -> FrameOfDiscernment:
    """Two-hypothesis frame; the first label is the affirmative one."""
    return FrameOfDiscernment((true_label, false_label))


@dataclass(frozen=True)
class MassDistribution:
    """Nonnegative masses over the powerset of a frame, summing to 1.

    Mass on the empty set is permitted; ``is_normalized`` reports whether
    it is exactly zero.
    """

    frame: FrameOfDiscernment
    masses: tuple[float, ...]

    def __post_init__(self) -> None:
        masses = tuple(float(v) for v in self.masses)
        object.__setattr__(self, "masses", masses)
        if len(masses) != self.frame.size:
            raise BadSubsetError(
                f"expected {self.frame.size} masses for {self.frame.n}-label frame, "
                f"got {len(masses)}"
            )
        for mask, value in enumerate(masses):
            if value < 0.0:
                raise NegativeMassError(
                    f"negative mass {value!r} on subset {self.frame.subset_label(mask)!r}"
                )
        total = sum(masses)
        if abs(total - 1.0) > SUM_TOL:
            raise NotNormalizedError(f"masses sum to {total!r}, expected 1 within {SUM_TOL}")

    def mass(self, subset) -> float:
        return self.masses[self.frame.mask_of(subset)]

    @property
    def conflict(self) -> float:
        """Mass on the empty set."""
        return self.masses[0]

    @property
    def is_normalized(self) -> bool:
        """True when no mass sits on the empty set."""
        return self.masses[0] == 0.0

    @property
    def is_consonant_binary(self) -> bool:
        """Binary frame, conflict-free, at most one nonzero singleton."""
        if self.frame.n != 2 or self.masses[0] != 0.0:
            return False
        return self.masses[1] == 0.0 or self.masses[2] == 0.0

    def focal_elements(self) -> tuple[int, ...]:
        return tuple(mask for mask, v in enumerate(self.masses) if v > 0.0)


def _require_same_frame(m1: MassDistribution, m2: MassDistribution) -> FrameOfDiscernment:
    if m1.frame != m2.frame:
        raise FrameMismatchError(
            f"cannot combine masses on frames {m1.frame.labels!r} and {m2.frame.labels!r}"
        )
    return m1.frame


def make_mass(frame: FrameOfDiscernment, assignments: Mapping[object, float]) -> MassDistribution:
    """Build a distribution from a subset->mass mapping.

    Unassigned subsets get zero.  Raises NegativeMassError, BadSubsetError
    or NotNormalizedError when the assignment is unusable.
    """
    vec = [0.0] * frame.size
    for subset, value in assignments.items():
        value = float(value)
        if value < 0.0:
            raise NegativeMassError(f"negative mass {value!r} on subset {subset!r}")
        vec[frame.mask_of(subset)] += value
    return MassDistribution(frame, tuple(vec))


def vacuous(frame: FrameOfDiscernment) -> MassDistribution:
    """Total ignorance: all mass on the full frame."""
    vec = [0.0] * frame.size
    vec[frame.full_mask] = 1.0
    return MassDistribution(frame, tuple(vec))


def certain(frame: FrameOfDiscernment, subset) -> MassDistribution:
    """All mass on one subset."""
    vec = [0.0] * frame.size
    vec[frame.mask_of(subset)] = 1.0
    return MassDistribution(frame, tuple(vec))


def combine_conjunctive(m1: MassDistribution, m2: MassDistribution) -> MassDistribution:
    """Conjunctive pooling: products accumulate on subset intersections.

    Both sources are assumed reliable; disagreement shows up as mass on
    the empty set, which is kept (no renormalization).
    """
    frame = _require_same_frame(m1, m2)
    out = [0.0] * frame.size
    for c, wc in enumerate(m1.masses):
        if wc == 0.0:
            continue
        for d, wd in enumerate(m2.masses):
            if wd != 0.0:
                out[c & d] += wc * wd
    return MassDistribution(frame, tuple(out))


def combine_disjunctive(m1: MassDistribution, m2: MassDistribution) -> MassDistribution:
    """Disjunctive pooling: products accumulate on subset unions.

    Cautious rule (at least one source reliable); it never creates
    conflict from conflict-free inputs and never grants a singleton more
    mass than both inputs jointly support.
    """
    frame = _require_same_frame(m1, m2)
    out = [0.0] * frame.size
    for c, wc in enumerate(m1.masses):
        if wc == 0.0:
            continue
        for d, wd in enumerate(m2.masses):
            if wd != 0.0:
                out[c | d] += wc * wd
    return MassDistribution(frame, tuple(out))


def discount(m: MassDistribution, alpha: float) -> MassDistribution:
    """Weaken a source by reliability alpha.

    Every proper subset keeps the fraction alpha of its mass; the
    remainder moves to the full frame.  alpha=1 is the identity, alpha=0
    yields the vacuous distribution.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRangeError(f"reliability must lie in [0, 1], got {alpha!r}")
    full = m.frame.full_mask
    vec = [alpha * v for v in m.masses]
    vec[full] = (1.0 - alpha) + alpha * m.masses[full]
    return MassDistribution(m.frame, tuple(vec))


def conflict_mass(m: MassDistribution) -> float:
    """Mass on the empty set."""
    return m.masses[0]


def _check_not_total_conflict(m: MassDistribution) -> float:
    empty = m.masses[0]
    if empty >= 1.0 - TOTAL_CONFLICT_TOL:
        raise TotalConflictError(f"empty-set mass {empty!r} leaves nothing to redistribute")
    return empty


def pignistic(m: MassDistribution) -> dict[str, float]:
    """Probability over labels: each subset's mass is split equally among
    its members, then the whole is renormalized by 1 - m(empty)."""
    empty = _check_not_total_conflict(m)
    denom = 1.0 - empty
    probs = {label: 0.0 for label in m.frame.labels}
    for mask, value in enumerate(m.masses):
        if mask == 0 or value == 0.0:
            continue
        members = m.frame.members(mask)
        share = value / len(members)
        for label in members:
            probs[label] += share
    return {label: p / denom for label, p in probs.items()}


def dempster_normalize(m: MassDistribution) -> MassDistribution:
    """Remove empty-set mass by scaling every other subset by 1/(1 - m(empty)).

    Comparison baseline to the conflict-keeping pipeline; the identity on
    already-normalized inputs.
    """
    empty = _check_not_total_conflict(m)
    scale = 1.0 / (1.0 - empty)
    vec = [v * scale for v in m.masses]
    vec[0] = 0.0
    return MassDistribution(m.frame, tuple(vec))


# --- serialization -------------------------------------------------------

#: Column order of the binary-frame CSV row format.
BINARY_CSV_FIELDS = ("m_empty", "m_R", "m_F", "m_omega")


def mass_to_csv_fields(m: MassDistribution) -> list[str]:
    """Mask-ordered repr() floats; round-trips bit-identically."""
    return [repr(v) for v in m.masses]


def mass_from_csv_fields(frame: FrameOfDiscernment, fields) -> MassDistribution:
    return MassDistribution(frame, tuple(float(f) for f in fields))


def mass_to_json_map(m: MassDistribution) -> dict[str, float]:
    """Nonzero subsets keyed by '|'-joined labels ('' for the empty set)."""
    return {
        m.frame.subset_label(mask): value
        for mask, value in enumerate(m.masses)
        if value != 0.0
    }


def mass_from_json_map(frame: FrameOfDiscernment, mapping: Mapping[str, float]) -> MassDistribution:
    return make_mass(frame, mapping)
