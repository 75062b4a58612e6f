"""Pignistic decisions and frame-level recall/precision against annotations.

Frame sets follow the usual convention: C is the annotated set, R the
retrieved (decided-true) set, recall = |C n R| / |C| and precision =
|C n R| / |R|, with empty denominators scoring 1 so degenerate streams do
not divide by zero (the reported counts expose when that fires).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .masses import MassDistribution, pignistic


@dataclass(frozen=True)
class SegmentAnnotation:
    """Ground-truth true intervals (inclusive, sorted, non-overlapping)."""

    action: str
    segments: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        segments = tuple((int(s), int(e)) for s, e in self.segments)
        object.__setattr__(self, "segments", segments)
        prev_end = None
        for start, end in segments:
            if start > end:
                raise ValueError(f"segment ({start}, {end}) has start > end")
            if prev_end is not None and start <= prev_end:
                raise ValueError(f"segments must be sorted and non-overlapping: {segments}")
            prev_end = end

    def covers(self, frame: int) -> bool:
        return any(start <= frame <= end for start, end in self.segments)

    def frames(self) -> set[int]:
        out: set[int] = set()
        for start, end in self.segments:
            out.update(range(start, end + 1))
        return out

    @property
    def last_frame(self) -> int:
        return max((end for _, end in self.segments), default=-1)


def decide(mass: MassDistribution, threshold: float = 0.5) -> bool:
    """True when the pignistic probability of the affirmative hypothesis
    (first frame label) strictly exceeds the threshold."""
    return pignistic(mass)[mass.frame.labels[0]] > threshold


def decide_stream(masses: Sequence[MassDistribution], threshold: float = 0.5) -> list[bool]:
    return [decide(m, threshold) for m in masses]


@dataclass(frozen=True)
class Metrics:
    recall: float
    precision: float
    n_correct: int
    n_retrieved: int
    n_hit: int

    def to_json_dict(self) -> dict:
        return {"recall": self.recall, "precision": self.precision,
                "n_correct": self.n_correct, "n_retrieved": self.n_retrieved,
                "n_hit": self.n_hit}


def segment_metrics(decisions: Sequence[bool], truth: SegmentAnnotation) -> Metrics:
    """Frame-level recall and precision of a decision vector."""
    if truth.last_frame >= len(decisions):
        raise ValueError(
            f"decisions cover {len(decisions)} frames but the annotation "
            f"reaches frame {truth.last_frame}"
        )
    correct = truth.frames()
    retrieved = {i for i, d in enumerate(decisions) if d}
    hit = len(correct & retrieved)
    recall = hit / len(correct) if correct else 1.0
    precision = hit / len(retrieved) if retrieved else 1.0
    return Metrics(recall=recall, precision=precision, n_correct=len(correct),
                   n_retrieved=len(retrieved), n_hit=hit)


@dataclass(frozen=True)
class ActionReport:
    action: str
    before: Metrics
    after: Metrics | None

    @property
    def gain_recall(self) -> float | None:
        return None if self.after is None else self.after.recall - self.before.recall

    @property
    def gain_precision(self) -> float | None:
        return None if self.after is None else self.after.precision - self.before.precision


@dataclass(frozen=True)
class MeanRow:
    recall_before: float
    precision_before: float
    recall_after: float | None
    precision_after: float | None

    @property
    def gain_recall(self) -> float | None:
        return None if self.recall_after is None else self.recall_after - self.recall_before

    @property
    def gain_precision(self) -> float | None:
        return None if self.precision_after is None else self.precision_after - self.precision_before


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[ActionReport, ...]
    mean: MeanRow

    def to_json_dict(self) -> dict:
        actions = {}
        for row in self.rows:
            entry: dict = {"before": row.before.to_json_dict()}
            if row.after is not None:
                entry["after"] = row.after.to_json_dict()
                entry["gain"] = {"recall": row.gain_recall, "precision": row.gain_precision}
            actions[row.action] = entry
        mean: dict = {"recall_before": self.mean.recall_before,
                      "precision_before": self.mean.precision_before}
        if self.mean.recall_after is not None:
            mean.update(recall_after=self.mean.recall_after,
                        precision_after=self.mean.precision_after,
                        gain_recall=self.mean.gain_recall,
                        gain_precision=self.mean.gain_precision)
        return {"actions": actions, "mean": mean}

    def render_text(self) -> str:
        """Aligned table with avant / apres / gain columns, percentages to
        one decimal; the gain column is the difference of the displayed
        (rounded) percentages so the printed arithmetic is self-consistent."""
        width = max([len("moyenne")] + [len(r.action) for r in self.rows]) + 2
        has_after = self.mean.recall_after is not None
        header = f"{'action':<{width}}  {'avant R':>8} {'P':>6}"
        if has_after:
            header += f"   {'après R':>8} {'P':>6}   {'gain R':>8} {'P':>6}"
        lines = [header, "-" * len(header)]

        def pct(v: float) -> float:
            return round(100.0 * v, 1)

        def fmt(name: str, before: Metrics, after: Metrics | None) -> str:
            line = f"{name:<{width}}  {pct(before.recall):>8.1f} {pct(before.precision):>6.1f}"
            if after is not None:
                gr = pct(after.recall) - pct(before.recall)
                gp = pct(after.precision) - pct(before.precision)
                line += (f"   {pct(after.recall):>8.1f} {pct(after.precision):>6.1f}"
                         f"   {gr:>+8.1f} {gp:>+6.1f}")
            return line

        for row in self.rows:
            lines.append(fmt(row.action, row.before, row.after))
        mean_before = Metrics(self.mean.recall_before, self.mean.precision_before, 0, 0, 0)
        mean_after = None
        if has_after:
            mean_after = Metrics(self.mean.recall_after, self.mean.precision_after, 0, 0, 0)
        lines.append(fmt("moyenne", mean_before, mean_after))
        return "\n".join(lines)


def gain_report(before: Mapping[str, Sequence[bool]],
                after: Mapping[str, Sequence[bool]] | None,
                truth: Mapping[str, SegmentAnnotation]) -> EvalReport:
    """Score before/after decision vectors per action plus a mean row.

    `after` may be None (unfiltered-only reporting); otherwise both
    mappings must cover exactly the annotated actions.
    """
    actions = sorted(truth)
    if set(before) != set(actions) or (after is not None and set(after) != set(actions)):
        raise ValueError("decision mappings must cover exactly the annotated actions")
    rows = []
    for action in actions:
        m_before = segment_metrics(before[action], truth[action])
        m_after = segment_metrics(after[action], truth[action]) if after is not None else None
        rows.append(ActionReport(action=action, before=m_before, after=m_after))
    n = len(rows)
    mean = MeanRow(
        recall_before=sum(r.before.recall for r in rows) / n,
        precision_before=sum(r.before.precision for r in rows) / n,
        recall_after=(sum(r.after.recall for r in rows) / n) if after is not None else None,
        precision_after=(sum(r.after.precision for r in rows) / n) if after is not None else None,
    )
    return EvalReport(rows=tuple(rows), mean=mean)
