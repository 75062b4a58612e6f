"""Seeded generator of per-action measurement streams with ground truth.

Stands in for a real measurement front end: inside annotated segments the
mass centers on the affirmative singleton, outside on the negative one,
with uniform jitter eaten by doubt.  Configured false-alarm bursts flip
the mass toward the opposite singleton for a few frames, which is exactly
the disturbance the temporal filter is meant to absorb.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Mapping

from .errors import ConfigError
from .evaluation import SegmentAnnotation
from .masses import FrameOfDiscernment, MassDistribution, binary_frame


@dataclass(frozen=True)
class Burst:
    """false-alarm burst: `duration` frames from `frame` at `intensity`."""

    frame: int
    duration: int
    intensity: float

    def __post_init__(self) -> None:
        if self.duration < 1:
            raise ConfigError(f"burst duration must be >= 1, got {self.duration}")
        if not 0.0 <= self.intensity <= 1.0:
            raise ConfigError(f"burst intensity must lie in [0, 1], got {self.intensity!r}")

    def covers(self, frame: int) -> bool:
        return self.frame <= frame < self.frame + self.duration


@dataclass(frozen=True)
class ActionScript:
    segments: tuple[tuple[int, int], ...]
    bursts: tuple[Burst, ...] = ()


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int
    frames: int
    actions: Mapping[str, ActionScript]
    noise: float = 0.0
    doubt_floor: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", dict(self.actions))
        if self.frames < 1:
            raise ConfigError(f"need at least one frame, got {self.frames}")
        if not 0.0 <= self.noise <= 1.0 or not 0.0 <= self.doubt_floor <= 1.0:
            raise ConfigError("noise and doubt_floor must lie in [0, 1]")
        if self.noise + self.doubt_floor > 1.0:
            raise ConfigError("noise + doubt_floor must not exceed 1")
        for action, script in self.actions.items():
            SegmentAnnotation(action, script.segments)  # validates ordering
            for burst in script.bursts:
                if not 0 <= burst.frame and burst.frame + burst.duration <= self.frames:
                    raise ConfigError(
                        f"burst {burst} of action {action!r} leaves [0, {self.frames})"
                    )

    def with_seed(self, seed: int) -> "SyntheticSpec":
        return replace(self, seed=seed)


def generate_synthetic(
    spec: SyntheticSpec, frame: FrameOfDiscernment | None = None
) -> tuple[dict[str, list[MassDistribution]], dict[str, SegmentAnnotation]]:
    """Measurement streams and annotations per action, deterministic in the
    seed (actions are generated in sorted order, one draw per frame)."""
    fod = frame if frame is not None else binary_frame()
    rng = random.Random(spec.seed)
    streams: dict[str, list[MassDistribution]] = {}
    annotations: dict[str, SegmentAnnotation] = {}
    for action in sorted(spec.actions):
        script = spec.actions[action]
        annotation = SegmentAnnotation(action, script.segments)
        masses: list[MassDistribution] = []
        for f in range(spec.frames):
            value = 1.0 - spec.noise * rng.random() - spec.doubt_floor
            in_truth = annotation.covers(f)
            burst = next((b for b in script.bursts if b.covers(f)), None)
            if burst is not None:
                value *= burst.intensity
                state_is_true = not in_truth
            else:
                state_is_true = in_truth
            if state_is_true:
                vec = (0.0, value, 0.0, 1.0 - value)
            else:
                vec = (0.0, 0.0, value, 1.0 - value)
            masses.append(MassDistribution(fod, vec))
        streams[action] = masses
        annotations[action] = annotation
    return streams, annotations


def synthetic_spec_from_dict(obj: dict) -> SyntheticSpec:
    """Parse the JSON shape used in pipeline configs."""
    try:
        actions = {}
        for action, entry in obj.get("actions", {}).items():
            segments = tuple((int(s), int(e)) for s, e in entry.get("segments", []))
            bursts = tuple(
                Burst(frame=int(f), duration=int(d), intensity=float(i))
                for f, d, i in entry.get("false_alarms", [])
            )
            actions[action] = ActionScript(segments=segments, bursts=bursts)
        return SyntheticSpec(
            seed=int(obj["seed"]),
            frames=int(obj["frames"]),
            actions=actions,
            noise=float(obj.get("noise", 0.0)),
            doubt_floor=float(obj.get("doubt_floor", 0.0)),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid synthetic spec: {exc}") from exc
