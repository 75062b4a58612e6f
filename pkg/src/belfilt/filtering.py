"""Temporal smoothing of per-frame belief masses with change detection.

One filter instance tracks one action stream on a binary frame.  A
single-hypothesis evolution model gives a one-step prediction by
disjunctive combination; the empty-set mass produced when prediction and
measurement are pooled conjunctively measures their conflict.  That
conflict feeds a CUSUM with geometric forgetting whose warning/stop
thresholds drive a retroactive transition interval and a model switch.

Outputs from the warning frame onward are provisional until the warning
clears, a switch rewrites them, or the stream ends; `step` reports what
became final each frame so streaming callers can commit incrementally,
while `run_batch` hides the latency entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

from .errors import (
    EmptyInputError,
    FrameMismatchError,
    InconsistentPriorError,
    NonNormalizedMeasurementError,
)
from .masses import (
    FrameOfDiscernment,
    MassDistribution,
    certain,
    combine_conjunctive,
    dempster_normalize,
    vacuous,
)


@dataclass(frozen=True)
class EvolutionModel:
    """Implication rule 'the target hypothesis persists with confidence
    gamma', used as a one-step predictor."""

    target: str
    gamma: float

    def __post_init__(self) -> None:
        if not 0.0 <= float(self.gamma) <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma!r}")


@dataclass(frozen=True)
class FilterConfig:
    """Filter tuning; defaults follow the published single setting
    (forgetting 0.9, model confidences 0.9, stop 3, warning 0.5, max
    transition width 5)."""

    gamma_true: float = 0.9
    gamma_false: float = 0.9
    forgetting: float = 0.9
    t_stop: float = 3.0
    t_warn: float = 0.5
    w_max: int = 5
    init_window: int = 5
    eps_zero: float = 1e-12

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma_true <= 1.0 or not 0.0 <= self.gamma_false <= 1.0:
            raise ValueError("model confidences must lie in [0, 1]")
        if not 0.0 <= self.forgetting <= 1.0:
            raise ValueError(f"forgetting must lie in [0, 1], got {self.forgetting!r}")
        if not self.t_stop > 0.0:
            raise ValueError(f"stop threshold must be positive, got {self.t_stop!r}")
        if not 0.0 < self.t_warn < self.t_stop:
            raise ValueError(
                f"warning threshold must satisfy 0 < t_warn < t_stop, got {self.t_warn!r}"
            )
        if self.w_max < 1:
            raise ValueError(f"max transition width must be >= 1, got {self.w_max!r}")
        if self.init_window < 1:
            raise ValueError(f"init window must be >= 1, got {self.init_window!r}")
        if not 0.0 <= self.eps_zero < 1.0 or not math.isfinite(self.eps_zero):
            raise ValueError(f"eps_zero must lie in [0, 1), got {self.eps_zero!r}")

    def gamma_for(self, frame: FrameOfDiscernment, target: str) -> float:
        return self.gamma_true if target == frame.labels[0] else self.gamma_false


# --- events ---------------------------------------------------------------

@dataclass(frozen=True)
class WarningStarted:
    frame: int


@dataclass(frozen=True)
class WarningCleared:
    frame: int


@dataclass(frozen=True)
class ModelSwitch:
    f_w: int
    f_s: int
    new_target: str

    @property
    def frame(self) -> int:
        return self.f_s


@dataclass(frozen=True)
class TransitionInterval:
    """Frames [start, end] retroactively labeled as ignorance;
    end = min(f_s, f_w + w_max)."""

    start: int
    end: int

    @property
    def frame(self) -> int:
        return self.end


FilterEvent = Union[WarningStarted, WarningCleared, ModelSwitch, TransitionInterval]


def event_to_json(event: FilterEvent) -> dict:
    """One JSON-lines record per event."""
    if isinstance(event, WarningStarted):
        return {"frame": event.frame, "event": "warning"}
    if isinstance(event, WarningCleared):
        return {"frame": event.frame, "event": "warning_cleared"}
    if isinstance(event, ModelSwitch):
        return {"frame": event.f_s, "event": "model_switch",
                "f_w": event.f_w, "f_s": event.f_s, "new_target": event.new_target}
    if isinstance(event, TransitionInterval):
        return {"frame": event.end, "event": "transition_interval",
                "start": event.start, "end": event.end}
    raise TypeError(f"not a filter event: {event!r}")


# --- state ----------------------------------------------------------------

@dataclass
class PendingFrame:
    """A provisional output buffered since the warning frame, kept with its
    measurement so a later switch can recompute it."""

    frame: int
    output: MassDistribution
    measurement: MassDistribution


@dataclass
class FilterState:
    """Mutable per-stream state; advanced strictly sequentially by `step`."""

    config: FilterConfig
    model: EvolutionModel
    prev_out: MassDistribution
    cusum: float = 0.0
    warn_frame: int | None = None
    frame: int = 0
    pending: list[PendingFrame] = field(default_factory=list)

    @property
    def frame_of_discernment(self) -> FrameOfDiscernment:
        return self.prev_out.frame


@dataclass(frozen=True)
class StepResult:
    """Provisional output for the processed frame, events raised, outputs
    that became final this step, and the post-update CUSUM value."""

    output: MassDistribution
    events: tuple[FilterEvent, ...]
    finalized: tuple[tuple[int, MassDistribution], ...]
    cusum: float


@dataclass(frozen=True)
class BatchResult:
    outputs: tuple[MassDistribution, ...]
    events: tuple[FilterEvent, ...]
    cusum: tuple[float, ...]


# --- core operations -------------------------------------------------------

def model_mass(model: EvolutionModel, frame: FrameOfDiscernment) -> MassDistribution:
    """The model as a distribution: gamma on its target, the rest on the
    full frame."""
    vec = [0.0] * frame.size
    vec[frame.singleton(model.target)] = model.gamma
    vec[frame.full_mask] = 1.0 - model.gamma
    return MassDistribution(frame, tuple(vec))


def predict(prev_out: MassDistribution, model: EvolutionModel) -> MassDistribution:
    """One-step prediction: disjunctive combination of the model mass with
    the previous output, in closed form.

    The prior must be consonant with the model (focal sets within
    {target, full frame}); with gamma=1 the prediction equals the prior,
    with gamma=0 it is vacuous.
    """
    frame = prev_out.frame
    if frame.n != 2:
        raise FrameMismatchError(f"the filter runs on binary frames, got {frame.labels!r}")
    tmask = frame.singleton(model.target)
    omask = frame.full_mask ^ tmask
    if prev_out.masses[omask] > 0.0 or prev_out.masses[0] > 0.0:
        raise InconsistentPriorError(
            f"prior has mass outside {{{model.target!r}, full frame}}: {prev_out.masses!r}"
        )
    p = prev_out.masses[tmask]
    vec = [0.0] * 4
    vec[tmask] = model.gamma * p
    vec[frame.full_mask] = (1.0 - model.gamma) * p + prev_out.masses[frame.full_mask]
    return MassDistribution(frame, tuple(vec))


def cusum_update(cusum: float, forgetting: float, eps: float) -> float:
    """Conflict accumulator with geometric forgetting."""
    return cusum * forgetting + eps


def _check_measurement(meas: MassDistribution, frame: FrameOfDiscernment) -> None:
    if meas.frame != frame:
        raise FrameMismatchError(
            f"measurement frame {meas.frame.labels!r} does not match {frame.labels!r}"
        )
    if meas.masses[0] != 0.0:
        raise NonNormalizedMeasurementError(
            f"measurement carries empty-set mass {meas.masses[0]!r}"
        )


def _force_consonant(m: MassDistribution, target: str) -> MassDistribution:
    """Move mass off the non-target singleton onto the full frame.

    Only reachable when the prediction was (near-)vacuous, i.e. the model
    currently carries no commitment; keeps the output invariant (at most
    one nonzero singleton) and the next prediction well-defined.
    """
    frame = m.frame
    omask = frame.full_mask ^ frame.singleton(target)
    opp = m.masses[omask]
    if opp == 0.0:
        return m
    vec = list(m.masses)
    vec[omask] = 0.0
    vec[frame.full_mask] += opp
    return MassDistribution(frame, tuple(vec))


def _assign_output(pred: MassDistribution, fused: MassDistribution, eps: float,
                   config: FilterConfig, target: str) -> MassDistribution:
    """Trust the data when there is no conflict, else the model.

    On the no-conflict branch the (at most eps_zero) empty-set residue is
    renormalized away and the output is projected consonant, so finalized
    outputs always satisfy m(empty)=0 with a single supported singleton.
    """
    if eps <= config.eps_zero:
        return _force_consonant(dempster_normalize(fused), target)
    return pred


def _opposite(frame: FrameOfDiscernment, target: str) -> str:
    return frame.labels[1] if target == frame.labels[0] else frame.labels[0]


def step(state: FilterState, measurement: MassDistribution) -> StepResult:
    """Advance one frame: predict, measure conflict, update the CUSUM,
    assign the output and run the warning/stop logic."""
    cfg = state.config
    frame_ix = state.frame
    frame = state.frame_of_discernment
    _check_measurement(measurement, frame)

    pred = predict(state.prev_out, state.model)
    fused = combine_conjunctive(pred, measurement)
    eps = fused.masses[0]
    state.cusum = cusum_update(state.cusum, cfg.forgetting, eps)
    cusum_now = state.cusum
    out = _assign_output(pred, fused, eps, cfg, state.model.target)

    events: list[FilterEvent] = []
    finalized: list[tuple[int, MassDistribution]] = []

    if state.warn_frame is None:
        if state.cusum >= cfg.t_warn:
            state.warn_frame = frame_ix
            events.append(WarningStarted(frame_ix))
    elif state.cusum < cfg.t_warn:
        # forgetting expired the conflict: commit the buffer unchanged
        finalized.extend((p.frame, p.output) for p in state.pending)
        state.pending.clear()
        state.warn_frame = None
        events.append(WarningCleared(frame_ix))

    if state.cusum >= cfg.t_stop:
        out = _switch(state, frame_ix, measurement, out, events, finalized)
    else:
        if state.warn_frame is None:
            finalized.append((frame_ix, out))
        else:
            state.pending.append(PendingFrame(frame_ix, out, measurement))
        state.prev_out = out

    state.frame = frame_ix + 1
    return StepResult(output=out, events=tuple(events),
                      finalized=tuple(finalized), cusum=cusum_now)


def _switch(state: FilterState, f_s: int, measurement: MassDistribution,
            provisional: MassDistribution, events: list, finalized: list) -> MassDistribution:
    """Stop threshold reached: rewrite the transition interval as ignorance,
    replay any frames past its cap under the new model, reset the CUSUM."""
    cfg = state.config
    frame = state.frame_of_discernment
    f_w = state.warn_frame if state.warn_frame is not None else f_s
    upper = min(f_s, f_w + cfg.w_max)
    new_target = _opposite(frame, state.model.target)
    new_model = EvolutionModel(new_target, cfg.gamma_for(frame, new_target))
    events.append(ModelSwitch(f_w=f_w, f_s=f_s, new_target=new_target))
    events.append(TransitionInterval(start=f_w, end=upper))

    records = list(state.pending)
    records.append(PendingFrame(f_s, provisional, measurement))
    assert records[0].frame == f_w and records[-1].frame == f_s

    ignorance = vacuous(frame)
    prev = ignorance
    for rec in records:
        if rec.frame <= upper:
            finalized.append((rec.frame, ignorance))
        else:
            pred = predict(prev, new_model)
            fused = combine_conjunctive(pred, rec.measurement)
            eps = fused.masses[0]
            prev = _assign_output(pred, fused, eps, cfg, new_target)
            finalized.append((rec.frame, prev))

    state.model = new_model
    state.cusum = 0.0
    state.warn_frame = None
    state.pending = []
    state.prev_out = prev
    return finalized[-1][1]


def _dry_run_cusum(measurements: Sequence[MassDistribution], config: FilterConfig,
                   frame: FrameOfDiscernment, target: str) -> float:
    """Score one candidate model over the first frames: run the filter
    recurrence from full commitment to the target (thresholds ignored) and
    return the terminal CUSUM."""
    model = EvolutionModel(target, config.gamma_for(frame, target))
    prev = certain(frame, target)
    cs = 0.0
    for meas in measurements:
        _check_measurement(meas, frame)
        pred = predict(prev, model)
        fused = combine_conjunctive(pred, meas)
        eps = fused.masses[0]
        cs = cusum_update(cs, config.forgetting, eps)
        prev = _assign_output(pred, fused, eps, config, target)
    return cs


def initialize(measurements: Sequence[MassDistribution], config: FilterConfig,
               *, start_frame: int = 0) -> FilterState:
    """Pick the evolution model that conflicts least with the first
    `init_window` measurements (ties go to the negative model) and return
    a fresh state at `start_frame` with a vacuous prior and zero CUSUM."""
    seq = list(measurements)
    if not seq:
        raise EmptyInputError("cannot initialize the filter from an empty stream")
    window = seq[: config.init_window]
    frame = window[0].frame
    if frame.n != 2:
        raise FrameMismatchError(f"the filter runs on binary frames, got {frame.labels!r}")
    true_label, false_label = frame.labels
    cs_true = _dry_run_cusum(window, config, frame, true_label)
    cs_false = _dry_run_cusum(window, config, frame, false_label)
    target = true_label if cs_true < cs_false else false_label
    model = EvolutionModel(target, config.gamma_for(frame, target))
    return FilterState(config=config, model=model, prev_out=vacuous(frame),
                       frame=start_frame)


def run_batch(measurements: Iterable[MassDistribution],
              config: FilterConfig | None = None) -> BatchResult:
    """Filter a whole stream: initialize, step through every frame, commit
    whatever is still provisional at end-of-stream unchanged."""
    seq = list(measurements)
    if not seq:
        raise EmptyInputError("cannot filter an empty stream")
    cfg = config if config is not None else FilterConfig()
    state = initialize(seq, cfg)
    outputs: dict[int, MassDistribution] = {}
    events: list[FilterEvent] = []
    cusum: list[float] = []
    for meas in seq:
        result = step(state, meas)
        cusum.append(result.cusum)
        events.extend(result.events)
        for ix, out in result.finalized:
            outputs[ix] = out
    for rec in state.pending:
        outputs[rec.frame] = rec.output
    ordered = tuple(outputs[i] for i in range(len(seq)))
    return BatchResult(outputs=ordered, events=tuple(events), cusum=tuple(cusum))


def config_with(config: FilterConfig, **overrides) -> FilterConfig:
    """Convenience wrapper around dataclasses.replace."""
    return replace(config, **overrides)
