"""End-to-end orchestration: config loading, stage wiring, artifact output.

Three ingestion levels feed the same filter/decide/evaluate tail:

* a synthetic spec (generated measurement masses),
* pre-fused mass CSVs (fuzzify/fusion skipped),
* a numeric parameter trace (fuzzified and fused with the configured
  partitions and rule trees).

Per action the run writes six files into the output directory
(`<action>_raw.csv`, `_filtered.csv`, `_events.jsonl`, `_decisions.csv`,
`_report.json`, `_plot.csv`); the evaluation text table goes to stdout.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

from .errors import BeliefError, ConfigError, TotalConflictError
from .evaluation import EvalReport, SegmentAnnotation, decide, gain_report
from .filtering import BatchResult, FilterConfig, run_batch
from .fuzzy import FuzzyPartition, TrapezoidMembership
from .masses import (
    BINARY_CSV_FIELDS,
    MassDistribution,
    binary_frame,
    dempster_normalize,
    mass_to_csv_fields,
)
from .rules import FrameEvidence, RuleExpr, fuse_frame, rule_from_json, rule_params
from .synthetic import SyntheticSpec, generate_synthetic, synthetic_spec_from_dict
from .traces import ParameterTrace, write_events_jsonl, write_mass_csv

TOTAL_CONFLICT_GUARD = 1.0 - 1e-12


@dataclass(frozen=True)
class PipelineConfig:
    filter: FilterConfig
    threshold: float = 0.5
    partitions: Mapping[str, FuzzyPartition] = None
    rules: Mapping[str, RuleExpr] = None
    annotations: Mapping[str, SegmentAnnotation] | None = None
    synthetic: SyntheticSpec | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "partitions", dict(self.partitions or {}))
        object.__setattr__(self, "rules", dict(self.rules or {}))
        if not 0.0 <= self.threshold < 1.0:
            raise ConfigError(f"decision threshold must lie in [0, 1), got {self.threshold!r}")
        for action, rule in self.rules.items():
            missing = rule_params(rule) - set(self.partitions)
            if missing:
                raise ConfigError(
                    f"rule for {action!r} references parameters without a "
                    f"fuzzy partition: {sorted(missing)}"
                )


def _partition_from_json(name: str, entry) -> FuzzyPartition:
    def knots(kind: str) -> TrapezoidMembership:
        try:
            a, b, c, d = entry[kind]
        except (KeyError, TypeError, ValueError):
            raise ConfigError(
                f"partition {name!r} needs '{kind}': [a, b, c, d] (null for open knots)"
            ) from None
        return TrapezoidMembership(
            a=None if a is None else float(a), b=None if b is None else float(b),
            c=None if c is None else float(c), d=None if d is None else float(d),
        )

    domain = entry.get("domain")
    if domain is not None:
        domain = (float(domain[0]), float(domain[1]))
    try:
        return FuzzyPartition(mu_true=knots("true"), mu_false=knots("false"), domain=domain)
    except (ValueError, BeliefError) as exc:
        raise ConfigError(f"partition {name!r}: {exc}") from exc


def config_from_dict(obj: dict) -> PipelineConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config root must be a JSON object")
    try:
        filter_cfg = FilterConfig(**obj.get("filter", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad filter section: {exc}") from exc
    partitions = {
        name: _partition_from_json(name, entry)
        for name, entry in obj.get("partitions", {}).items()
    }
    rules = {action: rule_from_json(node) for action, node in obj.get("rules", {}).items()}
    annotations = None
    if "annotations" in obj:
        try:
            annotations = {
                action: SegmentAnnotation(action, tuple((int(s), int(e)) for s, e in segs))
                for action, segs in obj["annotations"].items()
            }
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad annotations section: {exc}") from exc
    synthetic = None
    if "synthetic" in obj:
        synthetic = synthetic_spec_from_dict(obj["synthetic"])
    try:
        threshold = float(obj.get("threshold", 0.5))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad threshold: {exc}") from exc
    return PipelineConfig(filter=filter_cfg, threshold=threshold, partitions=partitions,
                          rules=rules, annotations=annotations, synthetic=synthetic)


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    return config_from_dict(payload)


# --- stage wiring -----------------------------------------------------------

def fuse_trace(trace: ParameterTrace, config: PipelineConfig) -> dict[str, list[MassDistribution]]:
    """Numeric route: fuzzify every parameter per frame, then evaluate each
    action's rule tree."""
    if not config.rules:
        raise ConfigError("running from a numeric trace needs a 'rules' section")
    needed = set().union(*(rule_params(r) for r in config.rules.values()))
    missing = needed - set(trace.params)
    if missing:
        raise ConfigError(f"trace lacks parameter columns: {sorted(missing)}")
    frame = binary_frame()
    streams: dict[str, list[MassDistribution]] = {a: [] for a in config.rules}
    from .fuzzy import fuzzify_value

    for f in range(trace.n_frames):
        items = {}
        for param in needed:
            x = trace.value(f, param)
            items[param] = (fuzzify_value(x, config.partitions[param], frame),
                            trace.alpha(f, param))
        fused = fuse_frame(config.rules, FrameEvidence(items))
        for action, mass in fused.items():
            streams[action].append(mass)
    return streams


def _filter_measurement(mass: MassDistribution) -> MassDistribution:
    """The filter wants conflict-free measurements; residual fusion conflict
    is renormalized away, and a totally conflicting frame carries no usable
    information, so it degrades to ignorance."""
    if mass.masses[0] == 0.0:
        return mass
    if mass.masses[0] >= TOTAL_CONFLICT_GUARD:
        from .masses import vacuous
        return vacuous(mass.frame)
    return dempster_normalize(mass)


def _decide_raw(mass: MassDistribution, threshold: float) -> bool:
    try:
        return decide(mass, threshold)
    except TotalConflictError:
        return False


@dataclass(frozen=True)
class ActionRun:
    action: str
    raw: tuple[MassDistribution, ...]
    filtered: BatchResult | None
    decisions_before: tuple[bool, ...]
    decisions_after: tuple[bool, ...] | None


@dataclass(frozen=True)
class PipelineResult:
    runs: dict[str, ActionRun]
    report: EvalReport | None
    out_dir: Path


def run_action(action: str, raw: Sequence[MassDistribution], config: PipelineConfig,
               no_filter: bool = False, threshold: float | None = None) -> ActionRun:
    thr = config.threshold if threshold is None else threshold
    decisions_before = tuple(_decide_raw(m, thr) for m in raw)
    filtered = None
    decisions_after = None
    if not no_filter:
        measurements = [_filter_measurement(m) for m in raw]
        filtered = run_batch(measurements, config.filter)
        decisions_after = tuple(decide(m, thr) for m in filtered.outputs)
    return ActionRun(action=action, raw=tuple(raw), filtered=filtered,
                     decisions_before=decisions_before, decisions_after=decisions_after)


def _write_decisions_csv(path: Path, run: ActionRun) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if run.decisions_after is None:
            writer.writerow(["frame", "raw"])
            for i, d in enumerate(run.decisions_before):
                writer.writerow([i, int(d)])
        else:
            writer.writerow(["frame", "raw", "filtered"])
            for i, (db, da) in enumerate(zip(run.decisions_before, run.decisions_after)):
                writer.writerow([i, int(db), int(da)])


def _write_plot_csv(path: Path, run: ActionRun) -> None:
    """Raw fused masses plus the CUSUM trajectory, one row per frame."""
    assert run.filtered is not None
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("frame",) + BINARY_CSV_FIELDS + ("cusum",))
        for i, mass in enumerate(run.raw):
            writer.writerow([i] + mass_to_csv_fields(mass) + [repr(run.filtered.cusum[i])])


def write_action_artifacts(out_dir: Path, run: ActionRun,
                           report: EvalReport | None) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def target(suffix: str) -> Path:
        p = out_dir / f"{run.action}_{suffix}"
        written.append(p)
        return p

    write_mass_csv(target("raw.csv"), run.raw)
    if run.filtered is not None:
        write_mass_csv(target("filtered.csv"), run.filtered.outputs)
        write_events_jsonl(target("events.jsonl"), run.filtered.events)
        _write_plot_csv(target("plot.csv"), run)
    _write_decisions_csv(target("decisions.csv"), run)
    if report is not None:
        target("report.json").write_text(
            json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
        )
    return written


def run_pipeline(config: PipelineConfig, *, out_dir,
                 trace: ParameterTrace | None = None,
                 masses: Mapping[str, Sequence[MassDistribution]] | None = None,
                 annotations: Mapping[str, SegmentAnnotation] | None = None,
                 seed: int | None = None,
                 no_filter: bool = False,
                 threshold: float | None = None) -> PipelineResult:
    """Run the configured pipeline and write artifacts under `out_dir`.

    Exactly one input source is used: explicit `masses`, else `trace`,
    else the config's synthetic spec.
    """
    out_dir = Path(out_dir)
    truth = dict(annotations) if annotations is not None else (
        dict(config.annotations) if config.annotations else {}
    )
    if masses is not None:
        streams = {a: list(ms) for a, ms in masses.items()}
    elif trace is not None:
        streams = fuse_trace(trace, config)
    elif config.synthetic is not None:
        spec = config.synthetic if seed is None else config.synthetic.with_seed(seed)
        streams, generated_truth = generate_synthetic(spec)
        if not truth:
            truth = dict(generated_truth)
    else:
        raise ConfigError("no input: provide masses, a trace, or a 'synthetic' section")
    if not streams:
        raise ConfigError("no action streams to process")

    runs: dict[str, ActionRun] = {}
    for action in sorted(streams):
        runs[action] = run_action(action, streams[action], config,
                                  no_filter=no_filter, threshold=threshold)

    report = None
    action_reports: dict[str, EvalReport] = {}
    scored = {a: ann for a, ann in truth.items() if a in runs}
    if scored:
        before = {a: list(runs[a].decisions_before) for a in scored}
        after = None
        if not no_filter:
            after = {a: list(runs[a].decisions_after) for a in scored}
        report = gain_report(before, after, scored)
        for action in scored:
            action_reports[action] = gain_report(
                {action: before[action]},
                None if after is None else {action: after[action]},
                {action: scored[action]},
            )

    for action in sorted(runs):
        write_action_artifacts(out_dir, runs[action], action_reports.get(action))
    return PipelineResult(runs=runs, report=report, out_dir=out_dir)
