"""Command-line front end.

Subcommands: `simulate` (write synthetic measurement streams), `run`
(full pipeline from any ingestion level), `filter` (temporal stage alone
on a pre-fused mass CSV) and `eval` (score mass streams against
annotations).  Exit codes: 0 success, 1 configuration error, 2 IO/parse
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BeliefError, ConfigError
from .evaluation import decide, gain_report
from .filtering import run_batch
from .masses import BINARY_CSV_FIELDS, mass_to_csv_fields
from .pipeline import load_config, run_action, run_pipeline, write_action_artifacts
from .traces import (
    load_trace,
    read_annotations,
    read_mass_csv,
    write_annotations,
    write_events_jsonl,
    write_mass_csv,
)

MEASUREMENTS_SUFFIX = "_measurements.csv"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belfilt",
        description="Belief-mass fusion, temporal filtering and evaluation "
                    "of per-frame evidence streams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write synthetic measurement streams")
    sim.add_argument("--config", required=True, help="pipeline config JSON")
    sim.add_argument("--seed", type=int, default=None, help="override the spec seed")
    sim.add_argument("--out-dir", required=True)

    run = sub.add_parser("run", help="full pipeline: ingest, fuse, filter, decide, evaluate")
    run.add_argument("--config", required=True)
    run.add_argument("--trace", default=None, help="numeric parameter trace CSV")
    run.add_argument("--masses-dir", default=None,
                     help="directory of pre-fused <action>_measurements.csv files")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--no-filter", action="store_true",
                     help="skip the temporal filter; report unfiltered columns only")
    run.add_argument("--threshold", type=float, default=None,
                     help="override the decision threshold")
    run.add_argument("--out-dir", required=True)

    filt = sub.add_parser("filter", help="run the temporal filter on a mass CSV")
    filt.add_argument("--config", required=True)
    filt.add_argument("--masses", required=True, help="pre-fused mass CSV for one action")
    filt.add_argument("--action", default="action")
    filt.add_argument("--out-dir", required=True)

    ev = sub.add_parser("eval", help="score mass streams against annotations")
    ev.add_argument("--truth", required=True, help="annotations JSON")
    ev.add_argument("--before", required=True, help="mass CSV scored as 'avant'")
    ev.add_argument("--after", default=None, help="mass CSV scored as 'après'")
    ev.add_argument("--action", default=None,
                    help="action id (needed when the truth file has several)")
    ev.add_argument("--threshold", type=float, default=0.5)
    ev.add_argument("--out-dir", required=True)
    return parser


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    if config.synthetic is None:
        raise ConfigError("config has no 'synthetic' section to simulate from")
    spec = config.synthetic if args.seed is None else config.synthetic.with_seed(args.seed)
    from .synthetic import generate_synthetic

    streams, annotations = generate_synthetic(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for action in sorted(streams):
        write_mass_csv(out_dir / f"{action}{MEASUREMENTS_SUFFIX}", streams[action])
    write_annotations(out_dir / "annotations.json", annotations)
    print(f"wrote {len(streams)} stream(s) to {out_dir}")
    return 0


def _read_masses_dir(path: Path) -> dict:
    files = sorted(path.glob(f"*{MEASUREMENTS_SUFFIX}"))
    if not files:
        raise ConfigError(f"{path}: no *{MEASUREMENTS_SUFFIX} files found")
    return {f.name[: -len(MEASUREMENTS_SUFFIX)]: read_mass_csv(f) for f in files}


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.trace is not None and args.masses_dir is not None:
        raise ConfigError("--trace and --masses-dir are mutually exclusive")
    trace = load_trace(args.trace) if args.trace is not None else None
    masses = None
    annotations = None
    if args.masses_dir is not None:
        masses_dir = Path(args.masses_dir)
        masses = _read_masses_dir(masses_dir)
        ann_path = masses_dir / "annotations.json"
        if ann_path.exists():
            annotations = read_annotations(ann_path)
    result = run_pipeline(config, out_dir=args.out_dir, trace=trace, masses=masses,
                          annotations=annotations, seed=args.seed,
                          no_filter=args.no_filter, threshold=args.threshold)
    if result.report is not None:
        print(result.report.render_text())
    print(f"artifacts in {result.out_dir}")
    return 0


def _cmd_filter(args) -> int:
    config = load_config(args.config)
    masses = read_mass_csv(args.masses)
    batch = run_batch(masses, config.filter)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_mass_csv(out_dir / f"{args.action}_filtered.csv", batch.outputs)
    write_events_jsonl(out_dir / f"{args.action}_events.jsonl", batch.events)
    import csv as _csv

    with (out_dir / f"{args.action}_plot.csv").open("w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(("frame",) + BINARY_CSV_FIELDS + ("cusum",))
        for i, mass in enumerate(masses):
            writer.writerow([i] + mass_to_csv_fields(mass) + [repr(batch.cusum[i])])
    print(f"filtered {len(masses)} frame(s), {len(batch.events)} event(s); "
          f"artifacts in {out_dir}")
    return 0


def _cmd_eval(args) -> int:
    truth = read_annotations(args.truth)
    if args.action is not None:
        if args.action not in truth:
            raise ConfigError(f"action {args.action!r} not present in {args.truth}")
        action = args.action
    elif len(truth) == 1:
        action = next(iter(truth))
    else:
        raise ConfigError("truth file has several actions; pick one with --action")
    before = [decide(m, args.threshold) for m in read_mass_csv(args.before)]
    after = None
    if args.after is not None:
        after = {action: [decide(m, args.threshold) for m in read_mass_csv(args.after)]}
    report = gain_report({action: before}, after, {action: truth[action]})
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{action}_report.json").write_text(
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
    )
    print(report.render_text())
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "run": _cmd_run,
    "filter": _cmd_filter,
    "eval": _cmd_eval,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BeliefError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
