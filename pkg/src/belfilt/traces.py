"""File formats: numeric parameter traces, mass CSVs, event logs,
annotations.

CSV dialect is plain comma-separated with a header row and '.' decimals.
Floats are written with repr() so emitted files re-ingest bit-identically.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import RaggedRowsError, TraceParseError
from .evaluation import SegmentAnnotation
from .filtering import FilterEvent, event_to_json
from .masses import (
    BINARY_CSV_FIELDS,
    FrameOfDiscernment,
    MassDistribution,
    binary_frame,
    mass_from_csv_fields,
    mass_to_csv_fields,
)

ALPHA_PREFIX = "alpha_"
FRAME_COLUMN = "frame"


@dataclass(frozen=True)
class ParameterTrace:
    """Rectangular per-frame numeric values plus per-parameter reliability
    coefficients (1.0 where the trace declares none)."""

    params: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    alphas: tuple[tuple[float, ...], ...]

    @property
    def n_frames(self) -> int:
        return len(self.values)

    def value(self, frame: int, param: str) -> float:
        return self.values[frame][self.params.index(param)]

    def alpha(self, frame: int, param: str) -> float:
        return self.alphas[frame][self.params.index(param)]


def load_trace(path) -> ParameterTrace:
    """Read a numeric trace CSV.

    Columns: optional `frame` (must then count contiguously from 0), one
    column per parameter, and optional `alpha_<param>` reliability columns.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TraceParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        params = [h for h in header if h != FRAME_COLUMN and not h.startswith(ALPHA_PREFIX)]
        if not params:
            raise TraceParseError(f"{path}: no parameter columns in header {header!r}")
        if len(set(header)) != len(header):
            raise TraceParseError(f"{path}: duplicate columns in header {header!r}")
        for h in header:
            if h.startswith(ALPHA_PREFIX) and h[len(ALPHA_PREFIX):] not in params:
                raise TraceParseError(
                    f"{path}: column {h!r} has no matching parameter column"
                )
        col_index = {h: i for i, h in enumerate(header)}

        values: list[tuple[float, ...]] = []
        alphas: list[tuple[float, ...]] = []
        for row_num, row in enumerate(reader):
            if len(row) != len(header):
                raise RaggedRowsError(
                    f"{path}: row {row_num} has {len(row)} cells, header has {len(header)}"
                )

            def cell(column: str) -> float:
                raw = row[col_index[column]]
                try:
                    return float(raw)
                except ValueError:
                    raise TraceParseError(
                        f"{path}: row {row_num}, column {column!r}: "
                        f"cannot parse {raw!r} as a number"
                    ) from None

            if FRAME_COLUMN in col_index and int(cell(FRAME_COLUMN)) != row_num:
                raise TraceParseError(
                    f"{path}: row {row_num}: frame index {row[col_index[FRAME_COLUMN]]!r} "
                    f"breaks the contiguous count from 0"
                )
            values.append(tuple(cell(p) for p in params))
            alphas.append(tuple(
                cell(ALPHA_PREFIX + p) if ALPHA_PREFIX + p in col_index else 1.0
                for p in params
            ))
    return ParameterTrace(params=tuple(params), values=tuple(values), alphas=tuple(alphas))


# --- mass streams ----------------------------------------------------------

def write_mass_csv(path, masses: Sequence[MassDistribution]) -> None:
    """Binary-frame mass stream: frame,m_empty,m_R,m_F,m_omega."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow((FRAME_COLUMN,) + BINARY_CSV_FIELDS)
        for i, m in enumerate(masses):
            writer.writerow([i] + mass_to_csv_fields(m))


def read_mass_csv(path, frame: FrameOfDiscernment | None = None) -> list[MassDistribution]:
    path = Path(path)
    fod = frame if frame is not None else binary_frame()
    expected = (FRAME_COLUMN,) + BINARY_CSV_FIELDS
    masses: list[MassDistribution] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(h.strip() for h in next(reader))
        except StopIteration:
            raise TraceParseError(f"{path}: empty file") from None
        if header != expected:
            raise TraceParseError(f"{path}: expected header {expected!r}, got {header!r}")
        for row_num, row in enumerate(reader):
            if len(row) != len(expected):
                raise RaggedRowsError(
                    f"{path}: row {row_num} has {len(row)} cells, expected {len(expected)}"
                )
            try:
                masses.append(mass_from_csv_fields(fod, row[1:]))
            except ValueError:
                raise TraceParseError(f"{path}: row {row_num}: non-numeric mass cell") from None
    return masses


# --- events and annotations -------------------------------------------------

def write_events_jsonl(path, events: Sequence[FilterEvent]) -> None:
    path = Path(path)
    with path.open("w") as fh:
        for event in events:
            fh.write(json.dumps(event_to_json(event)) + "\n")


def read_events_jsonl(path) -> list[dict]:
    path = Path(path)
    with path.open() as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_annotations(path, annotations: Mapping[str, SegmentAnnotation]) -> None:
    path = Path(path)
    payload = {action: [list(seg) for seg in ann.segments]
               for action, ann in sorted(annotations.items())}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_annotations(path) -> dict[str, SegmentAnnotation]:
    path = Path(path)
    payload = json.loads(path.read_text())
    return {
        action: SegmentAnnotation(action, tuple((int(s), int(e)) for s, e in segments))
        for action, segments in payload.items()
    }
