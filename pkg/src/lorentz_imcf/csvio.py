"""CSV time series and curve snapshots.

Reals are written with 17 significant digits, which round-trips every
double exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .diagnostics import DiagnosticsRecord
from .geometry import embed_graph

SERIES_HEADER = DiagnosticsRecord.field_names()
SNAPSHOT_HEADER = ["xi", "u", "x1", "x2"]


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_rows(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_series_csv(result, path):
    """One row per DiagnosticsRecord in step order. Accepts a RunResult or a list."""
    series = getattr(result, "series", result)
    _write_rows(path, SERIES_HEADER, (rec.as_tuple() for rec in series))


def read_series_csv(path):
    records = []
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != SERIES_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        for row in reader:
            values = {}
            for name, text in zip(header, row):
                if name == "step":
                    values[name] = int(text)
                elif name == "all_ok":
                    values[name] = text == "true"
                else:
                    values[name] = float(text)
            records.append(DiagnosticsRecord(**values))
    return records


def write_snapshot(state, path):
    """Columns xi, u, x1, x2: the profile and its embedded curve in the plane."""
    points = embed_graph(state)
    _write_rows(path, SNAPSHOT_HEADER,
                zip(state.xi, state.u, points[:, 0], points[:, 1]))


def read_snapshot(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(SNAPSHOT_HEADER)}
