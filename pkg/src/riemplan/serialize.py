"""CSV/JSON encoding of trajectories and tables.

CSV files may start with ``# key=value`` comment lines describing the run;
the first non-comment line is the column header.  Floats are written with
17 significant digits so a write/read cycle is lossless.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .flow import Trajectory

TRAJECTORY_COLUMNS = ("t", "q1", "q2", "p1", "p2", "u1", "u2", "H", "unorm2", "qnorm2")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def trajectory_table(traj: Trajectory) -> np.ndarray:
    s = traj.states
    u = traj.control_array
    unorm2 = u[:, 0] ** 2 + u[:, 1] ** 2
    qnorm2 = s[:, 0] ** 2 + s[:, 1] ** 2
    return np.column_stack([traj.times, s, u, traj.hamiltonian, unorm2, qnorm2])


def write_csv(out: TextIO, columns: Sequence[str], rows: Iterable[Sequence],
              meta: Mapping[str, object] | None = None) -> None:
    for key, value in (meta or {}).items():
        text = repr(value) if isinstance(value, float) else fmt(value)
        out.write(f"# {key}={text}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    width = len(columns)
    for row in rows:
        if len(row) != width:
            raise ValueError(f"row has {len(row)} fields, header has {width}")
        writer.writerow([fmt(v) for v in row])


def write_trajectory_csv(out: TextIO, traj: Trajectory, meta: Mapping[str, object] | None = None) -> None:
    write_csv(out, TRAJECTORY_COLUMNS, trajectory_table(traj).tolist(), meta)


def read_csv(source: TextIO | str) -> tuple[dict[str, str], list[str], np.ndarray]:
    """Parse a file written by :func:`write_csv`; returns (meta, columns, data)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    meta: dict[str, str] = {}
    lines = []
    for line in source:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value
        elif line.strip():
            lines.append(line)
    reader = csv.reader(lines)
    columns = next(reader)
    data = np.array([[float(v) for v in row] for row in reader], dtype=float).reshape(-1, len(columns))
    return meta, columns, data


def trajectory_to_json(traj: Trajectory) -> dict:
    return {
        "frame": traj.frame_name,
        "kind": traj.kind.value,
        "times": traj.times.tolist(),
        "points": [
            {"state": {"q1": pt.state.q1, "q2": pt.state.q2},
             "costate": {"p1": pt.costate.p1, "p2": pt.costate.p2}}
            for pt in traj.points
        ],
        "controls": [{"u1": c.u1, "u2": c.u2} for c in traj.controls],
        "hamiltonian": traj.hamiltonian.tolist(),
    }


def dump_json(obj, out: TextIO) -> None:
    json.dump(obj, out, indent=2, allow_nan=True)
    out.write("\n")
