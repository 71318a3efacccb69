"""File formats: trace CSV, knowledge/state snapshots, run manifests.

Trace CSV has the fixed header below in that exact order; diagnostics that
a run does not produce are emitted as empty fields. Floats are written
with shortest round-trip formatting, so reading a trace back reproduces
the simulated values bit for bit and metrics recomputed from a file match
the in-memory ones exactly.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from rtplab.control import KnowledgeSnapshot
from rtplab.simulation import Trace
from rtplab.smrls import PartitionGrid, SmrlsState

TRACE_COLUMNS = [
    "t", "x1", "x2", "xd1", "xd2", "e1", "e2", "u",
    "w_norm", "p_true", "p_hat", "p_err", "k_e", "p_lmin", "p_lmax",
]

SNAPSHOT_MAGIC = "smrls-snapshot v1"


def _fmt(v: float) -> str:
    return repr(float(v))


def write_trace_csv(trace: Trace, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        n = trace.t.shape[0]
        p_err = trace.p_err
        for k in range(n):
            row = [
                _fmt(trace.t[k]), _fmt(trace.x[k, 0]), _fmt(trace.x[k, 1]),
                _fmt(trace.xd[k, 0]), _fmt(trace.xd[k, 1]),
                _fmt(trace.e[k, 0]), _fmt(trace.e[k, 1]), _fmt(trace.u[k]),
                _fmt(trace.w_norm[k]), _fmt(trace.p_true[k]),
                _fmt(trace.p_hat[k]), _fmt(p_err[k]),
            ]
            if trace.k_e is None:
                row += ["", "", ""]
            else:
                row += [_fmt(trace.k_e[k]), _fmt(trace.p_lmin[k]), _fmt(trace.p_lmax[k])]
            writer.writerow(row)


def read_trace_csv(path) -> dict[str, np.ndarray]:
    """Columns as float arrays; absent diagnostics come back as NaN."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != TRACE_COLUMNS:
            raise ValueError(
                f"{path}: unexpected trace header {header}, expected {TRACE_COLUMNS}"
            )
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: trace has no data rows")
    out: dict[str, np.ndarray] = {}
    for j, name in enumerate(TRACE_COLUMNS):
        out[name] = np.array(
            [float(r[j]) if r[j] != "" else np.nan for r in rows], dtype=float
        )
    return out


# -- snapshots ---------------------------------------------------------------

def save_knowledge(snapshot: KnowledgeSnapshot, path) -> None:
    """Weights-only snapshot for feedforward reuse."""
    _write_snapshot(
        path,
        method=snapshot.method,
        duration=snapshot.duration,
        weights=snapshot.weights,
        scale=snapshot.scale,
    )


def save_state(state: SmrlsState, path, method: str = "rtpl", duration: float = 0.0,
               scale=None) -> None:
    """Full memory snapshot: weights, inverse gain and occupied records."""
    _write_snapshot(
        path,
        method=method,
        duration=duration,
        weights=state.weights,
        scale=scale,
        grid=state.grid,
        gain_inv=state.inv_exact,
        p0=state.p0,
        records=[
            (int(i), float(state.rec_target[i]), state.rec_phi[i])
            for i in np.flatnonzero(state.rec_occupied)
        ],
    )


def _write_snapshot(path, *, method, duration, weights, scale=None, grid=None,
                    gain_inv=None, p0=None, records=None) -> None:
    weights = np.asarray(weights, dtype=float)
    lines = [SNAPSHOT_MAGIC]
    lines.append(f"method: {method}")
    lines.append(f"duration_s: {_fmt(duration)}")
    lines.append(f"n_weights: {weights.shape[0]}")
    if scale is not None:
        lines.append("scale: " + " ".join(_fmt(v) for v in np.asarray(scale, dtype=float)))
    if p0 is not None:
        lines.append(f"p0: {_fmt(p0)}")
    if grid is not None:
        dims = " ".join(
            f"{_fmt(lo)} {_fmt(hi)} {c}"
            for lo, hi, c in zip(grid.lows, grid.highs, grid.counts)
        )
        lines.append(f"grid: {dims}")
    lines.append("weights: " + " ".join(_fmt(w) for w in weights))
    if gain_inv is not None:
        for row in np.asarray(gain_inv, dtype=float):
            lines.append("pinv_row: " + " ".join(_fmt(v) for v in row))
    if records:
        for idx, target, phi in records:
            vals = " ".join(_fmt(v) for v in phi)
            lines.append(f"record: {idx} {_fmt(target)} {vals}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_knowledge(path) -> KnowledgeSnapshot:
    fields = _parse_snapshot(path)
    return KnowledgeSnapshot(
        weights=fields["weights"],
        method=fields["method"],
        duration=fields["duration"],
        scale=fields["scale"],
    )


def load_state(path) -> SmrlsState:
    """Rebuild a full memory state; requires grid, p0 and pinv sections."""
    fields = _parse_snapshot(path)
    for key in ("grid", "p0", "gain_inv"):
        if fields.get(key) is None:
            raise ValueError(f"{path}: snapshot lacks the '{key}' section needed for a full state")
    grid: PartitionGrid = fields["grid"]
    n = fields["weights"].shape[0]
    state = SmrlsState.initialize(fields["p0"], n, grid)
    state.weights = fields["weights"]
    state.gain_inv = fields["gain_inv"]
    state.gain = np.linalg.inv(state.gain_inv)
    state.gain = 0.5 * (state.gain + state.gain.T)
    for idx, target, phi in fields["records"]:
        if not 0 <= idx < grid.n_cells:
            raise ValueError(f"{path}: record cell {idx} outside grid")
        state.rec_phi[idx] = phi
        state.rec_target[idx] = target
        state.rec_occupied[idx] = True
    return state


def _parse_snapshot(path) -> dict:
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: not a '{SNAPSHOT_MAGIC}' file")
    fields: dict = {
        "method": None, "duration": 0.0, "weights": None, "scale": None,
        "grid": None, "p0": None, "gain_inv": None, "records": [],
    }
    pinv_rows: list[np.ndarray] = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if key == "method":
            fields["method"] = rest
        elif key == "duration_s":
            fields["duration"] = float(rest)
        elif key == "n_weights":
            fields["n_weights"] = int(rest)
        elif key == "p0":
            fields["p0"] = float(rest)
        elif key == "grid":
            parts = rest.split()
            if len(parts) % 3 != 0:
                raise ValueError(f"{path}:{lineno}: malformed grid line")
            lows, highs, counts = [], [], []
            for i in range(0, len(parts), 3):
                lows.append(float(parts[i]))
                highs.append(float(parts[i + 1]))
                counts.append(int(parts[i + 2]))
            fields["grid"] = PartitionGrid(tuple(lows), tuple(highs), tuple(counts))
        elif key == "weights":
            fields["weights"] = np.array([float(v) for v in rest.split()])
        elif key == "scale":
            fields["scale"] = np.array([float(v) for v in rest.split()])
        elif key == "pinv_row":
            pinv_rows.append(np.array([float(v) for v in rest.split()]))
        elif key == "record":
            parts = rest.split()
            fields["records"].append(
                (int(parts[0]), float(parts[1]), np.array([float(v) for v in parts[2:]]))
            )
        else:
            raise ValueError(f"{path}:{lineno}: unknown snapshot key {key!r}")
    if fields["weights"] is None:
        raise ValueError(f"{path}: snapshot has no weights line")
    if "n_weights" in fields and fields["n_weights"] != fields["weights"].shape[0]:
        raise ValueError(f"{path}: weight count does not match n_weights header")
    if pinv_rows:
        fields["gain_inv"] = np.vstack(pinv_rows)
    return fields


# -- manifest ----------------------------------------------------------------

def write_manifest(path, entries: dict) -> None:
    """Flat 'key: value' text; values are str()-ed, one per line."""
    with Path(path).open("w") as fh:
        for key, value in entries.items():
            fh.write(f"{key}: {value}\n")


def read_manifest(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        key, _, rest = line.partition(":")
        out[key.strip()] = rest.strip()
    return out
