"""Build figures from rtplab trace and checkpoint CSVs.

Four figure kinds:

* ``learning``     -- tracking error, weight norm and feedforward
  approximation panels from the learning-phase traces;
* ``reuse``        -- the same panels from the reuse-phase traces;
* ``accumulation`` -- integrated-squared-error vs. training duration from
  a checkpoint table;
* ``portrait``     -- the reference trajectory in the (position, velocity)
  plane.

Rendering is deterministic: fixed figure size, fixed style, no timestamps,
so identical inputs give identical image files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# Published trace schema (fixed column order) and checkpoint schema.
TRACE_COLUMNS = [
    "t", "x1", "x2", "xd1", "xd2", "e1", "e2", "u",
    "w_norm", "p_true", "p_hat", "p_err", "k_e", "p_lmin", "p_lmax",
]
CHECKPOINT_COLUMNS = ["method", "train_s", "ise_e1", "ise_p_err"]

FIGURE_KINDS = ("learning", "reuse", "accumulation", "portrait")

FIGSIZE = (10.0, 3.2)
DPI = 110
METHOD_COLORS = {"pd": "tab:gray", "sgdl": "tab:orange", "rtpl": "tab:blue"}


class SchemaError(ValueError):
    """Input file does not match the published schema; carries per-column detail."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class FigureSpec:
    """One figure: kind, labelled input CSVs, output image path."""

    kind: str
    inputs: tuple[str, ...]
    labels: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}, expected {FIGURE_KINDS}")
        if not self.inputs:
            raise ValueError("figure needs at least one input file")
        if len(self.labels) != len(self.inputs):
            raise ValueError("labels and inputs must pair up")


def read_trace(path) -> dict[str, np.ndarray]:
    """Trace CSV as float arrays; raises SchemaError with per-column detail."""
    path = Path(path)
    if not path.exists():
        raise SchemaError([f"{path}: file does not exist"])
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError([f"{path}: file is empty"])
        errors = []
        missing = [c for c in TRACE_COLUMNS if c not in header]
        unexpected = [c for c in header if c not in TRACE_COLUMNS]
        for col in missing:
            errors.append(f"{path}: missing column {col!r}")
        for col in unexpected:
            errors.append(f"{path}: unexpected column {col!r}")
        if header != TRACE_COLUMNS and not errors:
            errors.append(f"{path}: columns out of order: {header}")
        if errors:
            raise SchemaError(errors)
        rows = list(reader)
    if not rows:
        raise SchemaError([f"{path}: no data rows"])
    out = {}
    for j, name in enumerate(TRACE_COLUMNS):
        try:
            out[name] = np.array(
                [float(r[j]) if r[j] != "" else np.nan for r in rows]
            )
        except (ValueError, IndexError) as exc:
            raise SchemaError([f"{path}: column {name!r} is not numeric: {exc}"])
    return out


def read_checkpoints(path) -> list[dict]:
    path = Path(path)
    if not path.exists():
        raise SchemaError([f"{path}: file does not exist"])
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CHECKPOINT_COLUMNS:
            raise SchemaError(
                [f"{path}: expected columns {CHECKPOINT_COLUMNS}, got {reader.fieldnames}"]
            )
        try:
            rows = [
                {
                    "method": r["method"],
                    "train_s": float(r["train_s"]),
                    "ise_e1": float(r["ise_e1"]),
                    "ise_p_err": float(r["ise_p_err"]),
                }
                for r in reader
            ]
        except (TypeError, ValueError) as exc:
            raise SchemaError([f"{path}: non-numeric checkpoint row: {exc}"])
    if not rows:
        raise SchemaError([f"{path}: no checkpoint rows"])
    return rows


def render(spec: FigureSpec) -> dict:
    """Render one figure; returns {'output', 'series', 'points'} on success."""
    if spec.kind in ("learning", "reuse"):
        result = _render_phase_panel(spec)
    elif spec.kind == "accumulation":
        result = _render_accumulation(spec)
    else:
        result = _render_portrait(spec)
    return result


def _save(fig, spec: FigureSpec, series: int, points: int) -> dict:
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=DPI, metadata={"Software": "rtplab-plots"})
    plt.close(fig)
    return {"output": str(out), "series": series, "points": points}


def _render_phase_panel(spec: FigureSpec) -> dict:
    traces = [read_trace(p) for p in spec.inputs]
    fig, axes = plt.subplots(1, 3, figsize=FIGSIZE, constrained_layout=True)
    series = points = 0
    for label, tr in zip(spec.labels, traces):
        color = METHOD_COLORS.get(label)
        axes[0].plot(tr["t"], tr["e1"], label=label, color=color, linewidth=0.9)
        axes[1].plot(tr["t"], tr["w_norm"], label=label, color=color, linewidth=0.9)
        axes[2].plot(tr["t"], tr["p_hat"], label=label, color=color, linewidth=0.9)
        series += 3
        points += 3 * tr["t"].shape[0]
    axes[2].plot(
        traces[0]["t"], traces[0]["p_true"], "k--", linewidth=0.8, label="true"
    )
    series += 1
    points += traces[0]["t"].shape[0]
    axes[0].set_xlabel("t [s]")
    axes[0].set_ylabel("tracking error e1")
    axes[1].set_xlabel("t [s]")
    axes[1].set_ylabel("|W|")
    axes[2].set_xlabel("t [s]")
    axes[2].set_ylabel("feedforward")
    for ax in axes:
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    fig.suptitle(f"{spec.kind} phase")
    return _save(fig, spec, series, points)


def _render_accumulation(spec: FigureSpec) -> dict:
    rows = read_checkpoints(spec.inputs[0])
    methods = sorted({r["method"] for r in rows})
    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.2), constrained_layout=True)
    series = points = 0
    for method in methods:
        sel = sorted((r for r in rows if r["method"] == method), key=lambda r: r["train_s"])
        ts = [r["train_s"] for r in sel]
        color = METHOD_COLORS.get(method)
        axes[0].plot(ts, [r["ise_e1"] for r in sel], "o-", label=method, color=color)
        axes[1].plot(ts, [r["ise_p_err"] for r in sel], "o-", label=method, color=color)
        series += 2
        points += 2 * len(ts)
    axes[0].set_ylabel("tracking ISE")
    axes[1].set_ylabel("approximation ISE")
    for ax in axes:
        ax.set_xlabel("training duration [s]")
        ax.set_yscale("log")
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    fig.suptitle("knowledge accuracy vs. training duration")
    return _save(fig, spec, series, points)


def _render_portrait(spec: FigureSpec) -> dict:
    tr = read_trace(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(4.2, 4.0), constrained_layout=True)
    ax.plot(tr["xd1"], tr["xd2"], linewidth=0.7, color="tab:blue")
    ax.set_xlabel("reference position")
    ax.set_ylabel("reference velocity")
    ax.grid(alpha=0.3)
    fig.suptitle(f"reference portrait ({spec.labels[0]})")
    return _save(fig, spec, series=1, points=tr["xd1"].shape[0])


def discover_specs(scenario_dir, out_dir=None) -> list[FigureSpec]:
    """Standard figure set for a scenario output directory."""
    scenario_dir = Path(scenario_dir)
    out_dir = Path(out_dir) if out_dir else scenario_dir / "figures"
    specs = []
    for phase in ("learn", "reuse"):
        found = [
            (m, scenario_dir / f"{phase}_{m}.csv")
            for m in ("pd", "sgdl", "rtpl")
            if (scenario_dir / f"{phase}_{m}.csv").exists()
        ]
        if found:
            specs.append(
                FigureSpec(
                    kind="learning" if phase == "learn" else "reuse",
                    inputs=tuple(str(p) for _, p in found),
                    labels=tuple(m for m, _ in found),
                    output=str(out_dir / f"{phase}_phase.png"),
                )
            )
    portrait_source = next(
        (
            scenario_dir / name
            for name in ("learn_rtpl.csv", "learn_pd.csv", "reuse_pd.csv")
            if (scenario_dir / name).exists()
        ),
        None,
    )
    if portrait_source is not None:
        specs.append(
            FigureSpec(
                kind="portrait",
                inputs=(str(portrait_source),),
                labels=(portrait_source.stem,),
                output=str(out_dir / "trajectory_portrait.png"),
            )
        )
    checkpoints = scenario_dir / "checkpoints.csv"
    if checkpoints.exists():
        specs.append(
            FigureSpec(
                kind="accumulation",
                inputs=(str(checkpoints),),
                labels=("checkpoints",),
                output=str(out_dir / "accumulation.png"),
            )
        )
    if not specs:
        raise SchemaError([f"{scenario_dir}: no renderable files found"])
    return specs
