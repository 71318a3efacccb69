"""Scenario orchestration: learning phase, knowledge extraction, reuse phase.

Four predefined scenarios:

* ``A`` -- repetitive task: sinusoidal reference, learn then reuse on the
  same reference.
* ``B`` -- nonrepetitive task: random-spline reference, learn then reuse on
  the same spline.
* ``C`` -- half-length perturbation at t = 50 s during learning; reuse on
  the perturbed plant.
* ``D`` -- learn on a long random spline, snapshot the weights every 30 s,
  evaluate every snapshot on the growing-sinusoid test reference.

``custom`` runs a user-supplied trajectory with the same phases as A/B.
"""

from __future__ import annotations

import csv
import dataclasses
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import rtplab
from rtplab.config import (
    CHECKPOINT_INTERVAL,
    DT,
    EVAL_DURATION,
    GAIN_K1,
    GAIN_K2,
    INPUT_HIGH,
    INPUT_LOW,
    NEURONS_PER_DIM,
    PARTITIONS_PER_DIM,
    SGDL_EXTRACT_WINDOW,
    ScenarioSpec,
    TrajectorySpec,
)
from rtplab.control import (
    BacksteppingGains,
    FrozenLearner,
    KnowledgeSnapshot,
    PdLearner,
    RtplLearner,
    SgdLearner,
    extract_final,
    extract_integral,
)
from rtplab.dynamics import (
    GrowingSinusoid,
    PendulumParams,
    RandomSpline,
    Sinusoid,
    Trajectory,
    pendulum_plant,
    perturbation_schedule,
)
from rtplab.rbf import LatticeSpec, build_lattice
from rtplab.simulation import Metrics, SimConfig, Trace, run_closed_loop
from rtplab.smrls import PartitionGrid, SmrlsState
from rtplab.traceio import (
    save_knowledge,
    save_state,
    write_manifest,
    write_trace_csv,
)


@dataclass
class RunManifest:
    """What a scenario produced: resolved config, files, metric summary."""

    spec: ScenarioSpec
    version: str
    wall_clock_s: float
    files: list[str] = field(default_factory=list)
    metrics: dict[tuple[str, str], Metrics] = field(default_factory=dict)
    checkpoints: list[dict] = field(default_factory=list)
    traces: dict[tuple[str, str], Trace] = field(default_factory=dict)


def default_network(sigma: float):
    spec = LatticeSpec(
        lows=(INPUT_LOW, INPUT_LOW),
        highs=(INPUT_HIGH, INPUT_HIGH),
        counts=(NEURONS_PER_DIM, NEURONS_PER_DIM),
    )
    return build_lattice(spec, sigma)


def default_grid() -> PartitionGrid:
    return PartitionGrid(
        lows=(INPUT_LOW, INPUT_LOW),
        highs=(INPUT_HIGH, INPUT_HIGH),
        counts=(PARTITIONS_PER_DIM, PARTITIONS_PER_DIM),
    )


def make_trajectory(tspec: TrajectorySpec) -> Trajectory:
    if tspec.kind == "sinusoid":
        return Sinusoid(duration=tspec.duration)
    if tspec.kind == "growing":
        return GrowingSinusoid(duration=tspec.duration)
    return RandomSpline(seed=tspec.seed, knots=tspec.knots, duration=tspec.duration)


def _spline_knots(duration: float, scenario: str) -> int:
    from rtplab.config import DEFAULT_SPLINE_KNOTS, SPLINE_KNOTS_PER_100S
    density = SPLINE_KNOTS_PER_100S.get(scenario, DEFAULT_SPLINE_KNOTS)
    return max(6, round(density * duration / 100.0))


def _learning_setup(spec: ScenarioSpec, duration: float):
    """(plant, trajectory) for the learning phase."""
    if spec.scenario in ("A", "C"):
        traj = Sinusoid(duration=duration)
    elif spec.scenario in ("B", "D"):
        traj = RandomSpline(
            seed=spec.seed,
            knots=_spline_knots(duration, spec.scenario),
            duration=duration,
        )
    else:
        traj = make_trajectory(spec.trajectory)
    if spec.scenario == "C":
        plant = pendulum_plant(schedule=perturbation_schedule)
    else:
        plant = pendulum_plant()
    return plant, traj


def _reuse_setup(spec: ScenarioSpec, learn_traj: Trajectory):
    """(plant, trajectory, duration) for the reuse phase."""
    if spec.scenario == "C":
        plant = pendulum_plant(PendulumParams(half_length=0.8))
    else:
        plant = pendulum_plant()
    if spec.scenario == "D":
        traj = GrowingSinusoid(duration=EVAL_DURATION)
        return plant, traj, EVAL_DURATION
    return plant, learn_traj, learn_traj.duration


def _make_learner(method: str, spec: ScenarioSpec, n_weights: int):
    if method == "pd":
        return PdLearner()
    if method == "sgdl":
        return SgdLearner(gamma=spec.gamma)
    if method == "rtpl":
        memory = SmrlsState.initialize(spec.p0, n_weights, default_grid())
        return RtplLearner(eta0=spec.eta0, t0_ramp=spec.t0_ramp, memory=memory)
    raise ValueError(f"unknown method {method!r}")


def _extract(
    method: str, trace: Trace, learner, duration: float, scale
) -> KnowledgeSnapshot:
    if method == "rtpl":
        return extract_final(learner.memory, duration, scale=scale)
    window = min(SGDL_EXTRACT_WINDOW, duration)
    return extract_integral(trace.t, trace.weights, duration - window, window)


def _in_training_frame(traj, snapshot: KnowledgeSnapshot):
    """Reuse trajectory rebuilt so normalization matches the training run."""
    if snapshot.scale is None:
        return traj
    return dataclasses.replace(traj, scale=np.array(snapshot.scale, dtype=float))


def run_scenario(spec: ScenarioSpec, quiet: bool = False) -> RunManifest:
    started = time.perf_counter()
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    duration = spec.resolved_duration()

    gains = BacksteppingGains((GAIN_K1, GAIN_K2))
    learn_plant, learn_traj = _learning_setup(spec, duration)
    reuse_plant, reuse_traj, reuse_duration = _reuse_setup(spec, learn_traj)
    learn_cfg = SimConfig(dt=DT, duration=duration)
    reuse_cfg = SimConfig(dt=DT, duration=reuse_duration)

    manifest = RunManifest(spec=spec, version=rtplab.__version__, wall_clock_s=0.0)

    def _log(msg):
        if not quiet:
            print(msg)

    def _store(phase: str, method: str, trace: Trace, filename: str):
        write_trace_csv(trace, out_dir / filename)
        manifest.files.append(filename)
        manifest.metrics[(phase, method)] = Metrics.from_trace(trace)
        manifest.traces[(phase, method)] = trace

    knowledge: dict[str, KnowledgeSnapshot] = {}
    learners: dict[str, object] = {}
    learn_traces: dict[str, Trace] = {}
    for method in spec.methods:
        _log(f"[{spec.scenario}] learning: {method}")
        learner = _make_learner(method, spec, default_network(spec.sigma).size)
        net = default_network(spec.sigma)
        trace = run_closed_loop(learn_plant, learn_traj, net, learner, gains, learn_cfg)
        _store("learn", method, trace, f"learn_{method}.csv")
        learners[method] = learner
        learn_traces[method] = trace
        if method in ("sgdl", "rtpl"):
            knowledge[method] = _extract(
                method, trace, learner, duration, learn_traj.scale
            )

    if "rtpl" in knowledge:
        name = "knowledge_rtpl.txt"
        save_state(
            learners["rtpl"].memory, out_dir / name, method="rtpl",
            duration=duration, scale=learn_traj.scale,
        )
        manifest.files.append(name)
    if "sgdl" in knowledge:
        name = "knowledge_sgdl.txt"
        save_knowledge(knowledge["sgdl"], out_dir / name)
        manifest.files.append(name)

    if spec.scenario == "D":
        _run_checkpoints(
            spec, manifest, learn_traces, learn_traj, reuse_plant, reuse_traj,
            reuse_cfg, gains, duration, out_dir, _log,
        )

    for method in spec.methods:
        _log(f"[{spec.scenario}] reuse: {method}")
        traj = reuse_traj
        if method == "pd":
            learner = PdLearner()
        elif method in knowledge:
            if spec.scenario == "D":
                continue  # reuse traces come from the final checkpoint
            learner = FrozenLearner(
                knowledge[method].weights, normalized_input=(method == "rtpl")
            )
            if method == "rtpl":
                traj = _in_training_frame(reuse_traj, knowledge[method])
        else:
            continue
        net = default_network(spec.sigma)
        trace = run_closed_loop(reuse_plant, traj, net, learner, gains, reuse_cfg)
        _store("reuse", method, trace, f"reuse_{method}.csv")

    _write_metrics_csv(out_dir / "metrics.csv", manifest)
    manifest.files.append("metrics.csv")
    if manifest.checkpoints:
        _write_checkpoints_csv(out_dir / "checkpoints.csv", manifest.checkpoints)
        manifest.files.append("checkpoints.csv")

    manifest.wall_clock_s = time.perf_counter() - started
    _write_manifest_file(out_dir / "manifest.txt", manifest)
    manifest.files.append("manifest.txt")
    return manifest


def _run_checkpoints(
    spec, manifest, learn_traces, learn_traj, reuse_plant, reuse_traj,
    reuse_cfg, gains, duration, out_dir, _log,
) -> None:
    """Evaluate periodically snapshotted weights on the test reference.

    Weight snapshots follow each method's own extraction rule: the memory
    learner's weights are taken as-is at the checkpoint instant, the
    gradient-descent weights are averaged over the preceding window.
    """
    n_checks = int(duration // CHECKPOINT_INTERVAL)
    check_times = [CHECKPOINT_INTERVAL * (i + 1) for i in range(n_checks)]
    train_scale = learn_traj.scale
    for method in ("rtpl", "sgdl"):
        if method not in learn_traces:
            continue
        trace = learn_traces[method]
        for t_ck in check_times:
            idx = int(round(t_ck / trace.dt))
            if method == "rtpl":
                snap = KnowledgeSnapshot(
                    weights=trace.weights[idx], method="rtpl", duration=t_ck,
                    scale=train_scale,
                )
            else:
                window = min(SGDL_EXTRACT_WINDOW, t_ck)
                snap = extract_integral(trace.t, trace.weights, t_ck - window, window)
                snap = KnowledgeSnapshot(snap.weights, "sgdl", t_ck)
            name = f"knowledge_{method}_{int(t_ck):03d}s.txt"
            save_knowledge(snap, out_dir / name)
            manifest.files.append(name)

            _log(f"[D] checkpoint {method} @ {t_ck:.0f}s")
            net = default_network(spec.sigma)
            frozen = FrozenLearner(snap.weights, normalized_input=(method == "rtpl"))
            traj = _in_training_frame(reuse_traj, snap) if method == "rtpl" else reuse_traj
            eval_trace = run_closed_loop(
                reuse_plant, traj, net, frozen, gains, reuse_cfg
            )
            metrics = Metrics.from_trace(eval_trace)
            manifest.checkpoints.append(
                {
                    "method": method,
                    "train_s": t_ck,
                    "ise_e1": metrics.ise_e1,
                    "ise_p_err": metrics.ise_p_err,
                }
            )
            if t_ck == check_times[-1]:
                write_trace_csv(eval_trace, out_dir / f"reuse_{method}.csv")
                manifest.files.append(f"reuse_{method}.csv")
                manifest.metrics[("reuse", method)] = metrics
                manifest.traces[("reuse", method)] = eval_trace


def _write_metrics_csv(path, manifest: RunManifest) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["phase", "method", "ise_e1", "ise_p_err", "max_abs_e1"])
        for (phase, method), m in sorted(manifest.metrics.items()):
            writer.writerow(
                [phase, method, repr(m.ise_e1), repr(m.ise_p_err), repr(m.max_abs_e1)]
            )


def _write_checkpoints_csv(path, checkpoints: list[dict]) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "train_s", "ise_e1", "ise_p_err"])
        for row in checkpoints:
            writer.writerow(
                [row["method"], repr(float(row["train_s"])),
                 repr(row["ise_e1"]), repr(row["ise_p_err"])]
            )


def _write_manifest_file(path, manifest: RunManifest) -> None:
    entries = {
        "scenario": manifest.spec.scenario,
        "column": manifest.spec.column,
        "seed": manifest.spec.seed,
        "duration_s": repr(float(manifest.spec.resolved_duration())),
        "version": manifest.version,
        "wall_clock_s": f"{manifest.wall_clock_s:.3f}",
        "config": manifest.spec.to_json(),
        "files": ",".join(manifest.files) + ",manifest.txt",
    }
    for (phase, method), m in sorted(manifest.metrics.items()):
        entries[f"metric.{phase}.{method}.ise_e1"] = repr(m.ise_e1)
        entries[f"metric.{phase}.{method}.ise_p_err"] = repr(m.ise_p_err)
        entries[f"metric.{phase}.{method}.max_abs_e1"] = repr(m.max_abs_e1)
    write_manifest(path, entries)
