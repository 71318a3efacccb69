"""Command-line interface.

    rtplab run <scenario> [--column a|b|c] [--seed N] [--out DIR]
                          [--duration S] [--config FILE]
    rtplab replay --snapshot FILE --trajectory T [--out FILE]
                  [--duration S] [--half-length L]
    rtplab metrics --trace FILE

Exit codes: 0 all runs completed, 1 divergence or I/O failure, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from rtplab.config import (
    ConfigError,
    DT,
    GAIN_K1,
    GAIN_K2,
    TrajectorySpec,
    make_scenario_spec,
    validate_config,
)
from rtplab.control import BacksteppingGains, FrozenLearner
from rtplab.dynamics import PendulumParams, pendulum_plant
from rtplab.scenarios import default_network, make_trajectory, run_scenario
from rtplab.simulation import Metrics, SimConfig, SimulationDiverged, ise, run_closed_loop
from rtplab.traceio import load_knowledge, read_trace_csv, write_trace_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtplab",
        description="Learning-control simulation lab: learn, reuse, measure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario (learning + reuse phases)")
    p_run.add_argument("scenario", choices=["A", "B", "C", "D", "custom"])
    p_run.add_argument("--column", choices=["a", "b", "c"], default=None,
                       help="hyperparameter column (default a)")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--duration", type=float, default=None,
                       help="override the learning duration in seconds")
    p_run.add_argument("--config", default=None,
                       help="JSON configuration file; explicit flags override it")
    p_run.add_argument("--quiet", action="store_true")

    p_replay = sub.add_parser(
        "replay", help="run a frozen-feedforward controller from a snapshot"
    )
    p_replay.add_argument("--snapshot", required=True)
    p_replay.add_argument("--trajectory", required=True,
                          help="sinusoid | growing | spline:SEED[:KNOTS]")
    p_replay.add_argument("--duration", type=float, default=100.0)
    p_replay.add_argument("--half-length", type=float, default=0.2,
                          help="pendulum half-length in meters")
    p_replay.add_argument("--out", default=None, help="trace CSV path")

    p_metrics = sub.add_parser("metrics", help="recompute metrics from a trace CSV")
    p_metrics.add_argument("--trace", required=True)

    return parser


def _parse_trajectory_arg(text: str, duration: float) -> TrajectorySpec:
    parts = text.split(":")
    kind = parts[0]
    if kind == "spline":
        seed = int(parts[1]) if len(parts) > 1 else 0
        knots = int(parts[2]) if len(parts) > 2 else max(4, round(20 * duration / 100))
        return TrajectorySpec(kind="spline", seed=seed, knots=knots, duration=duration)
    if kind in ("sinusoid", "growing"):
        return TrajectorySpec(kind=kind, duration=duration)
    raise ConfigError([f"trajectory: unknown kind {kind!r}"])


def _cmd_run(args) -> int:
    try:
        if args.config:
            base = validate_config(Path(args.config).read_text())
            spec = make_scenario_spec(
                scenario=args.scenario,
                column=args.column if args.column is not None else base.column,
                seed=args.seed if args.seed is not None else base.seed,
                out_dir=args.out or base.out_dir,
                duration=args.duration if args.duration is not None else base.duration,
                methods=base.methods,
                trajectory=base.trajectory,
                overrides={
                    "sigma": base.sigma, "gamma": base.gamma, "eta0": base.eta0,
                    "t0_ramp": base.t0_ramp, "p0": base.p0,
                },
            )
        else:
            spec = make_scenario_spec(
                scenario=args.scenario,
                column=args.column if args.column is not None else "a",
                seed=args.seed if args.seed is not None else 0,
                out_dir=args.out or f"results/{args.scenario}",
                duration=args.duration,
            )
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        manifest = run_scenario(spec, quiet=args.quiet)
    except SimulationDiverged as exc:
        print(f"simulation diverged: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 1

    if not args.quiet:
        for (phase, method), m in sorted(manifest.metrics.items()):
            print(
                f"{phase:6s} {method:5s}  ise_e1={m.ise_e1:.6g}  "
                f"ise_p_err={m.ise_p_err:.6g}  max|e1|={m.max_abs_e1:.6g}"
            )
        print(f"outputs in {spec.out_dir} ({manifest.wall_clock_s:.1f}s)")
    return 0


def _cmd_replay(args) -> int:
    try:
        snapshot = load_knowledge(args.snapshot)
    except (OSError, ValueError) as exc:
        print(f"cannot load snapshot: {exc}", file=sys.stderr)
        return 2
    try:
        tspec = _parse_trajectory_arg(args.trajectory, args.duration)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    traj = make_trajectory(tspec)
    if snapshot.method == "rtpl" and snapshot.scale is not None:
        import dataclasses
        import numpy as np
        traj = dataclasses.replace(traj, scale=np.array(snapshot.scale, dtype=float))
    plant = pendulum_plant(PendulumParams(half_length=args.half_length))
    net = default_network(sigma=0.3)
    if snapshot.weights.shape != net.weights.shape:
        print(
            f"snapshot has {snapshot.weights.shape[0]} weights, "
            f"network expects {net.weights.shape[0]}",
            file=sys.stderr,
        )
        return 2
    gains = BacksteppingGains((GAIN_K1, GAIN_K2))
    cfg = SimConfig(dt=DT, duration=args.duration)
    try:
        frozen = FrozenLearner(
            snapshot.weights, normalized_input=(snapshot.method == "rtpl")
        )
        trace = run_closed_loop(plant, traj, net, frozen, gains, cfg)
    except SimulationDiverged as exc:
        print(f"simulation diverged: {exc}", file=sys.stderr)
        return 1
    metrics = Metrics.from_trace(trace)
    if args.out:
        write_trace_csv(trace, args.out)
        print(f"trace written to {args.out}")
    print(f"ise_e1: {metrics.ise_e1!r}")
    print(f"ise_p_err: {metrics.ise_p_err!r}")
    print(f"max_abs_e1: {metrics.max_abs_e1!r}")
    return 0


def _cmd_metrics(args) -> int:
    try:
        cols = read_trace_csv(args.trace)
    except (OSError, ValueError) as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return 2
    dt = float(cols["t"][1] - cols["t"][0]) if cols["t"].shape[0] > 1 else DT
    print(f"ise_e1: {ise(cols['e1'][:-1], dt)!r}")
    print(f"ise_p_err: {ise(cols['p_err'][:-1], dt)!r}")
    print(f"max_abs_e1: {float(abs(cols['e1']).max())!r}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "replay":
        return _cmd_replay(args)
    return _cmd_metrics(args)


if __name__ == "__main__":
    sys.exit(main())
