#!/usr/bin/env python3
"""Run the full experiment set into results/ and print the metric summary.

Pass --quick for 10 s desk-check runs (scenario D shrinks to 60 s so it
still produces checkpoints).
"""

import argparse
import sys
import time

from rtplab.config import make_scenario_spec
from rtplab.scenarios import run_scenario

RUNS = [
    ("A", "a", None),
    ("A", "b", None),
    ("A", "c", None),
    ("B", "a", None),
    ("C", "a", None),
    ("D", "a", None),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="results")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    started = time.perf_counter()
    for scenario, column, duration in RUNS:
        if args.quick:
            duration = 60.0 if scenario == "D" else 10.0
        tag = f"{scenario}{column}" if scenario == "A" else scenario
        spec = make_scenario_spec(
            scenario, column=column, seed=args.seed,
            out_dir=f"{args.out}/{tag}", duration=duration,
        )
        print(f"=== scenario {scenario} (column {column}) -> {spec.out_dir}")
        manifest = run_scenario(spec, quiet=True)
        for (phase, method), m in sorted(manifest.metrics.items()):
            print(f"  {phase:6s} {method:5s} ise_e1={m.ise_e1:<12.6g} "
                  f"ise_p_err={m.ise_p_err:<12.6g} max|e1|={m.max_abs_e1:.4g}")
        if manifest.checkpoints:
            print("  accumulation checkpoints (method, train_s, ise_p_err):")
            for row in manifest.checkpoints:
                print(f"    {row['method']:5s} {row['train_s']:5.0f} {row['ise_p_err']:.6g}")
    print(f"done in {time.perf_counter() - started:.0f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
