#!/usr/bin/env python3
"""Excitation diagnostics for a trace CSV.

Recomputes the regressor history at the logged reference, then reports the
windowed excitation Gramian's minimum eigenvalue for the full network and
for the active neuron subset (the neurons the trajectory actually passes).
A positive subset eigenvalue with a singular full Gramian is the expected
picture: only the traversed part of the lattice is excited.
"""

import argparse
import sys

import numpy as np

from rtplab.rbf import LatticeSpec, build_lattice
from rtplab.simulation import pe_gramian
from rtplab.traceio import read_trace_csv


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--trace", required=True)
    parser.add_argument("--sigma", type=float, default=0.3)
    parser.add_argument("--scale", default="1,1",
                        help="normalization divisors used during the run")
    parser.add_argument("--window", type=float, default=None,
                        help="window length in seconds (default: whole trace)")
    parser.add_argument("--threshold", type=float, default=0.5,
                        help="activation threshold defining the active subset")
    args = parser.parse_args()

    cols = read_trace_csv(args.trace)
    dt = float(cols["t"][1] - cols["t"][0])
    scale = np.array([float(v) for v in args.scale.split(",")])
    net = build_lattice(
        LatticeSpec(lows=(-1.0, -1.0), highs=(1.0, 1.0), counts=(5, 5)), args.sigma
    )
    xd = np.stack([cols["xd1"], cols["xd2"]], axis=1)
    chi = np.clip(xd / scale, -1.0, 1.0)
    phis = np.array([net.regressor(c) for c in chi])
    if args.window is not None:
        phis = phis[: int(round(args.window / dt))]

    _, lam_full = pe_gramian(phis, dt)
    active = np.flatnonzero(phis.max(axis=0) >= args.threshold)
    print(f"samples: {phis.shape[0]}, dt: {dt}")
    print(f"full Gramian lambda_min: {lam_full:.6g}")
    if active.size:
        _, lam_sub = pe_gramian(phis, dt, indices=active)
        print(f"active subset ({active.size} neurons {[int(i) for i in active]}): "
              f"lambda_min {lam_sub:.6g}")
    else:
        print("no neuron reaches the activation threshold")
    return 0


if __name__ == "__main__":
    sys.exit(main())
