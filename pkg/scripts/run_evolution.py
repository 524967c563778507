#!/usr/bin/env python3
"""Evolve traveling waves for full period crossings and tabulate the damage.

Each configured run integrates the wave until it has crossed its own spatial
period a requested number of times, then compares against the analytically
translated profile and reports conservation drift.  The optional refinement
study halves dt repeatedly to exhibit the integrator's fourth-order rate.

Usage:
    python3 scripts/run_evolution.py
    python3 scripts/run_evolution.py --crossings 2 --n 512
    python3 scripts/run_evolution.py --refinement
"""

import argparse
import sys
import time

import numpy as np

from landen_kdv import DnWaveParams
from landen_kdv.evolve import EvolverConfig, conservation_report, evolve, evolve_trajectory


def stable_dt(grid, fraction=0.5):
    from landen_kdv.evolve import STABILITY_C

    return fraction * STABILITY_C * (grid.L / grid.N) ** 3


def run_once(params, n, crossings):
    grid = params.natural_grid(n=n)
    duration = crossings * grid.L / abs(params.velocity)
    config = EvolverConfig.for_duration(
        grid, duration=duration, target_dt=stable_dt(grid), snapshot_every=2000)
    start = time.perf_counter()
    traj = evolve_trajectory(params.sample(grid, 0.0), config)
    elapsed = time.perf_counter() - start
    deviation = float(np.max(np.abs(traj.final - params.sample(grid, config.T))))
    report = conservation_report(traj)
    return {
        "steps": config.steps,
        "dt": config.dt,
        "T": config.T,
        "deviation": deviation,
        "mass": report.mass_drift,
        "momentum": report.momentum_drift,
        "seconds": elapsed,
    }


def refinement_study(params, n, levels):
    grid = params.natural_grid(n=n)
    u0 = params.sample(grid, 0.0)
    duration = 0.1 * grid.L / abs(params.velocity)
    dt0 = stable_dt(grid, fraction=0.4)
    print(f"\nrefinement study, {params.p}-copy wave at m = {params.m}, N = {n}")
    print(f"{'dt':>12}  {'deviation':>12}  {'ratio':>7}")
    previous = None
    for level in range(levels):
        config = EvolverConfig.for_duration(
            grid, duration=duration, target_dt=dt0 / 2**level)
        deviation = float(np.max(np.abs(
            evolve(u0, config) - params.sample(grid, config.T))))
        ratio = "" if previous is None else f"{previous / deviation:7.2f}"
        print(f"{config.dt:>12.3e}  {deviation:>12.3e}  {ratio:>7}")
        previous = deviation
    print("fourth-order stepping doubles to a ratio near 16 until roundoff")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--crossings", type=float, default=1.0)
    parser.add_argument("--refinement", action="store_true",
                        help="run the dt-halving convergence study instead")
    args = parser.parse_args(argv)

    waves = [
        ("single cnoidal, m=0.5", DnWaveParams(alpha=1.0, beta=0.0, m=0.5)),
        ("three copies, m=0.6", DnWaveParams(alpha=1.0, beta=-1.0, m=0.6, p=3)),
    ]

    if args.refinement:
        refinement_study(waves[0][1], args.n, levels=4)
        return 0

    print(f"{'wave':<24} {'steps':>7} {'dt':>10} {'deviation':>11} "
          f"{'mass drift':>11} {'time':>7}")
    for label, params in waves:
        out = run_once(params, args.n, args.crossings)
        print(f"{label:<24} {out['steps']:>7} {out['dt']:>10.2e} "
              f"{out['deviation']:>11.2e} {out['mass']:>11.2e} "
              f"{out['seconds']:>6.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
