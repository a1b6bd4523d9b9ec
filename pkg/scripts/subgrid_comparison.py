#!/usr/bin/env python3
"""Cost/accuracy comparison: subgridded vs uniform meshes.

Marches the three accuracy-study scenarios (locally refined, uniformly
fine, uniformly coarse) at one shared time step and reports unknown
counts, wall time, and probe-waveform L2 error against the uniform-fine
reference.  The timing column is informational; it depends on the host.
"""

import argparse
import tempfile
from pathlib import Path

import numpy as np

from sbpfdtd.config import build_system
from sbpfdtd.integrator import estimate_max_timestep
from sbpfdtd.presets import accuracy_trio
from sbpfdtd.runner import run_scenario


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t-end", type=float, default=2.5e-8,
                        help="simulated time per run [s]")
    parser.add_argument("--f-bw", type=float, default=0.3e9,
                        help="source bandwidth [Hz]")
    parser.add_argument("--out-dir", type=Path, default=None,
                        help="keep run outputs here (default: temp dir)")
    args = parser.parse_args()

    trio = accuracy_trio(f_bw=args.f_bw, t_end=args.t_end)
    dt = 0.9 * min(estimate_max_timestep(build_system(cfg), safety=1.0)
                   for cfg in trio.values())

    base = args.out_dir or Path(tempfile.mkdtemp(prefix="subgrid-cmp-"))
    rows = []
    for key in ("uniform-fine", "subgrid", "uniform-coarse"):
        cfg = trio[key]
        cfg.run.dt = dt
        cfg.run.safety = None
        result = run_scenario(cfg, out_dir=base / key)
        waveform = np.loadtxt(result.files["probe_0"], delimiter=",",
                              skiprows=1)[:, 1]
        rows.append((key, result.state_dimension, result.n_steps,
                     result.wall_seconds, waveform))

    ref = rows[0][4]
    print(f"shared dt {dt:.6e} s, probe at (1.7, 0.5), outputs in {base}")
    print(f"{'run':<16} {'unknowns':>9} {'steps':>6} {'wall [s]':>9} {'L2 err':>8}")
    for key, dim, n_steps, wall, waveform in rows:
        err = np.linalg.norm(waveform - ref) / np.linalg.norm(ref)
        print(f"{key:<16} {dim:>9} {n_steps:>6} {wall:>9.2f} {err:>8.3%}")


if __name__ == "__main__":
    main()
