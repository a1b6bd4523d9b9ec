"""Scenario execution: resolve a config, march it, write the outputs.

Sources and probes are given in meters and resolved to the nearest Ez
node of the first block containing them.  The energy log records the
staggered product energy (the form the leapfrog update conserves
exactly; see integrator.staggered_energy), starting at the first
cadence multiple since it pairs consecutive H half-levels.  All CSV
values are written with shortest round-trip float formatting in fixed
column order, so reruns of the same config produce byte-identical
files.  On numerical blowup the rows recorded so far are still
written before the error propagates.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, SourceConfig, build_system, serialize_config
from .errors import InvalidArgument
from .grid2d import write_snapshot
from .integrator import (
    PointSource,
    estimate_max_timestep,
    staggered_energy,
    step,
)
from .scenario import compute_sar, dft_spectrum, gaussian_pulse, ramped_sine
from .system import SimSystem, zero_states

SPECTRUM_POINTS = 400


@dataclass
class RunResult:
    dt: float
    n_steps: int
    out_dir: Path
    files: dict = field(default_factory=dict)   # logical name -> Path
    final_energy: float | None = None
    peak_sar: float | None = None
    state_dimension: int = 0
    wall_seconds: float = 0.0


def locate_ez_node(system: SimSystem, position) -> tuple[int, int, int]:
    """(block index, ix, iy) of the Ez node nearest to a point, searching
    blocks in declaration order and keeping the first that contains it."""
    x, y = position
    for k, b in enumerate(system.blocks):
        tol = 1e-9 * b.h
        wx, wy = b.extent
        if (b.origin[0] - tol <= x <= b.origin[0] + wx + tol
                and b.origin[1] - tol <= y <= b.origin[1] + wy + tol):
            ix = min(b.nx, max(0, round((x - b.origin[0]) / b.h)))
            iy = min(b.ny, max(0, round((y - b.origin[1]) / b.h)))
            return k, ix, iy
    raise InvalidArgument(f"position {position} lies in no block")


def waveform_of(src: SourceConfig):
    if src.kind == "gaussian":
        return gaussian_pulse(src.f_bw, tau=src.tau, t0=src.t0)
    if src.kind == "ramped-sine":
        return ramped_sine(src.f0, src.n_ramp_periods)
    raise InvalidArgument(f"unknown source kind {src.kind!r}")


def point_sources_of(system: SimSystem, src: SourceConfig) -> list:
    """Expand one source spec into integrator point sources.

    A ``point`` profile is a single node.  ``half-sine-y`` spreads the
    amplitude over the Ez nodes of the containing block's column that
    fall inside the source span, weighted sin(pi (y-y0)/(y1-y0)); node
    weights below 1e-12 are dropped.
    """
    waveform = waveform_of(src)
    bi, ix, iy = locate_ez_node(system, src.position)
    if src.profile == "point":
        return [PointSource(bi, ix, iy, src.amplitude, waveform)]
    b = system.blocks[bi]
    y0, y1 = src.span if src.span is not None else (
        b.origin[1], b.origin[1] + b.extent[1])
    tol = 1e-9 * b.h
    out = []
    for j in range(b.ny + 1):
        y = b.origin[1] + j * b.h
        if y0 - tol <= y <= y1 + tol:
            weight = math.sin(math.pi * (y - y0) / (y1 - y0))
            if weight > 1e-12:
                out.append(PointSource(bi, ix, j, src.amplitude * weight, waveform))
    if not out:
        raise InvalidArgument(f"source span {src.span} covers no Ez node")
    return out


def derive_dt(system: SimSystem, cfg: ScenarioConfig) -> float:
    if cfg.run.dt is not None:
        return cfg.run.dt
    return estimate_max_timestep(system, safety=cfg.run.safety)


def derive_steps(cfg: ScenarioConfig, dt: float) -> int:
    if cfg.run.n_steps is not None:
        return cfg.run.n_steps
    return max(1, math.ceil(cfg.run.t_end / dt))


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as f:
        f.write(header + "\n")
        for row in rows:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def _spectrum_band(cfg: ScenarioConfig, t_record: float):
    """Default analysis band from the source content; None if unclear."""
    lo, hi = math.inf, 0.0
    for s in cfg.sources:
        if s.kind == "gaussian" and s.f_bw is not None:
            lo, hi = min(lo, 1.0 / t_record), max(hi, 1.5 * s.f_bw)
        elif s.kind == "ramped-sine" and s.f0 is not None:
            lo, hi = min(lo, 0.5 * s.f0), max(hi, 1.5 * s.f0)
    if not hi > lo:
        return None
    return lo, hi


def run_scenario(cfg: ScenarioConfig, out_dir="out", threads: int = 1) -> RunResult:
    """March a validated scenario and write its output files.

    Writes the resolved config, energy log, per-probe records and
    default-band spectra, any requested Ez snapshots, and (when a SAR
    norm is configured) per-block SAR maps aggregated over the whole
    run.  Returns the file map plus timing and energy summaries.
    """
    out_dir = Path(cfg.run.out_dir) if cfg.run.out_dir else Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    system = build_system(cfg)
    dt = derive_dt(system, cfg)
    n_steps = derive_steps(cfg, dt)
    run = cfg.run

    sources = [ps for s in cfg.sources for ps in point_sources_of(system, s)]
    probes = [(locate_ez_node(system, p.position), p.cadence) for p in cfg.probes]
    states = zero_states(system)
    result = RunResult(dt=dt, n_steps=n_steps, out_dir=out_dir,
                       state_dimension=system.state_dimension())

    config_path = out_dir / "config.ini"
    config_path.write_text(serialize_config(cfg))
    result.files["config"] = config_path

    snapshot_steps = set(run.snapshot_steps)

    def take_snapshots(step_no):
        for b, st in zip(system.blocks, states):
            path = out_dir / f"snapshot_step{step_no}_{b.id}.txt"
            write_snapshot(path, b, "ez", st.ez)
            result.files[f"snapshot_{step_no}_{b.id}"] = path

    if 0 in snapshot_steps:
        take_snapshots(0)

    sar_acc = None
    if run.sar_norm is not None:
        sar_acc = [np.zeros(b.ez_shape()) for b in system.blocks]

    energy_rows = []
    probe_rows = [[] for _ in probes]
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    t_start = time.perf_counter()
    try:
        for k in range(n_steps):
            active = sources
            if run.source_off_step is not None and k >= run.source_off_step:
                active = ()
            prev = states
            states = step(system, states, k * dt, dt, sources=active,
                          step_index=k, pool=pool)
            done = k + 1
            if sar_acc is not None:
                for acc, st in zip(sar_acc, states):
                    if run.sar_norm == "rms":
                        acc += st.ez * st.ez
                    else:
                        np.maximum(acc, np.abs(st.ez), out=acc)
            if done % run.energy_cadence == 0:
                report = staggered_energy(system, prev, states, t=done * dt)
                energy_rows.append((report.t, report.total,
                                    *(report.per_block[b.id] for b in system.blocks)))
            for rows, ((bi, ix, iy), cadence) in zip(probe_rows, probes):
                if done % cadence == 0:
                    rows.append((done * dt, states[bi].ez[ix, iy]))
            if done in snapshot_steps:
                take_snapshots(done)
    finally:
        if pool is not None:
            pool.shutdown()
        result.wall_seconds = time.perf_counter() - t_start
        _write_run_files(cfg, system, result, dt, energy_rows, probe_rows)

    if energy_rows:
        result.final_energy = energy_rows[-1][1]
    if sar_acc is not None:
        peak = 0.0
        for b, acc in zip(system.blocks, sar_acc):
            if run.sar_norm == "rms":
                acc = np.sqrt(acc / n_steps)
            sar = compute_sar(acc, b.materials, field_norm=run.sar_norm)
            path = out_dir / f"sar_{b.id}.txt"
            write_snapshot(path, b, "sar", sar)
            result.files[f"sar_{b.id}"] = path
            peak = max(peak, float(sar.max()))
        result.peak_sar = peak
    return result


def _write_run_files(cfg, system, result, dt, energy_rows, probe_rows) -> None:
    out_dir = result.out_dir
    energy_path = out_dir / "energy.csv"
    header = "t,total," + ",".join(f"block_{b.id}" for b in system.blocks)
    _write_csv(energy_path, header, energy_rows)
    result.files["energy"] = energy_path

    for i, (rows, probe) in enumerate(zip(probe_rows, cfg.probes)):
        path = out_dir / f"probe_{i}.csv"
        _write_csv(path, "t,value", rows)
        result.files[f"probe_{i}"] = path
        if len(rows) < 2:
            continue
        t_record = rows[-1][0]
        band = _spectrum_band(cfg, t_record)
        if band is None:
            continue
        freqs = np.linspace(band[0], band[1], SPECTRUM_POINTS)
        mags = dft_spectrum([v for _, v in rows], probe.cadence * dt, freqs,
                            window="hann")
        spec_path = out_dir / f"spectrum_{i}.csv"
        _write_csv(spec_path, "f,magnitude", zip(freqs, mags))
        result.files[f"spectrum_{i}"] = spec_path
