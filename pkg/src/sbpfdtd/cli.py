"""Command-line interface: ``run``, ``verify``, and ``spectrum``.

Exit codes: 0 success, 2 invalid input or config, 3 numerical blowup
or failed estimation, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .boundary import PecSatParams
from .config import parse_config, validate_config, build_system
from .constants import C0
from .errors import (ConfigError, EstimationFailed, InvalidArgument,
                     NumericalBlowup)
from .presets import PRESET_NAMES, build_preset
from .runner import derive_dt, run_scenario
from .scenario import dft_spectrum, find_spectral_peaks
from .sbp1d import FAMILIES
from .system import DENSE_CAP_DEFAULT, conservation_residual_bound
from .integrator import spectral_stability_report
from .verification import (MAX_RE_TOL, SYM_BOUND_TOL, VerifyOptions,
                           run_verification)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BLOWUP = 3
EXIT_VERIFY_FAILED = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbpfdtd",
        description="Energy-stable multi-block FDTD solver (2D TM).")
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="time-march a scenario and write outputs")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="scenario config file (INI)")
    src.add_argument("--preset", choices=PRESET_NAMES, help="built-in scenario")
    p_run.add_argument("--scale", type=float, default=1.0,
                       help="preset resolution scale factor (preset only)")
    p_run.add_argument("--out-dir", type=Path, default=None,
                       help="output directory (default from config, else 'out')")
    p_run.add_argument("--steps", type=int, default=None,
                       help="override the step count")
    step_g = p_run.add_mutually_exclusive_group()
    step_g.add_argument("--dt", type=float, default=None,
                        help="override the time step [s]")
    step_g.add_argument("--safety", type=float, default=None,
                        help="override the time-step safety factor")
    p_run.add_argument("--threads", type=int, default=1,
                       help="worker threads for per-block updates")
    p_run.add_argument("--check-stability", action="store_true",
                       help="verify the operator spectrum before stepping")
    p_run.set_defaults(func=cmd_run)

    p_ver = sub.add_parser("verify", help="run the discrete-identity check battery")
    p_ver.add_argument("--family", choices=FAMILIES + ("both",), default="both")
    for edge in ("w", "e", "s", "n"):
        p_ver.add_argument(f"--sigma-{edge}", type=float, default=None,
                           help=f"override the PEC penalty on the {edge.upper()} edge")
    for name in ("ez-coarse", "ez-fine", "h-coarse", "h-fine"):
        p_ver.add_argument(f"--sigma-{name}", type=float, default=None,
                           help=f"override the interface {name} penalty")
    p_ver.add_argument("--dump-operators", action="store_true",
                       help="print the 1D operator entries at full precision")
    p_ver.set_defaults(func=cmd_verify)

    p_spec = sub.add_parser("spectrum", help="DFT a probe CSV and list peaks")
    p_spec.add_argument("probe_csv", type=Path)
    p_spec.add_argument("--f-min", type=float, required=True)
    p_spec.add_argument("--f-max", type=float, required=True)
    p_spec.add_argument("--n-points", type=int, default=400)
    p_spec.add_argument("--window", action="store_true",
                        help="apply a Hann window before the transform")
    p_spec.add_argument("--out", type=Path, default=None,
                        help="spectrum CSV path (default <probe>_spectrum.csv)")
    p_spec.add_argument("--peak-threshold", type=float, default=0.1,
                        help="report peaks above this fraction of the maximum")
    p_spec.set_defaults(func=cmd_spectrum)
    return parser


def _load_scenario(args):
    if args.config is not None:
        cfg = parse_config(args.config.read_text())
    else:
        cfg = build_preset(args.preset, scale=args.scale)
    if args.steps is not None:
        cfg.run.n_steps = args.steps
        cfg.run.t_end = None
    if args.dt is not None:
        cfg.run.dt = args.dt
        cfg.run.safety = None
    if args.safety is not None:
        cfg.run.safety = args.safety
        cfg.run.dt = None
    return cfg


def _stability_gate(system, dt) -> bool:
    """Print a pre-run spectrum check; True when the gates pass.

    Dense eigenvalues when the system fits the dense cap; otherwise the
    sparse symmetric-part bound, which is meaningful only for lossless
    setups, so lossy large systems are reported as skipped.
    """
    h_min = min(b.h for b in system.blocks)
    scale = C0 / h_min
    if system.state_dimension() <= DENSE_CAP_DEFAULT:
        report = spectral_stability_report(system, dt)
        ok = report.max_real_part <= MAX_RE_TOL * scale
        print(f"stability check: max Re {report.max_real_part / scale:.4e} c/h "
              f"(tol {MAX_RE_TOL:.0e}), max |lambda| "
              f"{report.max_amplification_magnitude:.12f} at dt {dt:.6e} s")
        return ok
    lossless = all(float(np.max(b.materials.sigma_e)) == 0.0 for b in system.blocks)
    mur_free = all(kind != "mur" for edges in system.boundaries.values()
                   for kind in edges.values())
    if lossless and mur_free:
        bound = conservation_residual_bound(system)
        ok = bound <= SYM_BOUND_TOL * scale
        print(f"stability check: sym bound {bound / scale:.4e} c/h "
              f"(tol {SYM_BOUND_TOL:.0e}), dim {system.state_dimension()}")
        return ok
    print("stability check: skipped (system too large for a dense spectrum "
          "and lossy, so the symmetric bound is uninformative)")
    return True


def cmd_run(args) -> int:
    cfg = _load_scenario(args)
    violations = validate_config(cfg)
    if violations:
        raise ConfigError(violations)
    if args.check_stability:
        system = build_system(cfg)
        if not _stability_gate(system, derive_dt(system, cfg)):
            print("stability check failed; not stepping", file=sys.stderr)
            return EXIT_VERIFY_FAILED
    out_dir = args.out_dir if args.out_dir is not None else (cfg.run.out_dir or "out")
    result = run_scenario(cfg, out_dir=out_dir, threads=args.threads)
    print(f"ran {result.n_steps} steps at dt {result.dt:.6e} s "
          f"({result.state_dimension} unknowns, {result.wall_seconds:.2f} s wall)")
    if result.final_energy is not None:
        print(f"final energy {result.final_energy:.6e} J/m")
    if result.peak_sar is not None:
        print(f"peak SAR {result.peak_sar:.6e} W/kg")
    for name in sorted(result.files):
        print(f"wrote {result.files[name]}")
    return EXIT_OK


def cmd_verify(args) -> int:
    families = FAMILIES if args.family == "both" else (args.family,)
    pec_kwargs = {f"sigma_{e}": v for e, v in
                  (("w", args.sigma_w), ("e", args.sigma_e),
                   ("s", args.sigma_s), ("n", args.sigma_n)) if v is not None}
    defaults = (-0.5, -0.5, -0.5, -0.5)
    overrides = (args.sigma_ez_coarse, args.sigma_ez_fine,
                 args.sigma_h_coarse, args.sigma_h_fine)
    sigmas = tuple(d if o is None else o for d, o in zip(defaults, overrides))
    results, dump = run_verification(VerifyOptions(
        families=families, pec_params=PecSatParams(**pec_kwargs),
        interface_sigmas=sigmas, dump_operators=args.dump_operators))
    for r in results:
        print(r.line())
    if dump:
        print(dump)
    failed = sum(not r.passed for r in results)
    print(f"verification: {len(results)} checks, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def cmd_spectrum(args) -> int:
    raw = np.loadtxt(args.probe_csv, delimiter=",", skiprows=1, ndmin=2)
    if raw.shape[0] < 2 or raw.shape[1] != 2:
        raise InvalidArgument(
            f"{args.probe_csv}: need at least two 't,value' rows")
    t, values = raw[:, 0], raw[:, 1]
    dt = float(t[1] - t[0])
    if dt <= 0 or np.max(np.abs(np.diff(t) - dt)) > 1e-9 * abs(dt):
        raise InvalidArgument(
            f"{args.probe_csv}: time column is not uniformly spaced")
    if not args.f_max > args.f_min:
        raise InvalidArgument(
            f"empty frequency band: f_min {args.f_min} >= f_max {args.f_max}")
    if args.n_points < 2:
        raise InvalidArgument(f"n_points must be >= 2, got {args.n_points}")
    freqs = np.linspace(args.f_min, args.f_max, args.n_points)
    mags = dft_spectrum(values, dt, freqs,
                        window="hann" if args.window else None)
    out = args.out
    if out is None:
        out = args.probe_csv.with_name(args.probe_csv.stem + "_spectrum.csv")
    lines = ["f,magnitude"]
    lines += [f"{f!r},{m!r}" for f, m in zip(freqs, mags)]
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")
    peaks = find_spectral_peaks(freqs, mags, rel_threshold=args.peak_threshold)
    if peaks:
        for p in peaks:
            print(f"peak f = {p.frequency:.6e} Hz  magnitude = {p.magnitude:.6e}"
                  f"  rel height = {p.rel_height:.4f}")
    else:
        print("no peaks above threshold")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID
    try:
        return args.func(args)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (InvalidArgument, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalBlowup as exc:
        print(f"error: {exc}; any partial outputs were kept", file=sys.stderr)
        return EXIT_BLOWUP
    except EstimationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
