"""Self-check battery behind the ``verify`` CLI command.

Each check exercises one provable property of the discretization and
reports a measured residual against a fixed tolerance:

* ``sbp-identity``        Q- + Q+^T = boundary projections, per family.
* ``derivative-accuracy`` exactness on degree-0/1 monomials.
* ``transfer-compat``     T^T P_fine = P_coarse T_hat, per ratio.
* ``pec-conservation``    dense spectrum of an all-PEC cavity plus the
                          sparse symmetric-part bound.
* ``interface-conservation``  same gates for a two-block refined pair.
* ``amplification``       one-step-map eigenvalue magnitudes at the
                          estimated maximum stable dt.

The penalty parameters are injectable so a deliberately wrong sign can
be shown to surface as a positive real eigenvalue in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .boundary import PecSatParams
from .constants import C0
from .grid2d import build_block
from .integrator import estimate_max_timestep, spectral_stability_report
from .interface import (build_compatible_restriction, build_coupling,
                        build_prolongation, compatibility_residual)
from .sbp1d import (FAMILIES, accuracy_residuals, build_sbp_1d,
                    build_staggered_axis, format_operator_dump,
                    sbp_identity_residual)
from .system import SimSystem, conservation_residual_bound

AXIS_SIZES = (2, 3, 4, 5, 8, 13, 16, 33, 64, 128)
COARSE_SIZES = (2, 3, 5, 8, 13, 21, 34, 64)
RATIOS = (2, 4)

IDENTITY_TOL = 1e-14
ACCURACY_TOL = 1e-13      # on h * residual
COMPAT_TOL = 1e-14
MAX_RE_TOL = 1e-10        # units of c/h
SYM_BOUND_TOL = 1e-9      # units of c/h
AMPLIFICATION_TOL = 1e-8  # on max |lambda| - 1


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


@dataclass(frozen=True)
class VerifyOptions:
    families: tuple = FAMILIES
    pec_params: PecSatParams = field(default_factory=PecSatParams)
    interface_sigmas: tuple = (-0.5, -0.5, -0.5, -0.5)
    dump_operators: bool = False


def check_sbp_identity(family: str) -> CheckResult:
    worst = 0.0
    for n in AXIS_SIZES:
        ops = build_sbp_1d(build_staggered_axis(n, 1.0 / n), family)
        worst = max(worst, sbp_identity_residual(ops))
    return CheckResult(
        f"sbp-identity [{family}]", worst <= IDENTITY_TOL,
        f"max residual {worst:.3e} over n in {AXIS_SIZES[0]}..{AXIS_SIZES[-1]} "
        f"(tol {IDENTITY_TOL:.0e})")


def check_accuracy(family: str) -> CheckResult:
    worst = 0.0
    for n in AXIS_SIZES:
        h = 1.0 / n
        axis = build_staggered_axis(n, h)
        worst = max(worst, h * accuracy_residuals(build_sbp_1d(axis, family), axis).max())
    return CheckResult(
        f"derivative-accuracy [{family}]", worst <= ACCURACY_TOL,
        f"max h-scaled residual {worst:.3e} (tol {ACCURACY_TOL:.0e})")


def check_transfer_compat(family: str, ratio: int) -> CheckResult:
    worst = 0.0
    for n_c in COARSE_SIZES:
        ops_c = build_sbp_1d(build_staggered_axis(n_c, float(ratio)), family)
        ops_f = build_sbp_1d(build_staggered_axis(n_c * ratio, 1.0), family)
        t_mat = build_prolongation(n_c + 1, ratio)
        t_hat = build_compatible_restriction(t_mat, ops_f.p_minus, ops_c.p_minus)
        worst = max(worst, compatibility_residual(
            t_mat, t_hat, ops_f.p_minus, ops_c.p_minus))
    return CheckResult(
        f"transfer-compat [{family}, r={ratio}]", worst <= COMPAT_TOL,
        f"max residual {worst:.3e} over coarse n in "
        f"{COARSE_SIZES[0]}..{COARSE_SIZES[-1]} (tol {COMPAT_TOL:.0e})")


def _spectrum_checks(label: str, system: SimSystem, h: float) -> list:
    """Dense max-Re gate, sparse symmetric bound, one-step amplification."""
    scale = C0 / h
    dt = estimate_max_timestep(system, safety=0.99)
    report = spectral_stability_report(system, dt)
    bound = conservation_residual_bound(system)
    ok_cons = (report.max_real_part <= MAX_RE_TOL * scale
               and bound <= SYM_BOUND_TOL * scale)
    amp_dev = abs(report.max_amplification_magnitude - 1.0)
    return [
        CheckResult(
            f"{label}-conservation", ok_cons,
            f"max Re {report.max_real_part / scale:.4e} c/h "
            f"(tol {MAX_RE_TOL:.0e}), sym bound {bound / scale:.4e} c/h "
            f"(tol {SYM_BOUND_TOL:.0e}), dim {report.state_dimension}"),
        CheckResult(
            f"{label}-amplification", amp_dev <= AMPLIFICATION_TOL,
            f"max |lambda| - 1 = {report.max_amplification_magnitude - 1.0:.3e} "
            f"at dt {report.dt:.6e} s (tol {AMPLIFICATION_TOL:.0e})"),
    ]


def check_pec_cavity(family: str, pec_params: PecSatParams) -> list:
    h = 0.05
    block = build_block("cavity", (0.0, 0.0), 6, 4, h, family=family)
    system = SimSystem([block], pec_params=pec_params)
    return _spectrum_checks(f"pec [{family}]", system, h)


def check_interface_pair(family: str, ratio: int, sigmas,
                         pec_params: PecSatParams) -> list:
    h_f = 0.05
    n_t = 3  # tangential coarse cells on the shared edge
    fine = build_block("fine", (0.0, 0.0), 4, ratio * n_t, h_f, family=family)
    coarse = build_block("coarse", (4 * h_f, 0.0), 3, n_t, ratio * h_f,
                         family=family)
    coupling = build_coupling(coarse, fine, "W", ratio, sigmas=tuple(sigmas))
    system = SimSystem([coarse, fine], [coupling], pec_params=pec_params)
    return _spectrum_checks(f"interface [{family}, r={ratio}]", system, h_f)


def run_verification(opts: VerifyOptions):
    """Run the full battery; returns (results, operator dump or None)."""
    results = []
    for family in opts.families:
        results.append(check_sbp_identity(family))
        results.append(check_accuracy(family))
    for family in opts.families:
        for ratio in RATIOS:
            results.append(check_transfer_compat(family, ratio))
    for family in opts.families:
        results.extend(check_pec_cavity(family, opts.pec_params))
    for family in opts.families:
        for ratio in RATIOS:
            results.extend(check_interface_pair(
                family, ratio, opts.interface_sigmas, PecSatParams()))
    dump = None
    if opts.dump_operators:
        stanzas = [format_operator_dump(build_sbp_1d(build_staggered_axis(4, 1.0), f))
                   for f in opts.families]
        dump = "\n".join(stanzas)
    return results, dump
