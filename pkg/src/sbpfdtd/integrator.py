"""Leapfrog time marching, time-step estimation, energy and stability.

One step advances E by a full dt using the stored H (staggered half a
step behind), then H using the fresh E.  Conductivity enters the E
update semi-implicitly (old field scaled by 1 - sigma dt/(2 eps), new
field divided by 1 + sigma dt/(2 eps)), which is dissipative for any
nonnegative sigma at any stable dt.  Conductor-post masking and
absorbing-edge updates are applied between the two stages, in that
order.

The maximum stable dt is 2/omega_max with omega_max the largest
frequency of the semi-discrete operator; it is found by Lanczos
iteration on the weighted-symmetric second-order map (curl-of-curl plus
penalties), deterministic start vector, conductivity excluded (loss
only damps and must not move the estimate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse.linalg as spla

from .boundary import (absorbing_ez_damping, absorbing_sat_ez_cross,
                       absorbing_sat_h_cross, advance_absorbing_h, pec_sat_h)
from .constants import EPS0
from .errors import EstimationFailed, InvalidArgument, NumericalBlowup
from .grid2d import FieldState, curl_ez_to_h, curl_h_to_ez
from .interface import interface_sat_ez, interface_sat_h
from .system import (
    SimSystem,
    apply_operator,
    assemble_global_matrix,
    energy_weight_arrays,
    energy_weight_diagonal,
    pack_states,
    unpack_states,
)


@dataclass
class PointSource:
    """Additive (soft) Ez-rate source at one node of one block."""

    block_index: int
    ix: int
    iy: int
    amplitude: float
    waveform: Callable[[float], float]


@dataclass
class EnergyReport:
    """Discrete field energy per block and in total, joules per meter depth."""

    t: float
    total: float
    per_block: dict


def compute_energy(system: SimSystem, states, t: float = 0.0) -> EnergyReport:
    """1/2 eps |Ez|^2 + 1/2 mu (|Hx|^2 + |Hy|^2) under the P-norm weights.

    The total is the exactly rounded sum of the per-block values, so it
    does not depend on block enumeration order.
    """
    per_block = {}
    for b, st, (w_ez, w_hx, w_hy) in zip(system.blocks, states,
                                         energy_weight_arrays(system)):
        per_block[b.id] = 0.5 * (float(np.sum(w_ez * st.ez**2))
                                 + float(np.sum(w_hx * st.hx**2))
                                 + float(np.sum(w_hy * st.hy**2)))
    return EnergyReport(t=t, total=math.fsum(per_block.values()), per_block=per_block)


def staggered_energy(system: SimSystem, prev_states, states,
                     t: float = 0.0) -> EnergyReport:
    """The discrete energy that leapfrog conserves exactly.

    Uses Ez at the integer level together with the product of the two
    surrounding H half-levels: E(k) = 1/2 e_k' W_e e_k
    + 1/2 h_{k-1/2}' W_h h_{k+1/2}.  For conservative systems the
    update telescopes this form to a constant (to roundoff), whereas
    the plain single-state energy oscillates at O(dt omega) amplitude
    from the half-step time offset.  Pass the states before and after
    one call to :func:`step`.
    """
    per_block = {}
    for b, prev, st, (w_ez, w_hx, w_hy) in zip(system.blocks, prev_states,
                                               states,
                                               energy_weight_arrays(system)):
        per_block[b.id] = 0.5 * (float(np.sum(w_ez * st.ez**2))
                                 + float(np.sum(w_hx * prev.hx * st.hx))
                                 + float(np.sum(w_hy * prev.hy * st.hy)))
    return EnergyReport(t=t, total=math.fsum(per_block.values()), per_block=per_block)


def step(system: SimSystem, states, t: float, dt: float, sources=(),
         step_index: int | None = None, check_finite: bool = True,
         pool=None):
    """One leapfrog step; returns new states, inputs untouched.

    E stage (rates: curl + skew absorbing coupling + interface
    penalties + sources; conductivity and the absorbing Ez damping
    share one semi-implicit update), then conductor-mask zeroing, then
    the H stage (rates: curl + PEC penalties + skew absorbing coupling
    + interface penalties, with the rank-one absorbing H damping solved
    Crank-Nicolson).  The skew halves of the absorbing penalties are
    time-centered by the staggering; the damping halves are integrated
    unconditionally stably, so the time-step limit stays a property of
    the conservative part.  Interface traces are re-read after each
    stage, so both stages see consistent neighbor data.  Accumulation
    order is fixed; results are bitwise reproducible.

    Within each stage the per-block work is independent; ``pool`` (an
    executor with an order-preserving ``map``) distributes it across
    workers.  Each block's arrays are produced by exactly the same
    operations regardless, so results are identical for any worker
    count.  Cross-block penalty exchange stays sequential.
    """
    if not dt > 0:
        raise InvalidArgument("dt must be positive")
    index = {b.id: k for k, b in enumerate(system.blocks)}
    t_mid = t + 0.5 * dt
    block_map = map if pool is None else pool.map

    # E stage
    def e_rate(pair):
        b, st = pair
        rate = curl_h_to_ez(b, st.hx, st.hy)
        mur_edges = system.edges_of_kind(b.id, "mur")
        if mur_edges:
            rate += absorbing_sat_ez_cross(b, st.hx, st.hy, mur_edges)
        return rate

    ez_rates = list(block_map(e_rate, zip(system.blocks, states)))
    for c in system.interfaces:
        kc, kf = index[c.coarse_id], index[c.fine_id]
        d_c, d_f = interface_sat_ez(c, system.blocks[kc], system.blocks[kf],
                                    states[kc], states[kf])
        ez_rates[kc] += d_c
        ez_rates[kf] += d_f
    for s in sources:
        b = system.blocks[s.block_index]
        val = s.amplitude * s.waveform(t_mid)
        ez_rates[s.block_index][s.ix, s.iy] += val / (
            EPS0 * b.materials.eps_rel[s.ix, s.iy])

    new_ez = []
    for b, st, rate in zip(system.blocks, states, ez_rates):
        sig = b.materials.sigma_e
        half = sig * (dt / (2.0 * EPS0)) / b.materials.eps_rel if sig.any() else None
        mur_edges = system.edges_of_kind(b.id, "mur")
        if mur_edges:
            damping = (0.5 * dt) * absorbing_ez_damping(b, mur_edges)
            half = damping if half is None else half + damping
        if half is None:
            ez = st.ez + dt * rate
        else:
            ez = ((1.0 - half) * st.ez + dt * rate) / (1.0 + half)
        if b.materials.pec_mask.any():
            ez[b.materials.pec_mask] = 0.0
        new_ez.append(ez)

    # H stage
    def advance_h(args):
        k, b, st = args
        hx_rate, hy_rate = curl_ez_to_h(b, new_ez[k])
        pec_edges = system.edges_of_kind(b.id, "pec")
        if pec_edges:
            dhx, dhy = pec_sat_h(b, new_ez[k], system.pec_params, pec_edges)
            hx_rate += dhx
            hy_rate += dhy
        mur_edges = system.edges_of_kind(b.id, "mur")
        if mur_edges:
            dhx, dhy = absorbing_sat_h_cross(b, new_ez[k], mur_edges)
            hx_rate += dhx
            hy_rate += dhy
        hx_new = st.hx + dt * hx_rate
        hy_new = st.hy + dt * hy_rate
        if mur_edges:
            advance_absorbing_h(b, mur_edges, dt, st.hx, st.hy, hx_new, hy_new)
        return FieldState(ez=new_ez[k], hx=hx_new, hy=hy_new)

    new_states = list(block_map(
        advance_h, ((k, b, st) for k, (b, st) in enumerate(zip(system.blocks, states)))))
    for c in system.interfaces:
        kc, kf = index[c.coarse_id], index[c.fine_id]
        d_c, d_f = interface_sat_h(c, system.blocks[kc], system.blocks[kf],
                                   new_states[kc], new_states[kf])
        if c.h_field == "hx":
            new_states[kc].hx += dt * d_c
            new_states[kf].hx += dt * d_f
        else:
            new_states[kc].hy += dt * d_c
            new_states[kf].hy += dt * d_f

    if check_finite:
        for st in new_states:
            if not (np.isfinite(st.ez).all() and np.isfinite(st.hx).all()
                    and np.isfinite(st.hy).all()):
                raise NumericalBlowup(-1 if step_index is None else step_index)
    return new_states


def estimate_max_timestep(system: SimSystem, safety: float = 0.99,
                          tol: float = 1e-10, maxiter: int = 2000) -> float:
    """safety * 2/omega_max from the conservative part of the operator.

    omega_max^2 is the extremal eigenvalue of -W^(1/2) A^2 W^(-1/2)
    built from A with the dissipative terms dropped (conductivity and
    the damping halves of the absorbing penalties; their skew coupling
    halves stay), so the operator is symmetric positive semidefinite
    and Lanczos iteration (fixed seed) applies.  The damping terms the
    estimate ignores are exactly the ones the integrator treats
    unconditionally stably.  Raises EstimationFailed when the iteration
    does not converge or the spectral radius degenerates to zero.
    """
    if not 0 < safety <= 1:
        raise InvalidArgument(f"safety must be in (0, 1], got {safety}")
    n = system.state_dimension()
    w_sqrt = np.sqrt(energy_weight_diagonal(system))

    def matvec(v):
        u = apply_operator(
            system,
            apply_operator(system, v / w_sqrt, include_dissipation=False),
            include_dissipation=False)
        return -(w_sqrt * u)

    op = spla.LinearOperator((n, n), matvec=matvec, dtype=float)
    v0 = np.random.default_rng(0x5BD1).standard_normal(n)
    try:
        vals = spla.eigsh(op, k=1, which="LA", v0=v0, tol=tol,
                          maxiter=maxiter, return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        raise EstimationFailed(f"Lanczos did not converge: {exc}") from exc
    omega_sq = float(vals[0])
    if not omega_sq > 0:
        raise EstimationFailed(f"degenerate spectral radius ({omega_sq})")
    return safety * 2.0 / math.sqrt(omega_sq)


@dataclass
class StabilityReport:
    """Spectral verification: semi-discrete and fully discrete."""

    max_real_part: float
    max_amplification_magnitude: float
    dt: float
    state_dimension: int


def companion_matrix(system: SimSystem, dt: float) -> np.ndarray:
    """One-step map by probing step() with unit states (no sources)."""
    n = system.state_dimension()
    g_mat = np.empty((n, n))
    unit = np.zeros(n)
    for j in range(n):
        unit[j] = 1.0
        advanced = step(system, unpack_states(system, unit), 0.0, dt,
                        check_finite=False)
        g_mat[:, j] = pack_states(system, advanced)
        unit[j] = 0.0
    return g_mat


def spectral_stability_report(system: SimSystem, dt: float,
                              cap: int | None = None) -> StabilityReport:
    """Eigenvalues of the assembled operator and of the one-step map.

    The operator eigensolve runs on the energy-weight similarity
    transform of A (same spectrum, far better conditioned than the raw
    SI scaling).  Dense; respects the assembly cap.
    """
    kwargs = {} if cap is None else {"cap": cap}
    a_mat = assemble_global_matrix(system, **kwargs)
    w_sqrt = np.sqrt(energy_weight_diagonal(system))
    s_mat = (w_sqrt[:, None] * a_mat) / w_sqrt[None, :]
    eig_a = np.linalg.eigvals(s_mat)
    eig_g = np.linalg.eigvals(companion_matrix(system, dt))
    return StabilityReport(
        max_real_part=float(eig_a.real.max()),
        max_amplification_magnitude=float(np.abs(eig_g).max()),
        dt=dt,
        state_dimension=system.state_dimension(),
    )
