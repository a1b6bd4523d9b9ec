"""Leapfrog stepping, dt estimation, energy monitoring, stability reports."""

import math

import numpy as np
import pytest

from conftest import two_block_system, vacuum_block, random_states
from sbpfdtd.constants import C0, EPS0
from sbpfdtd.errors import InvalidArgument, NumericalBlowup
from sbpfdtd.grid2d import vacuum_materials, zero_state
from sbpfdtd.integrator import (
    PointSource,
    companion_matrix,
    compute_energy,
    estimate_max_timestep,
    spectral_stability_report,
    staggered_energy,
    step,
)
from sbpfdtd.system import (
    SimSystem,
    assemble_global_matrix,
    energy_weight_diagonal,
)


def single_block_system(nx=8, ny=6, h=0.1, family="trapezoid-second-order"):
    return SimSystem(blocks=[vacuum_block("b", (0.0, 0.0), nx, ny, h, family)],
                     interfaces=[])


def dense_max_timestep(system):
    a_mat = assemble_global_matrix(system)
    w_sqrt = np.sqrt(energy_weight_diagonal(system))
    s_mat = (w_sqrt[:, None] * a_mat) / w_sqrt[None, :]
    omega = np.abs(np.linalg.eigvals(s_mat).imag).max()
    return 2.0 / omega


def test_estimate_matches_dense_eigensolve():
    system = single_block_system()
    dt_dense = dense_max_timestep(system)
    dt_est = estimate_max_timestep(system, safety=1.0)
    assert abs(dt_est - dt_dense) / dt_dense < 1e-8


def test_safety_scales_exactly():
    system = single_block_system(6, 5)
    full = estimate_max_timestep(system, safety=1.0)
    assert estimate_max_timestep(system, safety=0.5) == 0.5 * full


def test_estimate_rejects_bad_safety():
    system = single_block_system(4, 4)
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(InvalidArgument):
            estimate_max_timestep(system, safety=bad)


def test_estimate_ignores_conductivity():
    from sbpfdtd.grid2d import build_block

    lossless = single_block_system(6, 5)
    mats = vacuum_materials(6, 5)
    mats.sigma_e[:] = 0.02
    lossy = SimSystem(
        blocks=[build_block("b", (0.0, 0.0), 6, 5, 0.1,
                            "trapezoid-second-order", mats)],
        interfaces=[])
    assert estimate_max_timestep(lossy, safety=0.9) == \
        estimate_max_timestep(lossless, safety=0.9)


def test_companion_magnitudes_on_unit_circle_below_cap():
    system = single_block_system()
    dt = estimate_max_timestep(system, safety=0.99)
    report = spectral_stability_report(system, dt)
    assert report.max_amplification_magnitude <= 1 + 1e-8
    assert report.max_amplification_magnitude >= 1 - 1e-8
    assert report.max_real_part <= 1e-12 * C0 / system.blocks[0].h


def test_companion_amplifies_above_cap():
    system = single_block_system()
    dt = 1.02 * estimate_max_timestep(system, safety=1.0)
    g_mat = companion_matrix(system, dt)
    assert np.abs(np.linalg.eigvals(g_mat)).max() > 1 + 1e-3


def test_two_block_subgrid_timestep_window():
    system = two_block_system("W", ratio=2, nc=8, n_normal_fine=16, hc=0.1)
    dt = estimate_max_timestep(system, safety=1.0)
    yee_fine = (0.05) / (C0 * math.sqrt(2.0))
    assert 0.4 * yee_fine <= dt <= 1.0 * yee_fine


def test_zero_state_stays_zero():
    system = single_block_system(5, 4)
    states = [zero_state(system.blocks[0])]
    out = step(system, states, 0.0, 1e-11)
    for name in ("ez", "hx", "hy"):
        assert np.all(getattr(out[0], name) == 0.0)


def test_point_source_injects_single_node_exactly():
    system = single_block_system(5, 4)
    b = system.blocks[0]
    dt = 1e-11
    src = PointSource(0, 2, 3, amplitude=2.5, waveform=lambda t: 4.0 * t)
    out = step(system, [zero_state(b)], 0.0, dt, sources=[src])
    expected = dt * 2.5 * 4.0 * (0.5 * dt) / EPS0
    assert out[0].ez[2, 3] == pytest.approx(expected, rel=1e-14)
    assert np.count_nonzero(out[0].ez) == 1
    # the fresh Ez reaches H within the same step
    assert np.count_nonzero(out[0].hx) > 0
    assert np.count_nonzero(out[0].hy) > 0


def test_step_deterministic_and_pure():
    system = two_block_system("N", ratio=2)
    states = random_states(system, seed=21)
    copies = [s.copy() for s in states]
    dt = estimate_max_timestep(system, safety=0.9)
    out1 = step(system, states, 0.0, dt)
    out2 = step(system, states, 0.0, dt)
    for a, b, before, now in zip(out1, out2, copies, states):
        np.testing.assert_array_equal(a.ez, b.ez)
        np.testing.assert_array_equal(a.hx, b.hx)
        np.testing.assert_array_equal(a.hy, b.hy)
        np.testing.assert_array_equal(before.ez, now.ez)
        np.testing.assert_array_equal(before.hx, now.hx)
        np.testing.assert_array_equal(before.hy, now.hy)


def test_blowup_raises_with_step_index():
    system = single_block_system(6, 4)
    dt = 1.5 * estimate_max_timestep(system, safety=1.0)
    states = random_states(system, seed=2)
    with pytest.raises(NumericalBlowup) as info, \
            np.errstate(over="ignore", invalid="ignore"):
        for k in range(20_000):
            states = step(system, states, k * dt, dt, step_index=k)
    assert info.value.step_index > 0


def test_lossless_energy_bounded_and_not_decaying():
    system = two_block_system("W", ratio=2, nc=6, n_normal_fine=8)
    dt = estimate_max_timestep(system, safety=0.7)
    states = random_states(system, seed=13)
    e0 = compute_energy(system, states).total
    totals = []
    for k in range(800):
        states = step(system, states, k * dt, dt, step_index=k)
        totals.append(compute_energy(system, states).total)
    totals = np.array(totals)
    # plain staggered-time energy oscillates but must not drift
    assert totals.max() <= 1.5 * e0
    assert totals.min() >= 0.5 * e0
    assert abs(totals[-100:].mean() / totals[:100].mean() - 1.0) < 0.05


def test_staggered_product_energy_is_flat():
    # the product form pairs the two H half-levels around each E level
    # and is conserved to roundoff, unlike the single-state energy
    system = two_block_system("E", ratio=2, nc=6, n_normal_fine=8)
    dt = estimate_max_timestep(system, safety=0.9)
    states = random_states(system, seed=5)
    values = []
    for k in range(300):
        prev = states
        states = step(system, states, k * dt, dt, step_index=k)
        values.append(staggered_energy(system, prev, states, t=(k + 1) * dt).total)
    values = np.array(values)
    assert values.mean() > 0
    assert np.ptp(values) <= 1e-12 * values.mean()


def test_conductive_medium_dissipates():
    mats = vacuum_materials(8, 6)
    mats.sigma_e[:] = 5e-3
    from sbpfdtd.grid2d import build_block

    b = build_block("b", (0.0, 0.0), 8, 6, 0.1, "trapezoid-second-order", mats)
    system = SimSystem(blocks=[b], interfaces=[])
    dt = estimate_max_timestep(system, safety=0.9)
    # start from E only: curl-free H modes never couple to the loss term
    states = random_states(system, seed=3)
    states[0].hx[:] = 0.0
    states[0].hy[:] = 0.0
    e0 = compute_energy(system, states).total
    peak = e0
    for k in range(400):
        states = step(system, states, k * dt, dt)
        peak = max(peak, compute_energy(system, states).total)
    e_end = compute_energy(system, states).total
    assert e_end < 1e-6 * e0
    assert peak <= 2.5 * e0


def test_energy_total_invariant_under_block_order():
    system = two_block_system("S", ratio=2)
    states = random_states(system, seed=17)
    swapped = SimSystem(blocks=list(reversed(system.blocks)),
                        interfaces=system.interfaces)
    rep = compute_energy(system, states)
    rep_swapped = compute_energy(swapped, list(reversed(states)))
    assert rep.total == rep_swapped.total
    assert rep.per_block == rep_swapped.per_block
    assert rep.total == pytest.approx(sum(rep.per_block.values()), rel=1e-15)


def test_mur_strip_normal_incidence_reflection():
    # 1D-like pulse: open S/N edges keep y-uniform data exactly y-uniform,
    # so the strip reduces to the 1D wave equation with absorbing ends
    h = 1e-3
    b = vacuum_block("s", (0.0, 0.0), 400, 3, h)
    system = SimSystem(blocks=[b], interfaces=[],
                       boundaries={"s": {"W": "mur", "E": "mur",
                                         "S": "none", "N": "none"}})
    dt = 0.9 * h / C0
    tau = 20 * h / C0
    t0 = 5 * tau

    def waveform(t):
        arg = (t - t0) / tau
        return math.exp(-arg * arg) if abs(arg) < 9.0 else 0.0

    sources = [PointSource(0, 200, iy, 1.0, waveform) for iy in range(4)]
    states = [zero_state(b)]
    n_steps = 2 * int(math.ceil(400 * h / C0 / dt))
    incident_peak = 0.0
    for k in range(n_steps):
        t = k * dt
        active = sources if t < t0 + 8 * tau else []
        states = step(system, states, t, dt, sources=active, step_index=k)
        incident_peak = max(incident_peak, abs(states[0].ez[320, 1]))
    assert np.all(states[0].hx == 0.0)
    assert np.ptp(states[0].ez, axis=1).max() == 0.0
    residual = np.abs(states[0].ez).max()
    assert residual <= 5e-3 * incident_peak


def test_square_cavity_center_source_mirror_symmetry():
    # Swapping x and y maps the scheme onto itself with ez -> ez^T and
    # hx -> -hy^T, so a center-sourced square cavity stays symmetric
    b = vacuum_block("sq", (0.0, 0.0), 10, 10, 0.1)
    system = SimSystem(blocks=[b], interfaces=[])
    dt = estimate_max_timestep(system, safety=0.9)
    tau = 8 * dt
    src = PointSource(0, 5, 5, 1.0,
                      lambda t: math.exp(-((t - 4 * tau) / tau) ** 2))
    states = [zero_state(b)]
    for k in range(150):
        states = step(system, states, k * dt, dt, sources=[src])
    ez, hx, hy = states[0].ez, states[0].hx, states[0].hy
    scale = np.abs(ez).max()
    assert scale > 0
    assert np.abs(ez - ez.T).max() <= 1e-12 * scale
    assert np.abs(hx + hy.T).max() <= 1e-12 * np.abs(hx).max()


def test_stability_report_fields():
    system = single_block_system(4, 4)
    dt = estimate_max_timestep(system, safety=0.9)
    report = spectral_stability_report(system, dt)
    assert report.dt == dt
    assert report.state_dimension == system.state_dimension()
    assert math.isfinite(report.max_real_part)
    assert math.isfinite(report.max_amplification_magnitude)
