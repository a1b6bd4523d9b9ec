"""Weak outer-boundary enforcement.

PEC walls are imposed through penalty terms on the H updates: the edge
Ez trace (which a perfect conductor wants to be zero) is injected back
into the two H lines nearest the edge through the boundary projection
vector, scaled by a per-edge penalty parameter.  With the default
parameters the penalties exactly cancel the boundary terms of the SBP
energy identity, so the semi-discrete single-block operator conserves
the discrete energy: W A + A^T W = 0.

Absorbing edges (config kind 'mur', the first-order absorbing
condition) weakly zero the incoming characteristic w = Ez -/+ eta*Ht
(eta the local wave impedance, Ht the tangential H projected onto the
edge, sign by edge): the residual w is penalized into both the edge Ez
line and the two nearest H lines.  The penalty coefficients -1/(2 eta)
on Ez and +/-1/2 on H turn the edge's energy-identity boundary term
+/-a*b into -a^2/(2 eta) - eta*b^2/2, so every absorbing edge is
dissipative in the same discrete norm the PEC analysis uses, and the
rate equals the exact outgoing flux -a*b whenever the incoming
characteristic vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import EPS0, MU0
from .errors import InvalidArgument
from .grid2d import EDGES, MeshBlock, _check_layout


@dataclass
class PecSatParams:
    """Per-edge PEC penalty parameters.

    Defaults are the unique energy-conserving choice for the curl signs
    used here (Hy carries +dEz/dx, Hx carries -dEz/dy): the W/S terms
    and E/N terms enter the energy rate with opposite signs, so the
    x-pair needs (+1, -1) and the y-pair (-1, +1).
    """

    sigma_w: float = 1.0
    sigma_e: float = -1.0
    sigma_s: float = -1.0
    sigma_n: float = 1.0

    def of(self, edge: str) -> float:
        return {"W": self.sigma_w, "E": self.sigma_e,
                "S": self.sigma_s, "N": self.sigma_n}[edge]


def pec_sat_h(block: MeshBlock, ez: np.ndarray, params: PecSatParams,
              edges=("W", "E", "S", "N")) -> tuple[np.ndarray, np.ndarray]:
    """PEC penalty increments (dHx-rate, dHy-rate) for the selected edges.

    Each selected edge contributes sigma * (P+^-1 p_vec) (outer) (edge Ez
    trace) / mu on its two nearest H lines; unselected edges contribute
    nothing.  Edges owned by an interface must not be passed here.
    """
    _check_layout(block, "ez", ez)
    for e in edges:
        if e not in EDGES:
            raise InvalidArgument(f"unknown edge {e!r}")
    inv_mu = 1.0 / (MU0 * block.materials.mu_rel)
    dhx = np.zeros(block.hx_shape())
    dhy = np.zeros(block.hy_shape())
    opx, opy = block.ops_x, block.ops_y
    if "W" in edges:
        c = params.sigma_w * inv_mu
        dhy[0, :] += c * (opx.p_left[0] / opx.p_plus[0]) * ez[0, :]
        dhy[1, :] += c * (opx.p_left[1] / opx.p_plus[1]) * ez[0, :]
    if "E" in edges:
        c = params.sigma_e * inv_mu
        dhy[-1, :] += c * (opx.p_right[-1] / opx.p_plus[-1]) * ez[-1, :]
        dhy[-2, :] += c * (opx.p_right[-2] / opx.p_plus[-2]) * ez[-1, :]
    if "S" in edges:
        c = params.sigma_s * inv_mu
        dhx[:, 0] += c * (opy.p_left[0] / opy.p_plus[0]) * ez[:, 0]
        dhx[:, 1] += c * (opy.p_left[1] / opy.p_plus[1]) * ez[:, 0]
    if "N" in edges:
        c = params.sigma_n * inv_mu
        dhx[:, -1] += c * (opy.p_right[-1] / opy.p_plus[-1]) * ez[:, -1]
        dhx[:, -2] += c * (opy.p_right[-2] / opy.p_plus[-2]) * ez[:, -1]
    return dhx, dhy


# Sign of the skew Ez<->H coupling per edge (from the characteristic
# orientation: incoming is Ez - eta*Ht on W/N, Ez + eta*Ht on E/S).
_CROSS_SIGN = {"W": 1.0, "E": -1.0, "S": -1.0, "N": 1.0}


def _edge_geometry(block: MeshBlock, edge: str):
    """Per-edge pieces shared by the absorbing terms.

    Returns (eta, p_pair, pp_pair, pm_edge, rows): the impedance line
    at the edge Ez nodes, the two boundary-projection entries, the two
    matching P+ weights, the edge P- weight of the normal axis, and the
    two near-edge H line indices.
    """
    eps = block.materials.eps_rel
    eta0_sq = MU0 * block.materials.mu_rel / EPS0
    opx, opy = block.ops_x, block.ops_y
    if edge == "W":
        return (np.sqrt(eta0_sq / eps[0, :]), (opx.p_left[0], opx.p_left[1]),
                (opx.p_plus[0], opx.p_plus[1]), opx.p_minus[0], (0, 1))
    if edge == "E":
        return (np.sqrt(eta0_sq / eps[-1, :]), (opx.p_right[-1], opx.p_right[-2]),
                (opx.p_plus[-1], opx.p_plus[-2]), opx.p_minus[-1], (-1, -2))
    if edge == "S":
        return (np.sqrt(eta0_sq / eps[:, 0]), (opy.p_left[0], opy.p_left[1]),
                (opy.p_plus[0], opy.p_plus[1]), opy.p_minus[0], (0, 1))
    return (np.sqrt(eta0_sq / eps[:, -1]), (opy.p_right[-1], opy.p_right[-2]),
            (opy.p_plus[-1], opy.p_plus[-2]), opy.p_minus[-1], (-1, -2))


def _edge_h_proj(edge: str, hx, hy, p_pair, rows):
    """b: the near-edge H trace projected onto the edge."""
    if edge in ("W", "E"):
        return p_pair[0] * hy[rows[0], :] + p_pair[1] * hy[rows[1], :]
    return p_pair[0] * hx[:, rows[0]] + p_pair[1] * hx[:, rows[1]]


def _check_absorbing_args(block, edges, ez=None, hx=None, hy=None):
    for e in edges:
        if e not in EDGES:
            raise InvalidArgument(f"unknown edge {e!r}")
    if ez is not None:
        _check_layout(block, "ez", ez)
    if hx is not None:
        _check_layout(block, "hx", hx)
    if hy is not None:
        _check_layout(block, "hy", hy)


def absorbing_ez_damping(block: MeshBlock, edges) -> np.ndarray:
    """Self-damping coefficient gamma on the Ez node set.

    The Ez part of the absorbing penalty is -gamma*ez + (skew coupling
    to H); gamma = 1/(2 eta eps P-[edge]) on each selected edge line,
    zero elsewhere.  Kept separate so the integrator can treat the
    stiff self term semi-implicitly.
    """
    _check_absorbing_args(block, edges)
    eps = EPS0 * block.materials.eps_rel
    gamma = np.zeros(block.ez_shape())
    for edge in edges:
        eta, _, _, pm_edge, rows = _edge_geometry(block, edge)
        if edge in ("W", "E"):
            gamma[rows[0], :] += 1.0 / (2.0 * eta * eps[rows[0], :] * pm_edge)
        else:
            gamma[:, rows[0]] += 1.0 / (2.0 * eta * eps[:, rows[0]] * pm_edge)
    return gamma


def absorbing_sat_ez_cross(block: MeshBlock, hx: np.ndarray, hy: np.ndarray,
                           edges) -> np.ndarray:
    """Skew half of the absorbing penalty on the Ez rate: +/- b/(2 eps
    P-[edge]) on each selected edge line (b the projected H trace)."""
    _check_absorbing_args(block, edges, hx=hx, hy=hy)
    eps = EPS0 * block.materials.eps_rel
    dez = np.zeros(block.ez_shape())
    for edge in edges:
        _, p_pair, _, pm_edge, rows = _edge_geometry(block, edge)
        b = _edge_h_proj(edge, hx, hy, p_pair, rows)
        if edge in ("W", "E"):
            dez[rows[0], :] += _CROSS_SIGN[edge] * b / (2.0 * eps[rows[0], :] * pm_edge)
        else:
            dez[:, rows[0]] += _CROSS_SIGN[edge] * b / (2.0 * eps[:, rows[0]] * pm_edge)
    return dez


def absorbing_sat_h_cross(block: MeshBlock, ez: np.ndarray,
                          edges) -> tuple[np.ndarray, np.ndarray]:
    """Skew half of the absorbing penalty on the H rates: the edge Ez
    trace lifted onto the two near-edge H lines through P+^-1 p_vec,
    scaled +/- 1/(2 mu)."""
    _check_absorbing_args(block, edges, ez=ez)
    inv_mu = 1.0 / (MU0 * block.materials.mu_rel)
    dhx = np.zeros(block.hx_shape())
    dhy = np.zeros(block.hy_shape())
    for edge in edges:
        _, p_pair, pp_pair, _, rows = _edge_geometry(block, edge)
        c = 0.5 * _CROSS_SIGN[edge] * inv_mu
        if edge in ("W", "E"):
            a = ez[rows[0], :]
            dhy[rows[0], :] += c * (p_pair[0] / pp_pair[0]) * a
            dhy[rows[1], :] += c * (p_pair[1] / pp_pair[1]) * a
        else:
            a = ez[:, rows[0]]
            dhx[:, rows[0]] += c * (p_pair[0] / pp_pair[0]) * a
            dhx[:, rows[1]] += c * (p_pair[1] / pp_pair[1]) * a
    return dhx, dhy


def absorbing_h_self_rate(block: MeshBlock, hx: np.ndarray, hy: np.ndarray,
                          edges) -> tuple[np.ndarray, np.ndarray]:
    """Damping half of the absorbing penalty on the H rates.

    Per edge this is the rank-one form -kappa u (v . h) on the two
    near-edge H lines, u_i = p_i/P+_i, v_i = p_i, kappa = eta/(2 mu):
    negative semidefinite in the P+ metric.
    """
    _check_absorbing_args(block, edges, hx=hx, hy=hy)
    inv_mu = 1.0 / (MU0 * block.materials.mu_rel)
    dhx = np.zeros(block.hx_shape())
    dhy = np.zeros(block.hy_shape())
    for edge in edges:
        eta, p_pair, pp_pair, _, rows = _edge_geometry(block, edge)
        b = _edge_h_proj(edge, hx, hy, p_pair, rows)
        kb = eta * (0.5 * inv_mu) * b
        if edge in ("W", "E"):
            dhy[rows[0], :] -= (p_pair[0] / pp_pair[0]) * kb
            dhy[rows[1], :] -= (p_pair[1] / pp_pair[1]) * kb
        else:
            dhx[:, rows[0]] -= (p_pair[0] / pp_pair[0]) * kb
            dhx[:, rows[1]] -= (p_pair[1] / pp_pair[1]) * kb
    return dhx, dhy


def absorbing_sat_ez(block: MeshBlock, ez: np.ndarray, hx: np.ndarray,
                     hy: np.ndarray, edges) -> np.ndarray:
    """Full absorbing-edge penalty on the Ez rate (damping + skew parts):
    -(a -/+ eta b)/(2 eta eps P-[edge]) on each selected edge line."""
    _check_absorbing_args(block, edges, ez=ez)
    return (absorbing_sat_ez_cross(block, hx, hy, edges)
            - absorbing_ez_damping(block, edges) * ez)


def absorbing_sat_h(block: MeshBlock, ez: np.ndarray, hx: np.ndarray,
                    hy: np.ndarray, edges) -> tuple[np.ndarray, np.ndarray]:
    """Full absorbing-edge penalty on the H rates (damping + skew parts).

    Together with the Ez-side penalty each absorbing edge's energy rate
    is -a^2/(2 eta) - eta b^2/2: strictly dissipative, and exactly the
    physical outgoing flux when the incoming characteristic vanishes.
    """
    dhx_c, dhy_c = absorbing_sat_h_cross(block, ez, edges)
    dhx_s, dhy_s = absorbing_h_self_rate(block, hx, hy, edges)
    return dhx_c + dhx_s, dhy_c + dhy_s


def advance_absorbing_h(block: MeshBlock, edges, dt: float, hx, hy,
                        hx_new, hy_new):
    """Crank-Nicolson solve of the rank-one H self-damping, in place.

    ``hx_new``/``hy_new`` arrive holding h + dt*(all other rates); this
    adds the absorbing self term integrated as (I - dt/2 M) h_next =
    (I + dt/2 M) h_old + dt r, solved in closed form per edge via the
    rank-one inversion identity.  Unconditionally stable in the P+
    metric for any dt, which keeps the time-step limit a property of
    the conservative part alone.  Edges are processed in W,E,S,N order
    (only overlapping-line cases on 2- or 3-cell axes notice).
    """
    _check_absorbing_args(block, edges, hx=hx, hy=hy)
    if not dt > 0:
        raise InvalidArgument("dt must be positive")
    inv_mu = 1.0 / (MU0 * block.materials.mu_rel)
    for edge in EDGES:
        if edge not in edges:
            continue
        eta, p_pair, pp_pair, _, rows = _edge_geometry(block, edge)
        u = (p_pair[0] / pp_pair[0], p_pair[1] / pp_pair[1])
        v = p_pair
        beta = (0.5 * dt * inv_mu) * eta  # dt*kappa/2 per tangential node
        field = hy_new if edge in ("W", "E") else hx_new
        old = hy if edge in ("W", "E") else hx
        if edge in ("W", "E"):
            line0, line1 = old[rows[0], :], old[rows[1], :]
        else:
            line0, line1 = old[:, rows[0]], old[:, rows[1]]
        half_kick = beta * (v[0] * line0 + v[1] * line1)
        if edge in ("W", "E"):
            r0 = field[rows[0], :] - u[0] * half_kick
            r1 = field[rows[1], :] - u[1] * half_kick
        else:
            r0 = field[:, rows[0]] - u[0] * half_kick
            r1 = field[:, rows[1]] - u[1] * half_kick
        corr = beta * (v[0] * r0 + v[1] * r1) / (
            1.0 + beta * (v[0] * u[0] + v[1] * u[1]))
        if edge in ("W", "E"):
            field[rows[0], :] = r0 - u[0] * corr
            field[rows[1], :] = r1 - u[1] * corr
        else:
            field[:, rows[0]] = r0 - u[0] * corr
            field[:, rows[1]] = r1 - u[1] * corr
