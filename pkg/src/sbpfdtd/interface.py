"""Energy-stable coupling of two blocks sharing a full edge.

A coarse and a fine block (integer cell ratio r along the shared edge)
exchange boundary data through a prolongation matrix T (coarse trace ->
fine trace) and a restriction T_hat (fine -> coarse).  The pair is
norm-compatible,

    T^T P_fine = P_coarse T_hat,

with P the tangential node-norm diagonals; T_hat is constructed from T
so this holds exactly, which is precisely what the energy cancellation
consumes.  Penalties mirror the PEC ones: each side is pushed toward
the neighbor's mapped trace,

    increment = sigma * s(edge) * (1/material) * Inject(own - mapped other)

with the per-edge flux sign s(E) = s(S) = +1, s(W) = s(N) = -1 (the
sign the edge carries in the SBP energy identity).  With all four
sigmas = -1/2 every coupling term cancels in the weighted energy rate
and the two-block operator is exactly skew in the W inner product.

Conforming couplings (ratio 1, same h) use T = T_hat = I.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import EPS0, MU0
from .errors import InvalidArgument
from .grid2d import FieldState, MeshBlock, boundary_trace

OPPOSITE = {"W": "E", "E": "W", "S": "N", "N": "S"}

# sign each edge's boundary term carries in the energy identity
FLUX_SIGN = {"E": 1.0, "S": 1.0, "W": -1.0, "N": -1.0}


def build_prolongation(n_coarse_nodes: int, r: int) -> np.ndarray:
    """Piecewise-linear trace prolongation, (r*(n-1)+1) x n.

    Coincident fine nodes get injection rows; in-between nodes convex
    combinations with weights ((r-k)/r, k/r).  Rows sum to 1 exactly.
    """
    if not isinstance(r, (int, np.integer)) or r < 2:
        raise InvalidArgument(f"refinement ratio must be an integer >= 2, got {r!r}")
    if n_coarse_nodes < 2:
        raise InvalidArgument("need at least 2 coarse trace nodes")
    n_fine = r * (n_coarse_nodes - 1) + 1
    t_mat = np.zeros((n_fine, n_coarse_nodes))
    for i in range(n_fine):
        q, k = divmod(i, r)
        if k == 0:
            t_mat[i, q] = 1.0
        else:
            t_mat[i, q] = (r - k) / r
            t_mat[i, q + 1] = k / r
    return t_mat


def build_compatible_restriction(t_mat: np.ndarray, p_fine: np.ndarray,
                                 p_coarse: np.ndarray) -> np.ndarray:
    """T_hat = P_coarse^-1 T^T P_fine; compatibility holds by construction."""
    p_fine = np.asarray(p_fine, dtype=float)
    p_coarse = np.asarray(p_coarse, dtype=float)
    if p_fine.ndim != 1 or p_coarse.ndim != 1:
        raise InvalidArgument("norm diagonals must be 1-D arrays")
    if t_mat.shape != (len(p_fine), len(p_coarse)):
        raise InvalidArgument(
            f"t_mat shape {t_mat.shape} inconsistent with norms "
            f"({len(p_fine)}, {len(p_coarse)})")
    if not (p_fine > 0).all() or not (p_coarse > 0).all():
        raise InvalidArgument("norm diagonals must be strictly positive")
    return (t_mat * p_fine[:, None]).T / p_coarse[:, None]


def compatibility_residual(t_mat, t_hat, p_fine, p_coarse) -> float:
    """Max-abs entry of T^T P_fine - P_coarse T_hat."""
    r = t_mat.T * np.asarray(p_fine)[None, :] - np.asarray(p_coarse)[:, None] * t_hat
    return float(np.max(np.abs(r)))


def identity_transfer(n_nodes: int) -> np.ndarray:
    """Conforming-interface transfer (ratio 1)."""
    return np.eye(n_nodes)


# Printed reference restriction stencil (diagnostic data preset, not used by
# the solver).  Top row left-aligned, interior rows on a 2-column shift,
# bottom row mirrored right-aligned.
_REF_TOP = (0.5505, 0.5, -0.5505, 0.0, 0.0)
_REF_INTERIOR = (-0.0252, 0.25, 0.5505, 0.25, -0.0252)


def reference_restriction_preset(n_fine_nodes: int) -> np.ndarray:
    """Banded restriction built from the fixed reference coefficients above.

    For diagnostic comparison only: its interior rows sum to 1.0001 and
    its boundary rows to 0.5, and no compatible prolongation mate is
    available, so nothing stability-critical may consume it.
    """
    if n_fine_nodes < 5 or n_fine_nodes % 2 == 0:
        raise InvalidArgument(
            f"need an odd n_fine_nodes >= 5 to host the banded pattern, got {n_fine_nodes}")
    n_coarse = (n_fine_nodes - 1) // 2 + 1
    t_hat = np.zeros((n_coarse, n_fine_nodes))
    t_hat[0, :5] = _REF_TOP
    for i in range(1, n_coarse - 1):
        t_hat[i, 2 * i - 2: 2 * i + 3] = _REF_INTERIOR
    t_hat[-1, -5:] = _REF_TOP[::-1]
    return t_hat


@dataclass
class InterfaceCoupling:
    """One coarse<->fine edge pairing with its transfer operators.

    ``edge_of_coarse`` names the coarse block's edge on the interface;
    the fine block sits on the opposite side.  Horizontal interfaces
    (coarse edge N or S) couple Ez with Hx; vertical ones (E or W)
    couple Ez with Hy.
    """

    coarse_id: str
    fine_id: str
    edge_of_coarse: str
    ratio: int
    t_mat: np.ndarray
    t_hat: np.ndarray
    sigma_ez_coarse: float = -0.5
    sigma_ez_fine: float = -0.5
    sigma_h_coarse: float = -0.5
    sigma_h_fine: float = -0.5

    @property
    def edge_of_fine(self) -> str:
        return OPPOSITE[self.edge_of_coarse]

    @property
    def orientation(self) -> str:
        return "horizontal" if self.edge_of_coarse in ("N", "S") else "vertical"

    @property
    def h_field(self) -> str:
        return "hx" if self.orientation == "horizontal" else "hy"


def build_coupling(coarse: MeshBlock, fine: MeshBlock, edge_of_coarse: str,
                   ratio: int, sigmas=(-0.5, -0.5, -0.5, -0.5)) -> InterfaceCoupling:
    """Assemble the coupling for two blocks already known to share the edge."""
    if edge_of_coarse not in OPPOSITE:
        raise InvalidArgument(f"unknown edge {edge_of_coarse!r}")
    if not isinstance(ratio, (int, np.integer)) or ratio < 1:
        raise InvalidArgument(f"ratio must be an integer >= 1, got {ratio!r}")
    tang_c = coarse.ny if edge_of_coarse in ("E", "W") else coarse.nx
    tang_f = fine.ny if edge_of_coarse in ("E", "W") else fine.nx
    if tang_f != ratio * tang_c:
        raise InvalidArgument(
            f"interface {coarse.id}/{fine.id}: fine tangential cells {tang_f} "
            f"!= ratio {ratio} x coarse {tang_c}")
    if ratio == 1:
        t_mat = identity_transfer(tang_c + 1)
        t_hat = identity_transfer(tang_c + 1)
    else:
        t_mat = build_prolongation(tang_c + 1, int(ratio))
        ops_c = coarse.ops_y if edge_of_coarse in ("E", "W") else coarse.ops_x
        ops_f = fine.ops_y if edge_of_coarse in ("E", "W") else fine.ops_x
        t_hat = build_compatible_restriction(t_mat, ops_f.p_minus, ops_c.p_minus)
    return InterfaceCoupling(
        coarse_id=coarse.id, fine_id=fine.id, edge_of_coarse=edge_of_coarse,
        ratio=int(ratio), t_mat=t_mat, t_hat=t_hat,
        sigma_ez_coarse=sigmas[0], sigma_ez_fine=sigmas[1],
        sigma_h_coarse=sigmas[2], sigma_h_fine=sigmas[3],
    )


def _edge_geometry(block: MeshBlock, edge: str):
    """(normal ops, line index, p_vec, tangential eps slice helper)."""
    if edge in ("W", "E"):
        ops = block.ops_x
        line = 0 if edge == "W" else -1
        p_vec = ops.p_left if edge == "W" else ops.p_right
        h_lines = (0, 1) if edge == "W" else (-1, -2)
    else:
        ops = block.ops_y
        line = 0 if edge == "S" else -1
        p_vec = ops.p_left if edge == "S" else ops.p_right
        h_lines = (0, 1) if edge == "S" else (-1, -2)
    pm_edge = ops.p_minus[line]
    return ops, line, p_vec, h_lines, pm_edge


def _bracket(coupling: InterfaceCoupling, coarse: MeshBlock, fine: MeshBlock,
             coarse_state: FieldState, fine_state: FieldState, kind: str):
    """[own - mapped other] for both sides, traces taken per orientation."""
    e_c, e_f = coupling.edge_of_coarse, coupling.edge_of_fine
    arr_c = getattr(coarse_state, kind)
    arr_f = getattr(fine_state, kind)
    tr_c = boundary_trace(coarse, kind, e_c, arr_c)
    tr_f = boundary_trace(fine, kind, e_f, arr_f)
    return tr_c - coupling.t_hat @ tr_f, tr_f - coupling.t_mat @ tr_c


def interface_sat_ez(coupling: InterfaceCoupling, coarse: MeshBlock, fine: MeshBlock,
                     coarse_state: FieldState, fine_state: FieldState):
    """Ez-rate penalty pair (coarse increment, fine increment).

    Each side's interface Ez line is driven by the mismatch between its
    own extrapolated H trace and the neighbor's mapped one; the
    tangential norm cancels, leaving a 1/(P- edge weight) injection.
    """
    kind = coupling.h_field
    br_c, br_f = _bracket(coupling, coarse, fine, coarse_state, fine_state, kind)
    out = []
    for block, edge, sigma, br in (
        (coarse, coupling.edge_of_coarse, coupling.sigma_ez_coarse, br_c),
        (fine, coupling.edge_of_fine, coupling.sigma_ez_fine, br_f),
    ):
        _, line, _, _, pm_edge = _edge_geometry(block, edge)
        d_ez = np.zeros(block.ez_shape())
        eps_line = EPS0 * (block.materials.eps_rel[line, :] if edge in ("W", "E")
                           else block.materials.eps_rel[:, line])
        vals = sigma * FLUX_SIGN[edge] / (eps_line * pm_edge) * br
        if edge in ("W", "E"):
            d_ez[line, :] = vals
        else:
            d_ez[:, line] = vals
        out.append(d_ez)
    return out[0], out[1]


def interface_sat_h(coupling: InterfaceCoupling, coarse: MeshBlock, fine: MeshBlock,
                    coarse_state: FieldState, fine_state: FieldState):
    """H-rate penalty pair (coarse increment, fine increment).

    The Ez trace mismatch is injected through the projection vector on
    the two interface-adjacent H lines (Hx for horizontal interfaces,
    Hy for vertical ones).
    """
    br_c, br_f = _bracket(coupling, coarse, fine, coarse_state, fine_state, "ez")
    kind = coupling.h_field
    out = []
    for block, edge, sigma, br in (
        (coarse, coupling.edge_of_coarse, coupling.sigma_h_coarse, br_c),
        (fine, coupling.edge_of_fine, coupling.sigma_h_fine, br_f),
    ):
        ops, _, p_vec, h_lines, _ = _edge_geometry(block, edge)
        inv_mu = 1.0 / (MU0 * block.materials.mu_rel)
        d_h = np.zeros(block.field_shape(kind))
        c = sigma * FLUX_SIGN[edge] * inv_mu
        for k in h_lines:
            if edge in ("W", "E"):
                d_h[k, :] = c * (p_vec[k] / ops.p_plus[k]) * br
            else:
                d_h[:, k] = c * (p_vec[k] / ops.p_plus[k]) * br
        out.append(d_h)
    return out[0], out[1]
