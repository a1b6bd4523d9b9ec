"""Shared helpers for building small test systems."""

import numpy as np

from sbpfdtd.grid2d import MeshBlock, build_block, vacuum_materials, zero_state
from sbpfdtd.interface import build_coupling
from sbpfdtd.system import SimSystem


def vacuum_block(block_id, origin, nx, ny, h, family="trapezoid-second-order"):
    return build_block(block_id, origin, nx, ny, h, family, vacuum_materials(nx, ny))


def two_block_system(edge_of_coarse="W", ratio=2, family="trapezoid-second-order",
                     nc=4, hc=0.5, n_normal_fine=4,
                     sigmas=(-0.5, -0.5, -0.5, -0.5)) -> SimSystem:
    """Square coarse block plus a fine neighbor across one of its edges.

    The fine block matches the coarse edge length with ``ratio`` times
    the tangential cell count; its normal extent is ``n_normal_fine``
    fine cells.  All remaining edges are PEC.
    """
    hf = hc / ratio
    coarse = vacuum_block("coarse", (0.0, 0.0), nc, nc, hc, family)
    tang_f = ratio * nc
    if edge_of_coarse in ("W", "E"):
        shape_f = (n_normal_fine, tang_f)
        ox = -n_normal_fine * hf if edge_of_coarse == "W" else nc * hc
        origin_f = (ox, 0.0)
    else:
        shape_f = (tang_f, n_normal_fine)
        oy = -n_normal_fine * hf if edge_of_coarse == "S" else nc * hc
        origin_f = (0.0, oy)
    fine = vacuum_block("fine", origin_f, shape_f[0], shape_f[1], hf, family)
    coupling = build_coupling(coarse, fine, edge_of_coarse, ratio, sigmas=sigmas)
    return SimSystem(blocks=[coarse, fine], interfaces=[coupling])


def random_states(system, seed=0):
    rng = np.random.default_rng(seed)
    states = []
    for b in system.blocks:
        st = zero_state(b)
        st.ez[:] = rng.standard_normal(b.ez_shape())
        st.hx[:] = rng.standard_normal(b.hx_shape())
        st.hy[:] = rng.standard_normal(b.hy_shape())
        states.append(st)
    return states
