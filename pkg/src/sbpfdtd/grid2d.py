"""Rectangular mesh blocks, staggered field storage, and curl kernels.

A block is a uniform square-cell grid with the three TM fields on
interlaced point sets:

    ez  (nx+1, ny+1)  cell-edge nodes in both directions
    hy  (nx,   ny+1)  x midpoints, y nodes
    hx  (nx+1, ny  )  x nodes, y midpoints

Arrays are C-ordered, so the flat view is x-major: linear index =
ix * (y count) + iy.  All file formats and global state vectors use the
same order.

The curl operations apply the 1D staggered operators along one axis via
their stencil forms (sliced differences), never through assembled
matrices; Kronecker structure (Dx (x) Iy) F = Dx F and (Ix (x) Dy) F =
F Dy^T makes that exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import EPS0, MU0
from .errors import InvalidArgument, LayoutMismatch, UnsupportedPairing
from .sbp1d import (
    SbpOperators1D,
    StaggeredAxis,
    apply_d_minus,
    apply_d_plus,
    build_sbp_1d,
    build_staggered_axis,
)

EDGES = ("W", "E", "S", "N")


@dataclass
class MaterialMap:
    """Material samples on the Ez node set of one block.

    ``eps_rel``/``sigma_e``/``density`` are (nx+1, ny+1) arrays;
    ``mu_rel`` is a scalar (no magnetic materials).  ``density`` only
    feeds SAR.  ``pec_mask`` marks nodes hard-zeroed after each E
    update (staircased conductor posts), separate from the weak
    boundary machinery.
    """

    eps_rel: np.ndarray
    sigma_e: np.ndarray
    mu_rel: float
    density: np.ndarray
    pec_mask: np.ndarray

    def validate(self, nx: int, ny: int) -> None:
        shape = (nx + 1, ny + 1)
        for name in ("eps_rel", "sigma_e", "density", "pec_mask"):
            arr = getattr(self, name)
            if arr.shape != shape:
                raise LayoutMismatch(f"{name} has shape {arr.shape}, expected {shape}")
        if not (self.eps_rel > 0).all():
            raise InvalidArgument("eps_rel must be positive everywhere")
        if not (self.sigma_e >= 0).all():
            raise InvalidArgument("sigma_e must be nonnegative")
        if not (self.density > 0).all():
            raise InvalidArgument("density must be positive everywhere")
        if not self.mu_rel > 0:
            raise InvalidArgument("mu_rel must be positive")


def vacuum_materials(nx: int, ny: int) -> MaterialMap:
    shape = (nx + 1, ny + 1)
    return MaterialMap(
        eps_rel=np.ones(shape),
        sigma_e=np.zeros(shape),
        mu_rel=1.0,
        density=np.full(shape, 1.0),
        pec_mask=np.zeros(shape, dtype=bool),
    )


@dataclass
class MeshBlock:
    """One uniform square-cell region with its operators and materials."""

    id: str
    origin: tuple[float, float]
    nx: int
    ny: int
    h: float
    axis_x: StaggeredAxis
    axis_y: StaggeredAxis
    ops_x: SbpOperators1D
    ops_y: SbpOperators1D
    materials: MaterialMap

    @property
    def extent(self) -> tuple[float, float]:
        return (self.nx * self.h, self.ny * self.h)

    def ez_shape(self):
        return (self.nx + 1, self.ny + 1)

    def hx_shape(self):
        return (self.nx + 1, self.ny)

    def hy_shape(self):
        return (self.nx, self.ny + 1)

    def field_shape(self, kind: str):
        try:
            return {"ez": self.ez_shape, "hx": self.hx_shape, "hy": self.hy_shape}[kind]()
        except KeyError:
            raise InvalidArgument(f"unknown field kind {kind!r}") from None

    def state_dimension(self) -> int:
        return (self.nx + 1) * (self.ny + 1) + (self.nx + 1) * self.ny + self.nx * (self.ny + 1)


def build_block(block_id: str, origin, nx: int, ny: int, h: float,
                family: str = "uniform-first-order",
                materials: MaterialMap | None = None) -> MeshBlock:
    if nx < 2 or ny < 2:
        raise InvalidArgument(f"block {block_id!r}: nx and ny must be >= 2, got {nx}x{ny}")
    axis_x = build_staggered_axis(nx, h)
    axis_y = build_staggered_axis(ny, h)
    mats = materials if materials is not None else vacuum_materials(nx, ny)
    mats.validate(nx, ny)
    return MeshBlock(
        id=str(block_id), origin=(float(origin[0]), float(origin[1])),
        nx=nx, ny=ny, h=float(h),
        axis_x=axis_x, axis_y=axis_y,
        ops_x=build_sbp_1d(axis_x, family), ops_y=build_sbp_1d(axis_y, family),
        materials=mats,
    )


@dataclass
class FieldState:
    """TM field triple of one block; finite values only."""

    ez: np.ndarray
    hx: np.ndarray
    hy: np.ndarray

    def copy(self) -> "FieldState":
        return FieldState(self.ez.copy(), self.hx.copy(), self.hy.copy())


def zero_state(block: MeshBlock) -> FieldState:
    return FieldState(
        ez=np.zeros(block.ez_shape()),
        hx=np.zeros(block.hx_shape()),
        hy=np.zeros(block.hy_shape()),
    )


def _check_layout(block: MeshBlock, kind: str, arr: np.ndarray) -> None:
    want = block.field_shape(kind)
    if arr.shape != want:
        raise LayoutMismatch(
            f"block {block.id!r}: {kind} has shape {arr.shape}, expected {want}"
        )


def curl_h_to_ez(block: MeshBlock, hx: np.ndarray, hy: np.ndarray) -> np.ndarray:
    """Curl part of the Ez rate: (1/eps) [Dx- hy - hx Dy-^T].

    Conductivity is the integrator's business; this is the lossless
    curl only.
    """
    _check_layout(block, "hx", hx)
    _check_layout(block, "hy", hy)
    curl = apply_d_minus(block.ops_x, hy, axis=0) - apply_d_minus(block.ops_y, hx, axis=1)
    return curl / (EPS0 * block.materials.eps_rel)


def curl_ez_to_h(block: MeshBlock, ez: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """H rates from Ez: hx-rate = -(1/mu) ez Dy+^T, hy-rate = (1/mu) Dx+ ez."""
    _check_layout(block, "ez", ez)
    inv_mu = 1.0 / (MU0 * block.materials.mu_rel)
    hx_rate = -inv_mu * apply_d_plus(block.ops_y, ez, axis=1)
    hy_rate = inv_mu * apply_d_plus(block.ops_x, ez, axis=0)
    return hx_rate, hy_rate


def boundary_trace(block: MeshBlock, kind: str, edge: str, arr: np.ndarray) -> np.ndarray:
    """Field values along one edge.

    Ez traces are exact boundary samples (selection); H traces are
    extrapolated to the boundary through the two-entry projection
    vector applied along the normal direction.  Hx pairs with S/N
    edges, Hy with E/W; other pairings have no boundary value.
    """
    if edge not in EDGES:
        raise InvalidArgument(f"unknown edge {edge!r}")
    _check_layout(block, kind, arr)
    if kind == "ez":
        return {"W": arr[0, :], "E": arr[-1, :],
                "S": arr[:, 0], "N": arr[:, -1]}[edge].copy()
    if kind == "hx":
        if edge not in ("S", "N"):
            raise UnsupportedPairing("hx has boundary values on S/N edges only")
        p = block.ops_y.p_left if edge == "S" else block.ops_y.p_right
        i0, i1 = (0, 1) if edge == "S" else (-1, -2)
        return p[i0] * arr[:, i0] + p[i1] * arr[:, i1]
    if kind == "hy":
        if edge not in ("W", "E"):
            raise UnsupportedPairing("hy has boundary values on E/W edges only")
        p = block.ops_x.p_left if edge == "W" else block.ops_x.p_right
        i0, i1 = (0, 1) if edge == "W" else (-1, -2)
        return p[i0] * arr[i0, :] + p[i1] * arr[i1, :]
    raise InvalidArgument(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# Snapshot files: one header line "nx ny h origin_x origin_y field", then
# node values in x-major order, full round-trip precision.

def write_snapshot(path, block: MeshBlock, kind: str, arr: np.ndarray) -> None:
    # derived node quantities (SAR) share the Ez layout
    _check_layout(block, "ez" if kind == "sar" else kind, arr)
    with open(path, "w") as f:
        f.write(f"{block.nx} {block.ny} {block.h!r} "
                f"{block.origin[0]!r} {block.origin[1]!r} {kind}\n")
        for v in arr.ravel():
            f.write(f"{float(v)!r}\n")


def read_snapshot(path):
    """Returns (header dict, 2D array in the field's layout)."""
    with open(path) as f:
        head = f.readline().split()
        nx, ny, h, ox, oy, kind = (int(head[0]), int(head[1]), float(head[2]),
                                   float(head[3]), float(head[4]), head[5])
        values = np.array([float(line) for line in f])
    shape = {"ez": (nx + 1, ny + 1), "hx": (nx + 1, ny), "hy": (nx, ny + 1),
             "sar": (nx + 1, ny + 1)}[kind]
    if values.size != shape[0] * shape[1]:
        raise InvalidArgument(f"snapshot holds {values.size} values, expected {shape}")
    return ({"nx": nx, "ny": ny, "h": h, "origin": (ox, oy), "field": kind},
            values.reshape(shape))
