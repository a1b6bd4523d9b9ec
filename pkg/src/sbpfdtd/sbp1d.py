"""One-dimensional staggered summation-by-parts operators.

Two interlaced point sets live on a cell-size-h axis: x_minus holds the
n+1 cell-edge nodes (electric-field type) and x_plus the n midpoints
(magnetic-field type).  The first-derivative operators D+ (x_minus ->
x_plus points) and D- (x_plus -> x_minus points) use the two-point
staggered stencil in the interior; D- carries duplicated one-sided rows
at both ends.  Together with positive diagonal norms P+/P- and boundary
projection vectors p_left/p_right they satisfy the summation-by-parts
identity

    P-. D-  +  (P+ . D+)^T  =  -e_left p_left^T + e_right p_right^T

which makes any discrete energy built on the P norms change only through
boundary terms.  Everything downstream (weak boundary conditions, mesh
coupling, stability proofs) consumes exactly this identity.

Two operator families are provided, differing only in the boundary norm
weight b1:

* ``uniform-first-order``   b1 = 1    p_left = [2, -1]      (uniform P-)
* ``trapezoid-second-order`` b1 = 1/2  p_left = [3/2, -1/2]  (trapezoid P-,
  projection exact for linear data)

In both families the interior/closure structure forces a1 = a2 = 1, i.e.
uniform P+ weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument, OperatorUnderdetermined

FAMILIES = ("uniform-first-order", "trapezoid-second-order")

_B1 = {"uniform-first-order": 1.0, "trapezoid-second-order": 0.5}


@dataclass(frozen=True)
class StaggeredAxis:
    """Node (x_minus) and midpoint (x_plus) coordinates of one axis."""

    n_cells: int
    h: float
    x_minus: np.ndarray
    x_plus: np.ndarray


@dataclass(frozen=True)
class SbpOperators1D:
    """Difference/norm/projection operator set for one staggered axis.

    Matrices are stored dense (they are small and verification wants
    them explicit); the ``apply_*`` functions below are the matching
    stencil forms used by the field kernels.  ``p_plus``/``p_minus``
    hold the diagonals only.  ``closure`` records the defining scalar
    coefficients: a1/a2 (first/last P+ weights over h), b1 (boundary P-
    weight over h), alpha11/alpha12 (first D- closure row times h) and
    beta11 (second entry of p_left).
    """

    family: str
    n_cells: int
    h: float
    d_plus: np.ndarray
    d_minus: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray
    p_left: np.ndarray
    p_right: np.ndarray
    e_left: np.ndarray
    e_right: np.ndarray
    a1: float
    a2: float
    b1: float
    closure: dict = field(default_factory=dict)


def build_staggered_axis(n_cells: int, h: float) -> StaggeredAxis:
    """Axis with nodes at i*h (i = 0..n) and midpoints at (i+1/2)*h."""
    if not isinstance(n_cells, (int, np.integer)) or n_cells < 1:
        raise InvalidArgument(f"n_cells must be a positive integer, got {n_cells!r}")
    if not h > 0:
        raise InvalidArgument(f"h must be positive, got {h!r}")
    x_minus = np.arange(n_cells + 1, dtype=float) * h
    x_plus = (np.arange(n_cells, dtype=float) + 0.5) * h
    return StaggeredAxis(int(n_cells), float(h), x_minus, x_plus)


def build_sbp_1d(axis: StaggeredAxis, family: str = "uniform-first-order") -> SbpOperators1D:
    """Construct the operator set of the requested family on ``axis``.

    D+ rows are exact for polynomials up to degree 2 everywhere; D- is
    exact for degree <= 1 (its duplicated end rows are first order).
    The returned set satisfies the SBP identity to rounding, checked by
    :func:`sbp_identity_residual`.
    """
    if family not in FAMILIES:
        raise InvalidArgument(f"unknown family {family!r}; expected one of {FAMILIES}")
    n, h = axis.n_cells, axis.h
    if n < 2:
        raise OperatorUnderdetermined(
            f"n_cells = {n}: the two one-sided closure rows of d_minus would overlap"
        )
    b1 = _B1[family]

    d_plus = np.zeros((n, n + 1))
    idx = np.arange(n)
    d_plus[idx, idx] = -1.0 / h
    d_plus[idx, idx + 1] = 1.0 / h

    d_minus = np.zeros((n + 1, n))
    ii = np.arange(1, n)
    d_minus[ii, ii - 1] = -1.0 / h
    d_minus[ii, ii] = 1.0 / h
    d_minus[0, 0], d_minus[0, 1] = -1.0 / h, 1.0 / h
    d_minus[n, n - 2], d_minus[n, n - 1] = -1.0 / h, 1.0 / h

    p_plus = np.full(n, h)
    p_minus = np.full(n + 1, h)
    p_minus[0] = b1 * h
    p_minus[-1] = b1 * h

    p_left = np.zeros(n)
    p_left[0], p_left[1] = 1.0 + b1, -b1
    p_right = p_left[::-1].copy()

    e_left = np.zeros(n + 1)
    e_left[0] = 1.0
    e_right = np.zeros(n + 1)
    e_right[-1] = 1.0

    closure = {
        "a1": 1.0,
        "a2": 1.0,
        "b1": b1,
        "alpha11": -1.0,
        "alpha12": 1.0,
        "alpha21": -1.0,
        "beta11": -b1,
    }
    return SbpOperators1D(
        family=family, n_cells=n, h=h,
        d_plus=d_plus, d_minus=d_minus,
        p_plus=p_plus, p_minus=p_minus,
        p_left=p_left, p_right=p_right,
        e_left=e_left, e_right=e_right,
        a1=1.0, a2=1.0, b1=b1, closure=closure,
    )


def sbp_identity_residual(ops: SbpOperators1D) -> float:
    """Frobenius norm of Q- + Q+^T + e_left p_left^T - e_right p_right^T."""
    n = ops.n_cells
    if ops.d_minus.shape != (n + 1, n) or ops.d_plus.shape != (n, n + 1):
        raise InvalidArgument("operator dimensions inconsistent with n_cells")
    if len(ops.p_minus) != n + 1 or len(ops.p_plus) != n or len(ops.p_left) != n:
        raise InvalidArgument("norm/projection dimensions inconsistent with n_cells")
    q_minus = ops.p_minus[:, None] * ops.d_minus
    q_plus = ops.p_plus[:, None] * ops.d_plus
    r = (q_minus + q_plus.T
         + np.outer(ops.e_left, ops.p_left)
         - np.outer(ops.e_right, ops.p_right))
    return float(np.linalg.norm(r))


@dataclass(frozen=True)
class AccuracyResiduals:
    """Max-norm monomial-exactness residuals (degrees 0 and 1)."""

    d_minus_k0: float
    d_minus_k1: float
    d_plus_k0: float
    d_plus_k1: float

    def max(self) -> float:
        return max(self.d_minus_k0, self.d_minus_k1, self.d_plus_k0, self.d_plus_k1)


def accuracy_residuals(ops: SbpOperators1D, axis: StaggeredAxis) -> AccuracyResiduals:
    """Check D-. x_plus^k = k x_minus^(k-1) and the D+ counterpart, k = 0, 1."""
    if ops.n_cells != axis.n_cells or ops.h != axis.h:
        raise InvalidArgument("operators were not built on this axis")
    ones_m = np.ones_like(axis.x_minus)
    ones_p = np.ones_like(axis.x_plus)
    return AccuracyResiduals(
        d_minus_k0=float(np.max(np.abs(ops.d_minus @ ones_p))),
        d_minus_k1=float(np.max(np.abs(ops.d_minus @ axis.x_plus - ones_m))),
        d_plus_k0=float(np.max(np.abs(ops.d_plus @ ones_m))),
        d_plus_k1=float(np.max(np.abs(ops.d_plus @ axis.x_minus - ones_p))),
    )


# ---------------------------------------------------------------------------
# Stencil (matrix-free) application.  F is 2D; the staggered axis runs along
# ``axis`` (0 or 1), anything else is carried along.  These must agree with
# the dense matrices under unit-vector probing (bitwise; tested).

def apply_d_plus(ops: SbpOperators1D, f: np.ndarray, axis: int) -> np.ndarray:
    """D+ along ``axis``: n+1 node values -> n midpoint derivatives."""
    if f.shape[axis] != ops.n_cells + 1:
        raise InvalidArgument(
            f"axis {axis} has {f.shape[axis]} entries, expected {ops.n_cells + 1}"
        )
    return np.diff(f, axis=axis) * (1.0 / ops.h)


def apply_d_minus(ops: SbpOperators1D, g: np.ndarray, axis: int) -> np.ndarray:
    """D- along ``axis``: n midpoint values -> n+1 node derivatives.

    Interior rows are centered two-point differences; the first and last
    rows duplicate their nearest interior row (one-sided closures).
    """
    n = ops.n_cells
    if g.shape[axis] != n:
        raise InvalidArgument(f"axis {axis} has {g.shape[axis]} entries, expected {n}")
    core = np.diff(g, axis=axis) * (1.0 / ops.h)
    shape = list(g.shape)
    shape[axis] = n + 1
    out = np.empty(shape, dtype=np.result_type(g, float))
    head = [slice(None)] * g.ndim
    head[axis] = slice(1, n)
    out[tuple(head)] = core
    first = [slice(None)] * g.ndim
    first[axis] = 0
    edge = [slice(None)] * g.ndim
    edge[axis] = 1 if n > 1 else 0
    out[tuple(first)] = out[tuple(edge)]
    last = [slice(None)] * g.ndim
    last[axis] = n
    edge[axis] = n - 1
    out[tuple(last)] = out[tuple(edge)]
    return out


def format_operator_dump(ops: SbpOperators1D) -> str:
    """Plain-text listing of the operator set at full round-trip precision.

    Row-major entries, one matrix/vector per stanza; consumed by the CLI
    verify report.
    """
    lines = [f"family {ops.family}  n_cells {ops.n_cells}  h {ops.h!r}"]

    def emit(name, arr):
        a = np.atleast_2d(arr)
        lines.append(f"{name} {a.shape[0]} {a.shape[1]}")
        for row in a:
            lines.append(" ".join(repr(float(v)) for v in row))

    emit("d_plus", ops.d_plus)
    emit("d_minus", ops.d_minus)
    emit("p_plus", ops.p_plus)
    emit("p_minus", ops.p_minus)
    emit("p_left", ops.p_left)
    emit("p_right", ops.p_right)
    return "\n".join(lines) + "\n"
