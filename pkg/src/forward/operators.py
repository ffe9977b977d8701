"""Layer-potential kernels and Nystrom matrices on a tapered surface.

Kernels are per unit arc length with d = x - y and r = |d|:

    S(x, y)  = (i/4) H0(kr)
    K(x, y)  = (ik/4) H1(kr) (d . nu_y) / r              normal derivative at y
    K'(x, y) = -(ik/4) H1(kr) (d . nu_x) / r             normal derivative at x
    T(x, y)  = (ik/4) [H1/r (nu_x . nu_y) + (k H0/r^2 - 2 H1/r^3)(d . nu_x)(d . nu_y)]

Matrix columns carry the node weights. Diagonals use the punctured-trapezoid
log correction h*log(h/2pi) for S and for T(k+) - T(k-), and the curvature
limit for K and K'.
"""

import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline

from src.forward.errors import GeometryError
from src.specfun.bessel import EULER_GAMMA, hankel01
from src.surfaces.catalog import normal_at
from src.surfaces.quadrature import NodeSet, taper_factor

logger = logging.getLogger(__name__)

ROW_BLOCK = 256

# near-field correction window, in node spacings
BLEND_INNER = 4.0
BLEND_OUTER = 8.0
MAX_REFINEMENT = 400


def _geometry(x: np.ndarray, y: np.ndarray):
    d = x[:, None, :] - y[None, :, :]
    r = np.hypot(d[..., 0], d[..., 1])
    return d, r


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]


def single_layer_kernel(k: float, d: np.ndarray, r: np.ndarray) -> np.ndarray:
    h0, _ = hankel01(k * r)
    return 0.25j * h0


def double_layer_kernel(k: float, d: np.ndarray, r: np.ndarray, nu_y: np.ndarray) -> np.ndarray:
    _, h1 = hankel01(k * r)
    return 0.25j * k * h1 * _dot(d, nu_y) / r


def adjoint_kernel(k: float, d: np.ndarray, r: np.ndarray, nu_x: np.ndarray) -> np.ndarray:
    _, h1 = hankel01(k * r)
    return -0.25j * k * h1 * _dot(d, nu_x) / r


def hypersingular_kernel(k: float, d: np.ndarray, r: np.ndarray,
                         nu_x: np.ndarray, nu_y: np.ndarray) -> np.ndarray:
    """Mixed second normal derivative; with nu_x = (0, 1) it is d/dx2 of the double layer."""
    h0, h1 = hankel01(k * r)
    return 0.25j * k * (
        h1 / r * _dot(nu_x, nu_y)
        + (k * h0 / r**2 - 2.0 * h1 / r**3) * _dot(d, nu_x) * _dot(d, nu_y)
    )


def single_layer_gradient(k: float, d: np.ndarray, r: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Derivative of Phi_k(x, y) in x along ``direction``."""
    _, h1 = hankel01(k * r)
    return -0.25j * k * h1 * _dot(d, direction) / r


def log_constant(k: float) -> complex:
    """C_k in Phi_k(x, y) = -(1/2pi) log r + C_k + o(1)."""
    return 0.25j - (math.log(k / 2.0) + EULER_GAMMA) / (2.0 * math.pi)


def hypersingular_difference_constant(k_plus: float, k_minus: float) -> complex:
    """Constant term of T(k+) - T(k-) at coincident points."""
    total = 0.0j
    for k, sign in ((k_plus, 1.0), (k_minus, -1.0)):
        total += sign * (
            -(k * k / (4.0 * math.pi)) * math.log(k / 2.0)
            + k * k * (1.0 - 2.0 * EULER_GAMMA) / (8.0 * math.pi)
            + 0.125j * k * k
        )
    return total


def _log_factor(nodes: NodeSet) -> np.ndarray:
    return np.log(nodes.jacobian * nodes.step / (2.0 * math.pi))


def _assemble(nodes: NodeSet, block_fn, diagonal: np.ndarray) -> np.ndarray:
    """Fill a weighted Nystrom matrix row block by row block."""
    n = len(nodes)
    matrix = np.empty((n, n), dtype=complex)
    pts = nodes.points
    for start in range(0, n, ROW_BLOCK):
        stop = min(start + ROW_BLOCK, n)
        rows = np.arange(start, stop)
        d, r = _geometry(pts[rows], pts)
        local = rows - start
        r[local, rows] = 1.0
        block = block_fn(d, r, rows)
        block *= nodes.weight[None, :]
        block[local, rows] = diagonal[rows]
        matrix[start:stop] = block
    return matrix


def single_layer_matrix(nodes: NodeSet, k: float) -> np.ndarray:
    diagonal = nodes.weight * (log_constant(k) - _log_factor(nodes) / (2.0 * math.pi))
    return _assemble(nodes, lambda d, r, rows: single_layer_kernel(k, d, r), diagonal)


def double_layer_matrix(nodes: NodeSet, k: float, orientation: float = 1.0) -> np.ndarray:
    """Double-layer matrix for normals ``orientation * nodes.normals`` (+1 is downward)."""
    normals = orientation * nodes.normals
    curvature = -orientation * nodes.d2f / (4.0 * math.pi * nodes.jacobian**3)
    return _assemble(
        nodes,
        lambda d, r, rows: double_layer_kernel(k, d, r, normals[None, :, :]),
        nodes.weight * curvature,
    )


def adjoint_double_layer_matrix(nodes: NodeSet, k: float, orientation: float = 1.0) -> np.ndarray:
    normals = orientation * nodes.normals
    curvature = -orientation * nodes.d2f / (4.0 * math.pi * nodes.jacobian**3)
    return _assemble(
        nodes,
        lambda d, r, rows: adjoint_kernel(k, d, r, normals[rows][:, None, :]),
        nodes.weight * curvature,
    )


def hypersingular_difference_matrix(nodes: NodeSet, k_plus: float, k_minus: float,
                                    orientation: float = 1.0) -> np.ndarray:
    """T(k_plus) - T(k_minus); the leading singularities cancel, a log term remains."""
    normals = orientation * nodes.normals
    log_coefficient = -(k_plus**2 - k_minus**2) / (4.0 * math.pi)
    diagonal = nodes.weight * (
        hypersingular_difference_constant(k_plus, k_minus) + log_coefficient * _log_factor(nodes)
    )

    def block(d, r, rows):
        nu_x = normals[rows][:, None, :]
        nu_y = normals[None, :, :]
        return (hypersingular_kernel(k_plus, d, r, nu_x, nu_y)
                - hypersingular_kernel(k_minus, d, r, nu_x, nu_y))

    return _assemble(nodes, block, diagonal)


# ---------------------------------------------------------------------------
# Evaluation off the surface
# ---------------------------------------------------------------------------

def _smooth_transition(t: np.ndarray) -> np.ndarray:
    """C-infinity step from 0 (t <= 0) to 1 (t >= 1)."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def surface_offset(nodes: NodeSet, points: np.ndarray) -> np.ndarray:
    """Approximate signed normal distance of points from the surface (positive above)."""
    profile = nodes.profile
    x1 = points[:, 0]
    return (points[:, 1] - profile.height(x1)) / profile.jacobian(x1)


def check_side(nodes: NodeSet, points: np.ndarray, side: str) -> np.ndarray:
    """Raise GeometryError unless every point lies strictly on ``side`` ("above"/"below")."""
    offset = surface_offset(nodes, points)
    if np.any(offset == 0.0) or np.any(np.abs(offset) < 1e-12):
        raise GeometryError("Evaluation point lies on the surface")
    wrong = offset < 0 if side == "above" else offset > 0
    if np.any(wrong):
        bad = points[np.argmax(wrong)].tolist()
        raise GeometryError(f"Evaluation point {bad} is not {side} the surface")
    return offset


def evaluation_matrix(nodes: NodeSet, targets: np.ndarray, kernel_fn,
                      near_spacings: float = 3.0) -> np.ndarray:
    """Weighted kernel matrix mapping node densities to values at ``targets``.

    ``kernel_fn(d, r, x, nu_y)`` returns the kernel for separations d of shape
    (T, S, 2). Targets closer than ``near_spacings`` node spacings to the
    surface get a local correction: the kernel-times-density product is
    re-integrated on a refined grid inside a smooth window, with the density
    upsampled by cubic splines.
    """
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    d, r = _geometry(targets, nodes.points)
    if np.any(r == 0.0):
        raise GeometryError("Evaluation point coincides with a surface node")
    matrix = kernel_fn(d, r, targets, nodes.normals[None, :, :]) * nodes.weight[None, :]

    offset = np.abs(surface_offset(nodes, targets))
    spacing = nodes.step * nodes.profile.jacobian(targets[:, 0])
    near = np.flatnonzero(offset < near_spacings * spacing)
    for t in near:
        _correct_near_row(nodes, targets[t], offset[t], kernel_fn, matrix[t])
    if len(near):
        logger.debug("Near-field correction applied to %d of %d targets", len(near), len(targets))
    return matrix


def _correct_near_row(nodes: NodeSet, target: np.ndarray, distance: float,
                      kernel_fn, row: np.ndarray) -> None:
    h = nodes.step
    s = nodes.s
    x1 = target[0]
    window = np.flatnonzero(np.abs(s - x1) <= BLEND_OUTER * h)
    if len(window) < 2:
        return
    lo, hi = window[0], window[-1]

    def blend(values):
        return 1.0 - _smooth_transition((np.abs(values - x1) - BLEND_INNER * h) / ((BLEND_OUTER - BLEND_INNER) * h))

    x = target[None, :]

    # coarse contribution to remove
    coarse = blend(s[window])
    row[window] -= coarse * kernel_fn(
        *_geometry(x, nodes.points[window]), x, nodes.normals[window][None, :, :]
    )[0] * nodes.weight[window]

    # refined contribution to add back
    refine = min(MAX_REFINEMENT, max(1, math.ceil(4.0 * h * nodes.jacobian[window].max() / distance)))
    fine_s = np.linspace(s[lo], s[hi], (hi - lo) * refine + 1)
    fine_h = fine_s[1] - fine_s[0]
    profile = nodes.profile
    fine_points = profile.points(fine_s)
    fine_normals = normal_at(profile, fine_s)
    fine_weight = np.full(len(fine_s), fine_h) * profile.jacobian(fine_s) * taper_factor(
        fine_s, nodes.half_width, nodes.taper_width
    )
    fine_weight[0] *= 0.5
    fine_weight[-1] *= 0.5
    fine_values = kernel_fn(*_geometry(x, fine_points), x, fine_normals[None, :, :])[0]
    fine_values = fine_values * fine_weight * blend(fine_s)

    support = np.arange(max(lo - 3, 0), min(hi + 4, len(s)))
    basis = CubicSpline(s[support], np.eye(len(support)), axis=0)(fine_s)
    row[support] += fine_values @ basis
