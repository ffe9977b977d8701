"""Plane-wave half-circle quadrature and the Helmholtz-Kirchhoff line identity.

The half-circle term approximates (i/4pi) times the integral of
exp(i k xhat . w) over half of the unit circle. Both hemispheres share the
angular grid theta_m = -pi + m*pi/M, m = 0..M:

    lower: xhat = (cos theta, sin theta)    (xhat_2 <= 0)
    upper: xhat = (cos theta, -sin theta)   (xhat_2 >= 0)

``rule="trapezoid"`` halves the two endpoint weights, so w = 0 gives exactly
i/4 and lower + upper is the periodic trapezoid rule on the full circle.
``rule="inclusive"`` gives all M + 1 samples the weight pi/M, which is the
form summed inside the discrete imaging indicator.
"""

import logging

import numpy as np

from src.specfun.kernels import grad_phi, phi

logger = logging.getLogger(__name__)

HEMISPHERES = ("lower", "upper")
RULES = ("trapezoid", "inclusive")


def halfcircle_directions(M: int, hemisphere: str = "lower") -> np.ndarray:
    """Unit directions of the half-circle grid, shape (M + 1, 2)."""
    if M < 2:
        raise ValueError(f"Half-circle grid needs M >= 2, got {M}")
    if hemisphere not in HEMISPHERES:
        raise ValueError(f"hemisphere must be one of {HEMISPHERES}, got {hemisphere!r}")
    theta = -np.pi + np.arange(M + 1) * (np.pi / M)
    sign = 1.0 if hemisphere == "lower" else -1.0
    return np.stack([np.cos(theta), sign * np.sin(theta)], axis=-1)


def halfcircle_weights(M: int, rule: str = "trapezoid") -> np.ndarray:
    """Angular quadrature weights matching :func:`halfcircle_directions`."""
    if rule not in RULES:
        raise ValueError(f"rule must be one of {RULES}, got {rule!r}")
    weights = np.full(M + 1, np.pi / M)
    if rule == "trapezoid":
        weights[0] *= 0.5
        weights[-1] *= 0.5
    return weights


def halfcircle_term(k: float, w, M: int, hemisphere: str = "lower",
                    rule: str = "trapezoid"):
    """(i/4pi) * sum_m weight_m * exp(i k d_m . w) over one hemisphere.

    Args:
        k: Wavenumber.
        w: Point(s) of shape (..., 2).
        M: Number of angular intervals (M + 1 samples).
        hemisphere: "lower" or "upper".
        rule: "trapezoid" or "inclusive".

    Returns:
        Complex scalar or array with the leading shape of ``w``.
    """
    directions = halfcircle_directions(M, hemisphere)
    weights = halfcircle_weights(M, rule)
    w = np.asarray(w, dtype=float)
    phase = k * (w[..., None, 0] * directions[:, 0] + w[..., None, 1] * directions[:, 1])
    total = np.exp(1j * phase) @ weights
    result = (0.25j / np.pi) * total
    return result.item() if np.ndim(result) == 0 else result


def hk_identity_residual(k: float, y, z, H: float, A: float, n: int, M: int) -> float:
    """Residual of the Helmholtz-Kirchhoff identity on the line x2 = H.

    The left side is the trapezoid rule with n intervals on [-A, A] x {H} of
    dPhi(x,y)/dx2 * conj(Phi(x,z)) - Phi(x,y) * conj(dPhi(x,z)/dx2); the right
    side is the upper half-circle term at z - y.

    Raises:
        ValueError: If y or z is not strictly below the line and inside the window.
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    for label, p in (("y", y), ("z", z)):
        if not p[1] < H:
            raise ValueError(f"{label} must lie below the line x2 = {H}, got {p.tolist()}")
        if not abs(p[0]) < A:
            raise ValueError(f"{label} must lie inside the window |x1| < {A}, got {p.tolist()}")
    if n < 2:
        raise ValueError(f"Line quadrature needs n >= 2 intervals, got {n}")

    step = 2.0 * A / n
    x = np.stack([-A + step * np.arange(n + 1), np.full(n + 1, H)], axis=-1)
    weights = np.full(n + 1, step)
    weights[0] *= 0.5
    weights[-1] *= 0.5

    phi_y = phi(k, x, y)
    phi_z = phi(k, x, z)
    dphi_y = grad_phi(k, x, y)[:, 1]
    dphi_z = grad_phi(k, x, z)[:, 1]
    lhs = np.sum(weights * (dphi_y * np.conj(phi_z) - phi_y * np.conj(dphi_z)))
    rhs = halfcircle_term(k, z - y, M, hemisphere="upper")
    residual = float(abs(lhs - rhs))
    logger.debug("HK residual A=%.1f n=%d: %.3e", A, n, residual)
    return residual
