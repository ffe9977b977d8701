"""Free-space Helmholtz fundamental solution for Rough Surface Imaging.

Points are numpy arrays whose last axis holds (x1, x2); leading axes broadcast.
"""

import numpy as np

from src.specfun.bessel import hankel01


def _separation(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r = np.hypot(d[..., 0], d[..., 1])
    if np.any(r == 0.0):
        raise ValueError("Fundamental solution is singular at x = y")
    return d, r


def _unwrap(values: np.ndarray):
    return values.item() if values.ndim == 0 else values


def phi(k: float, x, y):
    """Phi_k(x, y) = (i/4) H_0^(1)(k|x - y|).

    Raises:
        ValueError: If x and y coincide.
    """
    _, r = _separation(x, y)
    h0, _ = hankel01(k * r)
    return _unwrap(np.asarray(0.25j * h0))


def grad_phi(k: float, x, y) -> np.ndarray:
    """Gradient of Phi_k with respect to x.

    Returns:
        Complex array of shape (..., 2) holding the two Cartesian components.
    """
    d, r = _separation(x, y)
    _, h1 = hankel01(k * r)
    scale = -0.25j * k * np.asarray(h1) / r
    return scale[..., None] * d


def normal_derivative(k: float, x, y, normal):
    """Derivative of Phi_k(x, y) along ``normal`` at x."""
    g = grad_phi(k, x, y)
    normal = np.asarray(normal, dtype=float)
    return _unwrap(np.asarray(g[..., 0] * normal[..., 0] + g[..., 1] * normal[..., 1]))


def mirror(point, height: float = 0.0) -> np.ndarray:
    """Reflect a point across the horizontal line x2 = height."""
    p = np.array(point, dtype=float)
    p[..., 1] = 2.0 * height - p[..., 1]
    return p
