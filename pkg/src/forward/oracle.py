"""Exact Dirichlet scattering by a flat plane, by reflection of the source."""

import numpy as np

from src.forward.errors import GeometryError
from src.forward.measurement import CauchyDataSet, MeasurementLine
from src.specfun.kernels import grad_phi, mirror, phi


def flat_plane_oracle(c: float, k: float, x, y):
    """Scattered field -Phi_k(x, y*) with y* = (y1, 2c - y2) and its x2-derivative.

    Raises:
        GeometryError: If x or y is not strictly above the plane x2 = c.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x[..., 1] <= c) or np.any(y[..., 1] <= c):
        raise GeometryError(f"Both points must lie above the plane x2 = {c}")
    image = mirror(y, c)
    us = -np.asarray(phi(k, x, image))
    dus = -grad_phi(k, x, image)[..., 1]
    if us.ndim == 0:
        return complex(us), complex(dus)
    return us, dus


def oracle_cauchy_data(c: float, k: float, line: MeasurementLine) -> CauchyDataSet:
    """Exact flat-plane Dirichlet dataset on ``line``."""
    points = line.points
    us, dnus = flat_plane_oracle(c, k, points[:, None, :], points[None, :, :])
    return CauchyDataSet(
        line=line, k_plus=k, bc_label="dirichlet", us=us, dnus=dnus,
        surface_label=f"flat:{c:g}", metadata={"oracle": True},
    )
