"""Boundary quadrature nodes on a truncated, tapered rough surface.

Nodes are uniform in the parameter s = x1 on [-A_f, A_f]. Each weight is the
trapezoid step times the arc-length element times a taper that rolls the
density contribution to zero at the artificial ends of the surface.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from src.surfaces.catalog import SurfaceProfile, normal_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurfaceNode:
    """A single quadrature node on the surface."""

    s: float
    point: tuple[float, float]
    normal: tuple[float, float]
    jacobian: float
    weight: float


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Struct-of-arrays view of the quadrature nodes, also a sequence of SurfaceNode."""

    profile: SurfaceProfile
    half_width: float
    taper_width: float
    step: float
    s: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    jacobian: np.ndarray
    taper: np.ndarray
    weight: np.ndarray
    d2f: np.ndarray

    def __len__(self) -> int:
        return len(self.s)

    def __getitem__(self, index: int) -> SurfaceNode:
        return SurfaceNode(
            s=float(self.s[index]),
            point=(float(self.points[index, 0]), float(self.points[index, 1])),
            normal=(float(self.normals[index, 0]), float(self.normals[index, 1])),
            jacobian=float(self.jacobian[index]),
            weight=float(self.weight[index]),
        )

    def __iter__(self):
        for index in range(len(self)):
            yield self[index]


def smoothstep(t):
    """Quintic blend 10t^3 - 15t^4 + 6t^5 clipped to [0, 1]."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


def taper_factor(s, A_f: float, taper_width: float) -> np.ndarray:
    """Taper chi(s): 1 on the interior, falling to 0 at s = +-A_f."""
    s = np.asarray(s, dtype=float)
    if taper_width <= 0:
        return np.ones_like(s)
    distance = np.minimum(s + A_f, A_f - s)
    return smoothstep(distance / taper_width)


def quadrature_nodes(profile: SurfaceProfile, A_f: float, n: int,
                     taper_width: float = 0.0) -> NodeSet:
    """Build n + 1 uniform nodes on [-A_f, A_f] with tapered trapezoid weights.

    Args:
        profile: Surface to discretise.
        A_f: Truncation half-width.
        n: Number of intervals; even and at least 4.
        taper_width: Width of the taper ramp at each end, 0 for none.

    Returns:
        NodeSet holding parameters, points, downward normals, jacobians and weights.

    Raises:
        ValueError: On invalid parameters.
    """
    if not A_f > 0:
        raise ValueError(f"Truncation half-width must be positive, got {A_f}")
    if n < 4 or n % 2:
        raise ValueError(f"Node count must be even and >= 4, got {n}")
    if not 0 <= taper_width < A_f:
        raise ValueError(f"Taper width must lie in [0, A_f), got {taper_width}")

    step = 2.0 * A_f / n
    s = -A_f + step * np.arange(n + 1)
    s[-1] = A_f
    jac = profile.jacobian(s)
    chi = taper_factor(s, A_f, taper_width)
    trap = np.full(n + 1, step)
    trap[0] *= 0.5
    trap[-1] *= 0.5

    return NodeSet(
        profile=profile,
        half_width=A_f,
        taper_width=taper_width,
        step=step,
        s=s,
        points=profile.points(s),
        normals=normal_at(profile, s),
        jacobian=jac,
        taper=chi,
        weight=trap * jac * chi,
        d2f=profile.d2f(s),
    )


def arc_length(profile: SurfaceProfile, a: float, b: float) -> float:
    """Arc length of the surface between x1 = a and x1 = b."""
    value, _ = integrate.quad(
        lambda s: float(profile.jacobian(s)), a, b, limit=400, epsabs=1e-12, epsrel=1e-12,
    )
    return value


def node_count(profile: SurfaceProfile, A_f: float, wavelength: float,
               nodes_per_wavelength: float) -> int:
    """Even interval count giving the requested nodes per wavelength of arc."""
    length = arc_length(profile, -A_f, A_f)
    n = math.ceil(nodes_per_wavelength * length / wavelength)
    n += n % 2
    return max(n, 4)
