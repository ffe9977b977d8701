"""Measurement line and synthetic Cauchy data for Rough Surface Imaging.

Receivers and point sources share the grid x_i = (-A + i*h, H), i = 0..2N,
h = A/N. The data matrices are indexed [receiver, source].
"""

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from src.config import get_solver_defaults
from src.forward.conditions import BoundaryCondition
from src.forward.errors import GeometryError
from src.forward.solver import (
    TruncationConfig,
    assemble,
    scattered_field,
    scattered_field_gradient,
    solve_density,
)
from src.surfaces.catalog import SurfaceProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasurementLine:
    """The truncated line x2 = H, |x1| <= A, sampled with 2N + 1 points."""

    H: float
    A: float
    N: int

    def __post_init__(self):
        if not self.H > 0:
            raise ValueError(f"Line height H must be positive, got {self.H}")
        if not self.A > 0:
            raise ValueError(f"Line half-width A must be positive, got {self.A}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")

    @property
    def h(self) -> float:
        return self.A / self.N

    @property
    def count(self) -> int:
        return 2 * self.N + 1

    @property
    def points(self) -> np.ndarray:
        x1 = -self.A + self.h * np.arange(self.count)
        return np.stack([x1, np.full(self.count, float(self.H))], axis=-1)


@dataclass(eq=False)
class CauchyDataSet:
    """Scattered field and its x2-derivative on the line for every source."""

    line: MeasurementLine
    k_plus: float
    bc_label: str
    us: np.ndarray
    dnus: np.ndarray
    noise_delta: float = 0.0
    seed: int | None = None
    surface_label: str | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        shape = (self.line.count, self.line.count)
        self.us = np.asarray(self.us, dtype=complex)
        self.dnus = np.asarray(self.dnus, dtype=complex)
        if self.us.shape != shape or self.dnus.shape != shape:
            raise ValueError(
                f"Cauchy matrices must have shape {shape}, got {self.us.shape} and {self.dnus.shape}"
            )
        if not self.noise_delta >= 0:
            raise ValueError(f"noise_delta must be >= 0, got {self.noise_delta}")


def cauchy_data(bc: BoundaryCondition, surface: SurfaceProfile, k_plus: float,
                line: MeasurementLine, trunc: TruncationConfig | None = None) -> CauchyDataSet:
    """Simulate the full Cauchy dataset for sources and receivers on ``line``.

    Assembles and factorizes once, solves for all 2N + 1 sources, then
    evaluates u^s and du^s/dx2 at every receiver.

    Raises:
        GeometryError: If the line is not clear of the surface.
    """
    trunc = trunc or TruncationConfig.from_defaults()
    k_minus = bc.k_minus
    bc.validate(k_plus)
    nodes = trunc.build_nodes(surface, line.A, k_plus, k_minus)

    clearance = get_solver_defaults()["solver"]["receiver_clearance_wavelengths"]
    wavelength = 2.0 * math.pi / k_plus
    top = float(nodes.points[:, 1].max())
    if not line.H > top + clearance * wavelength:
        raise GeometryError(
            f"Measurement height H={line.H} must exceed max f + {clearance} wavelength "
            f"= {top + clearance * wavelength:.4f}"
        )

    started = time.perf_counter()
    system = assemble(bc, surface, k_plus, nodes)
    points = line.points
    density = solve_density(system, points)
    us = scattered_field(density, bc, k_plus, points)
    dnus = scattered_field_gradient(density, bc, k_plus, points)
    elapsed = time.perf_counter() - started
    logger.info(
        "Cauchy data for %s/%s at k+=%g: %d sources x %d receivers in %.1fs",
        surface.label, bc.label, k_plus, line.count, line.count, elapsed,
    )
    return CauchyDataSet(
        line=line,
        k_plus=k_plus,
        bc_label=bc.label,
        us=us,
        dnus=dnus,
        surface_label=surface.label,
        metadata={
            "condition": system.condition,
            "nodes": len(nodes),
            "truncation_half_width": nodes.half_width,
        },
    )
