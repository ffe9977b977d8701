"""Direct imaging indicator for Rough Surface Imaging.

For a sampling point z below the measurement line,

    I_A(z) = h * sum_j | h * sum_i ( dnus[i, j] conj(Phi(x_i, z))
                                     - us[i, j] conj(dPhi(x_i, z)/dx2) )
                         - halfcircle_term(k, y_j' - z', M, lower) |^2

with y' = (y1, -y2) and z' = (z1, -z2). Large values mark the surface.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.forward.errors import GeometryError
from src.forward.measurement import CauchyDataSet
from src.specfun.identities import halfcircle_directions, halfcircle_term, halfcircle_weights
from src.specfun.kernels import grad_phi, phi

logger = logging.getLogger(__name__)

DEFAULT_RULE = "inclusive"


def format_number(value: float) -> str:
    """Shortest text that reads back as the same float."""
    short = format(value, "g")
    return short if float(short) == value else repr(float(value))


def _parse_axis(text: str, label: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"Grid axis {label} must look like 'min:max:count', got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(f"Grid axis {label} has a non-numeric field: {text!r}") from None


@dataclass(frozen=True)
class ImagingGrid:
    """Rectangular sampling region with nx1 x nx2 uniformly spaced points."""

    x1_min: float
    x1_max: float
    x2_min: float
    x2_max: float
    nx1: int
    nx2: int

    def __post_init__(self):
        if not self.x2_min > 0:
            raise ValueError(f"x2_min must be positive, got {self.x2_min}")
        for label, lo, hi, count in (
            ("x1", self.x1_min, self.x1_max, self.nx1),
            ("x2", self.x2_min, self.x2_max, self.nx2),
        ):
            if count < 1:
                raise ValueError(f"n{label} must be >= 1, got {count}")
            if hi < lo or (count > 1 and hi == lo):
                raise ValueError(f"{label} range [{lo}, {hi}] is empty for {count} points")

    @classmethod
    def parse(cls, text: str) -> "ImagingGrid":
        """Parse 'x1min:x1max:nx1,x2min:x2max:nx2'."""
        axes = text.replace(" ", "").split(",")
        if len(axes) != 2:
            raise ValueError(f"Grid must look like 'x1min:x1max:nx1,x2min:x2max:nx2', got {text!r}")
        a1, b1, n1 = _parse_axis(axes[0], "x1")
        a2, b2, n2 = _parse_axis(axes[1], "x2")
        return cls(a1, b1, a2, b2, n1, n2)

    def spec(self) -> str:
        a, b, c, d = (format_number(v) for v in (self.x1_min, self.x1_max, self.x2_min, self.x2_max))
        return f"{a}:{b}:{self.nx1},{c}:{d}:{self.nx2}"

    @staticmethod
    def _axis(lo: float, hi: float, count: int) -> np.ndarray:
        if count == 1:
            return np.array([0.5 * (lo + hi)])
        return np.linspace(lo, hi, count)

    @property
    def x1(self) -> np.ndarray:
        return self._axis(self.x1_min, self.x1_max, self.nx1)

    @property
    def x2(self) -> np.ndarray:
        return self._axis(self.x2_min, self.x2_max, self.nx2)

    @property
    def cell(self) -> tuple[float, float]:
        """Grid spacing (dx1, dx2); zero along a single-point axis."""
        d1 = (self.x1_max - self.x1_min) / (self.nx1 - 1) if self.nx1 > 1 else 0.0
        d2 = (self.x2_max - self.x2_min) / (self.nx2 - 1) if self.nx2 > 1 else 0.0
        return d1, d2


@dataclass(eq=False)
class ImagingResult:
    """Indicator values on a grid, rows indexed by x2 and columns by x1."""

    grid: ImagingGrid
    values: np.ndarray
    k_plus: float
    extracted: object | None = None
    metrics: tuple[float, float] | None = None


def _check_below(z: np.ndarray, H: float) -> None:
    if np.any(z[..., 1] >= H):
        raise GeometryError(f"Sampling points must lie below the measurement line x2 = {H}")


def _reflect(points: np.ndarray) -> np.ndarray:
    out = np.array(points, dtype=float)
    out[..., 1] = -out[..., 1]
    return out


def indicator_terms(z, data: CauchyDataSet, M: int = 256, rule: str = DEFAULT_RULE) -> np.ndarray:
    """Per-source summands of the indicator at z; their sum is I_A(z).

    Raises:
        GeometryError: If z is not below the measurement line.
    """
    z = np.asarray(z, dtype=float)
    _check_below(z, data.line.H)
    h = data.line.h
    x = data.line.points
    k = data.k_plus

    conj_phi = np.conj(phi(k, x, z))
    conj_dphi = np.conj(grad_phi(k, x, z)[:, 1])
    back = h * (conj_phi @ data.dnus - conj_dphi @ data.us)
    correction = halfcircle_term(k, _reflect(x) - _reflect(z), M, "lower", rule)
    return h * np.abs(back - correction) ** 2


def indicator(z, data: CauchyDataSet, M: int = 256, rule: str = DEFAULT_RULE) -> float:
    """Imaging indicator I_A at a single sampling point."""
    return float(np.sum(indicator_terms(z, data, M, rule)))


def naive_indicator(z, data: CauchyDataSet, M: int = 256, rule: str = DEFAULT_RULE) -> float:
    """Term-by-term triple loop of the indicator, kept as a brute-force reference."""
    z = np.asarray(z, dtype=float)
    _check_below(z, data.line.H)
    h = data.line.h
    x = data.line.points
    k = data.k_plus
    z_ref = _reflect(z)
    total = 0.0
    for j in range(data.line.count):
        bracket = 0.0j
        for i in range(data.line.count):
            p = phi(k, x[i], z)
            dp = grad_phi(k, x[i], z)[1]
            bracket += data.dnus[i, j] * np.conj(p) - data.us[i, j] * np.conj(dp)
        bracket *= h
        bracket -= halfcircle_term(k, _reflect(x[j]) - z_ref, M, "lower", rule)
        total += abs(bracket) ** 2
    return h * total


def _sweep_row(x2: float, grid: ImagingGrid, data: CauchyDataSet,
               source_phase: np.ndarray, weights: np.ndarray, directions: np.ndarray) -> np.ndarray:
    k = data.k_plus
    h = data.line.h
    x = data.line.points
    z = np.stack([grid.x1, np.full(grid.nx1, x2)], axis=-1)

    P = np.conj(phi(k, x[None, :, :], z[:, None, :]))
    Q = np.conj(grad_phi(k, x[None, :, :], z[:, None, :])[..., 1])
    back = h * (P @ data.dnus - Q @ data.us)

    z_ref = _reflect(z)
    target_phase = np.exp(-1j * k * (z_ref @ directions.T)) * weights[None, :]
    correction = (0.25j / np.pi) * (target_phase @ source_phase)
    return h * np.sum(np.abs(back - correction) ** 2, axis=1)


def sweep(grid: ImagingGrid, data: CauchyDataSet, M: int = 256, rule: str = DEFAULT_RULE,
          threads: int = 1) -> ImagingResult:
    """Evaluate the indicator on every grid point.

    Each grid row is two matrix products against the data plus a low-rank
    half-circle correction. Rows are spread across ``threads`` workers.
    """
    if grid.x2_max >= data.line.H:
        raise GeometryError(
            f"Imaging grid reaches x2={grid.x2_max}, at or above the line H={data.line.H}"
        )
    directions = halfcircle_directions(M, "lower")
    weights = halfcircle_weights(M, rule)
    y_ref = _reflect(data.line.points)
    source_phase = np.exp(1j * data.k_plus * (directions @ y_ref.T))

    def run(x2: float) -> np.ndarray:
        return _sweep_row(x2, grid, data, source_phase, weights, directions)

    rows = grid.x2
    if threads > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(run, rows))
    else:
        values = [run(x2) for x2 in rows]
    result = np.vstack(values)
    logger.info(
        "Indicator sweep %dx%d at k+=%g: max %.4e", grid.nx2, grid.nx1, data.k_plus, result.max()
    )
    return ImagingResult(grid=grid, values=result, k_plus=data.k_plus)
