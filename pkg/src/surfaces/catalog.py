"""Rough surface catalog for Rough Surface Imaging.

Each surface is the graph x2 = f(x1) of a bounded smooth height function.
Derivatives are written out analytically; the second derivative needed by
the double-layer diagonal is a central difference of df.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from src.config import get_surface_bounds

logger = logging.getLogger(__name__)

D2F_STEP = 1e-5

CATALOG_NAMES = ("gamma1", "gamma2", "gamma3", "gamma4", "gamma5", "gamma6")


class UnknownSurfaceError(ValueError):
    """Raised when a surface name is not in the catalog."""


@dataclass(frozen=True)
class SurfaceProfile:
    """Height function f with derivative df and band bounds (c1, c2)."""

    label: str
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    c1: float
    c2: float
    formula: str = ""
    params: tuple[float, ...] = field(default_factory=tuple)

    def d2f(self, s):
        """Second derivative by central difference of df."""
        s = np.asarray(s, dtype=float)
        return (self.df(s + D2F_STEP) - self.df(s - D2F_STEP)) / (2.0 * D2F_STEP)

    def points(self, s) -> np.ndarray:
        """Surface points (s, f(s)), shape (..., 2)."""
        s = np.asarray(s, dtype=float)
        return np.stack([s, self.height(s)], axis=-1)

    def height(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(self.f(s), s.shape).astype(float)

    def slope(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(self.df(s), s.shape).astype(float)

    def jacobian(self, s) -> np.ndarray:
        """Arc-length element sqrt(1 + f'(s)^2)."""
        return np.sqrt(1.0 + self.slope(s) ** 2)


def _gamma1(x):
    return 0.8 + 0.1 * np.sin(2 * np.pi * x) + 0.1 * np.sin(np.pi * x)


def _dgamma1(x):
    return 0.2 * np.pi * np.cos(2 * np.pi * x) + 0.1 * np.pi * np.cos(np.pi * x)


def _gamma2(x):
    return 0.8 + 0.025 * np.sin(5 * np.pi * (x - 1)) + 0.1 * np.sin(0.5 * np.pi * (x - 1))


def _dgamma2(x):
    return 0.125 * np.pi * np.cos(5 * np.pi * (x - 1)) + 0.05 * np.pi * np.cos(0.5 * np.pi * (x - 1))


def _gamma3(x):
    return 0.8 + 0.16 * np.sin(np.pi * x)


def _dgamma3(x):
    return 0.16 * np.pi * np.cos(np.pi * x)


def _gamma4_bumps(x):
    e1 = np.exp(-25 * (0.3 * x - 0.5) ** 2)
    e2 = np.exp(-49 * (0.3 * x + 0.6) ** 2)
    e3 = np.exp(-8 * x**2)
    return e1, e2, e3


def _gamma4(x):
    e1, e2, e3 = _gamma4_bumps(x)
    return 0.8 + 0.1 * e1 + 0.2 * e2 - 0.25 * e3


def _dgamma4(x):
    e1, e2, e3 = _gamma4_bumps(x)
    return -1.5 * (0.3 * x - 0.5) * e1 - 5.88 * (0.3 * x + 0.6) * e2 + 4.0 * x * e3


def _gamma5(x):
    return 0.8 + 0.3 * np.sin(0.7 * np.pi * x) * np.exp(-0.4 * x**2)


def _dgamma5(x):
    envelope = np.exp(-0.4 * x**2)
    return 0.3 * (0.7 * np.pi * np.cos(0.7 * np.pi * x) - 0.8 * x * np.sin(0.7 * np.pi * x)) * envelope


def _gamma6(x):
    return 0.8 + 0.1 * np.sin(0.4 * np.pi * x) * np.exp(-np.sin(1.2 * x**2))


def _dgamma6(x):
    envelope = np.exp(-np.sin(1.2 * x**2))
    return 0.1 * (
        0.4 * np.pi * np.cos(0.4 * np.pi * x)
        - 2.4 * x * np.cos(1.2 * x**2) * np.sin(0.4 * np.pi * x)
    ) * envelope


_FUNCTIONS = {
    "gamma1": (_gamma1, _dgamma1),
    "gamma2": (_gamma2, _dgamma2),
    "gamma3": (_gamma3, _dgamma3),
    "gamma4": (_gamma4, _dgamma4),
    "gamma5": (_gamma5, _dgamma5),
    "gamma6": (_gamma6, _dgamma6),
}


def _flat(height: float, bounds: dict) -> SurfaceProfile:
    if not height > 0:
        raise ValueError(f"Flat surface height must be positive, got {height}")
    return SurfaceProfile(
        label=f"flat:{height:g}",
        f=lambda s: np.full(np.shape(s), height, dtype=float),
        df=lambda s: np.zeros(np.shape(s), dtype=float),
        c1=min(bounds.get("c1", 0.1), height),
        c2=max(bounds.get("c2", 3.0), height),
        formula=f"{height:g}",
        params=(height,),
    )


def catalog(name: str, params=None) -> SurfaceProfile:
    """Look up a catalog surface.

    Args:
        name: gamma1..gamma6, "flat" (height in params) or "flat:<height>".
        params: Optional parameters; only the flat surface takes one.

    Returns:
        The SurfaceProfile.

    Raises:
        UnknownSurfaceError: If the name is not in the catalog.
    """
    bounds = get_surface_bounds()
    key = name.strip().lower()

    if key.startswith("flat"):
        _, _, tail = key.partition(":")
        if tail:
            try:
                height = float(tail)
            except ValueError:
                raise UnknownSurfaceError(f"Bad flat surface height in {name!r}") from None
        elif params:
            height = float(params[0])
        else:
            raise UnknownSurfaceError("Flat surface needs a height, e.g. 'flat:0.8'")
        return _flat(height, bounds.get("flat", {}))

    if key not in _FUNCTIONS:
        raise UnknownSurfaceError(
            f"Unknown surface {name!r}; expected one of {', '.join(CATALOG_NAMES)} or flat:<height>"
        )
    f, df = _FUNCTIONS[key]
    entry = bounds["surfaces"][key]
    return SurfaceProfile(
        label=key, f=f, df=df, c1=entry["c1"], c2=entry["c2"], formula=entry["formula"],
    )


def normal_at(profile: SurfaceProfile, s):
    """Unit normal (f'(s), -1) / sqrt(1 + f'(s)^2) pointing out of the upper domain."""
    slope = profile.slope(s)
    jac = np.sqrt(1.0 + slope**2)
    normal = np.stack([slope / jac, -1.0 / jac], axis=-1)
    return normal


def band_check(profile: SurfaceProfile, A_f: float, grid: int,
               c1: float | None = None, c2: float | None = None) -> bool:
    """Check f >= c1 and |f| + |f'| <= c2 on a uniform grid over [-A_f, A_f].

    Raises:
        ValueError: If grid < 100.
    """
    if grid < 100:
        raise ValueError(f"band_check needs grid >= 100, got {grid}")
    c1 = profile.c1 if c1 is None else c1
    c2 = profile.c2 if c2 is None else c2
    s = np.linspace(-A_f, A_f, grid)
    f = profile.height(s)
    df = profile.slope(s)
    lower_ok = bool(np.all(f >= c1))
    upper_ok = bool(np.all(np.abs(f) + np.abs(df) <= c2))
    if not (lower_ok and upper_ok):
        logger.debug(
            "Band check failed for %s: min f=%.4f, max |f|+|f'|=%.4f",
            profile.label, f.min(), (np.abs(f) + np.abs(df)).max(),
        )
    return lower_ok and upper_ok
