"""Numerical verification suites for Rough Surface Imaging.

Each check compares a residual against a tolerance: special-function
derivative identity, the half-circle / J0 identity, the Helmholtz-Kirchhoff
residual trend, the flat-plane Dirichlet oracle, and reciprocity for the
three boundary conditions.
"""

import logging
import time
from dataclasses import dataclass

import numpy as np

from src.forward.conditions import BoundaryCondition
from src.forward.oracle import flat_plane_oracle
from src.forward.solver import TruncationConfig, assemble, scattered_field, solve_density
from src.specfun.bessel import bessel_j, hankel1
from src.specfun.identities import halfcircle_term, hk_identity_residual
from src.surfaces.catalog import catalog

logger = logging.getLogger(__name__)

LEVELS = {
    "fast": {"k": 5.0, "A": 2.0, "nodes_per_wavelength": 20.0, "hk_widths": (25.0, 100.0)},
    "full": {"k": 10.0, "A": 3.0, "nodes_per_wavelength": 40.0, "hk_widths": (25.0, 50.0, 100.0, 200.0)},
}

RECIPROCITY_PAIR = ((-1.0, 2.0), (1.5, 2.5))
IMPEDANCE_RHO = "5+exp(2*pi*x1*i)"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    seconds: float = 0.0


def _timed(name: str, fn, tolerance: float) -> CheckResult:
    started = time.perf_counter()
    try:
        residual = float(fn())
    except Exception as e:
        logger.error("Check %s raised: %s", name, e, exc_info=True)
        residual = float("inf")
    elapsed = time.perf_counter() - started
    passed = bool(np.isfinite(residual) and residual < tolerance)
    logger.info("%-28s residual %.3e  tol %.1e  %s", name, residual, tolerance, "ok" if passed else "FAIL")
    return CheckResult(name=name, residual=residual, tolerance=tolerance, passed=passed, seconds=elapsed)


def check_hankel_derivative() -> float:
    """max |central difference of H0 + H1| over the sample arguments."""
    eps = 1e-6
    worst = 0.0
    for t in (0.5, 1.0, 2.0, 10.0, 100.0):
        fd = (hankel1(0, t + eps) - hankel1(0, t - eps)) / (2 * eps)
        worst = max(worst, abs(fd + hankel1(1, t)))
    return worst


def check_halfcircle_j0(cases: int = 20, M: int = 2048, seed: int = 7) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        k = rng.uniform(1.0, 10.0)
        w = rng.uniform(-1.0, 1.0, size=2)
        w *= rng.uniform(0.0, 20.0) / (k * np.hypot(*w))
        total = halfcircle_term(k, w, M, "lower") + halfcircle_term(k, w, M, "upper")
        worst = max(worst, abs(total - 0.5j * bessel_j(0, k * np.hypot(*w))))
    return worst


def check_hk_trend(widths) -> float:
    """Ratio of the HK residual at the widest window to the narrowest one (< 1 passes)."""
    k, H = 5.0, 1.0
    y, z = (0.0, 0.0), (0.5, 0.2)
    wavelength = 2 * np.pi / k
    residuals = []
    for A in widths:
        n = int(np.ceil(20 * 2 * A / wavelength))
        residuals.append(hk_identity_residual(k, y, z, H, A, n, 256))
    logger.debug("HK residuals %s", ", ".join(f"{r:.3e}" for r in residuals))
    return residuals[-1] / residuals[0]


def _flat_oracle_error(settings: dict) -> float:
    k = settings["k"]
    surface = catalog("flat:1")
    trunc = TruncationConfig.from_defaults(nodes_per_wavelength=settings["nodes_per_wavelength"])
    nodes = trunc.build_nodes(surface, settings["A"], k)
    system = assemble(BoundaryCondition.dirichlet(), surface, k, nodes)
    source = np.array([0.0, 2.0])
    density = solve_density(system, source)
    x1 = np.linspace(-settings["A"] / 2, settings["A"] / 2, 21)
    receivers = np.stack([x1, np.full_like(x1, 1.5)], axis=-1)
    field = scattered_field(density, BoundaryCondition.dirichlet(), k, receivers)
    exact, _ = flat_plane_oracle(1.0, k, receivers, source[None, :])
    return float(np.linalg.norm(field - exact) / np.linalg.norm(exact))


def _reciprocity_error(bc: BoundaryCondition, settings: dict) -> float:
    k = settings["k"]
    surface = catalog("gamma1")
    trunc = TruncationConfig.from_defaults(nodes_per_wavelength=settings["nodes_per_wavelength"])
    nodes = trunc.build_nodes(surface, settings["A"], k, bc.k_minus)
    system = assemble(bc, surface, k, nodes)
    x, y = (np.asarray(p) for p in RECIPROCITY_PAIR)
    density = solve_density(system, np.stack([x, y]))
    field = scattered_field(density, bc, k, np.stack([x, y]))
    u_xy = field[0, 1]
    u_yx = field[1, 0]
    return float(abs(u_xy - u_yx) / np.abs(field).max())


def run_checks(level: str = "fast") -> list[CheckResult]:
    """Run every verification suite at ``level`` ("fast" or "full").

    Raises:
        ValueError: For an unknown level.
    """
    if level not in LEVELS:
        raise ValueError(f"Unknown verification level {level!r}; expected one of {', '.join(LEVELS)}")
    settings = LEVELS[level]
    k = settings["k"]
    logger.info("=== Verification (%s) ===", level)
    return [
        _timed("hankel_derivative", check_hankel_derivative, 1e-6),
        _timed("halfcircle_j0", check_halfcircle_j0, 1e-8),
        _timed("hk_residual_trend", lambda: check_hk_trend(settings["hk_widths"]), 1.0),
        _timed("flat_dirichlet_oracle", lambda: _flat_oracle_error(settings), 1e-2),
        _timed("reciprocity_dirichlet",
               lambda: _reciprocity_error(BoundaryCondition.dirichlet(), settings), 1e-2),
        _timed("reciprocity_impedance",
               lambda: _reciprocity_error(BoundaryCondition.impedance(IMPEDANCE_RHO), settings), 1e-2),
        _timed("reciprocity_transmission",
               lambda: _reciprocity_error(BoundaryCondition.transmission(0.6 * k), settings), 1e-2),
    ]


def format_report(results: list[CheckResult]) -> str:
    """Plain-text table of residuals against tolerances."""
    lines = [f"{'check':<28} {'residual':>12} {'tolerance':>10}  result", "-" * 60]
    for r in results:
        lines.append(
            f"{r.name:<28} {r.residual:>12.3e} {r.tolerance:>10.1e}  {'pass' if r.passed else 'FAIL'}"
        )
    passed = sum(r.passed for r in results)
    lines.append("-" * 60)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
