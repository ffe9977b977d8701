"""Nystrom solvers for the Dirichlet, impedance and transmission problems.

Systems (nu is the unit normal pointing down, out of the upper medium):

    Dirichlet     (-1/2 I + K) phi = -Phi                      u^s = D phi
    Impedance     (1/2 I + K' - i k rho S) phi = -(d/dnu - i k rho) Phi
                                                               u^s = S phi
    Transmission  [[K+ - K- + I, S+ - S-], [T+ - T-, K'+ - K'- - I]] (phi1, phi2)
                  = (-Phi, -dPhi/dnu~)
                  u^s = D~+ phi1 + S+ phi2,  u^t = D~- phi1 + S- phi2

The transmission layer potentials use nu~ = -nu, pointing into the upper
medium, which is the orientation under which the +I / -I diagonal holds.
"""

import logging
import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve

from src.config import get_solver_defaults
from src.forward.conditions import DIRICHLET, IMPEDANCE, TRANSMISSION, BoundaryCondition
from src.forward.errors import BoundaryConditionError, GeometryError, SingularSystemError
from src.forward.operators import (
    adjoint_double_layer_matrix,
    check_side,
    double_layer_kernel,
    double_layer_matrix,
    evaluation_matrix,
    hypersingular_difference_matrix,
    hypersingular_kernel,
    single_layer_gradient,
    single_layer_kernel,
    single_layer_matrix,
)
from src.specfun.kernels import grad_phi, phi
from src.surfaces.catalog import SurfaceProfile
from src.surfaces.quadrature import NodeSet, node_count, quadrature_nodes

logger = logging.getLogger(__name__)

DIRICHLET_JUMP = -0.5

# Normal orientation relative to NodeSet.normals (downward)
UPWARD = -1.0

_factorization_lock = threading.Lock()
_factorization_total = 0


def factorization_count() -> int:
    """Number of LU factorizations performed in this process."""
    return _factorization_total


def _next_factorization_id() -> int:
    global _factorization_total
    with _factorization_lock:
        _factorization_total += 1
        return _factorization_total


@dataclass(frozen=True)
class TruncationConfig:
    """Surface truncation and resolution, in wavelengths of the shorter wave."""

    margin_wavelengths: float = 4.0
    taper_wavelengths: float = 2.0
    nodes_per_wavelength: float = 40.0

    @classmethod
    def from_defaults(cls, **overrides) -> "TruncationConfig":
        values = dict(get_solver_defaults()["truncation"])
        values.update({key: val for key, val in overrides.items() if val is not None})
        return cls(**values)

    def resolve(self, profile: SurfaceProfile, A: float, k_plus: float,
                k_minus: float | None = None) -> tuple[float, float, int]:
        """Return (A_f, taper_width, n) for a measurement half-width A."""
        k_max = max(k_plus, k_minus or 0.0)
        wavelength = 2.0 * math.pi / k_max
        A_f = A + self.margin_wavelengths * wavelength
        taper = self.taper_wavelengths * wavelength
        n = node_count(profile, A_f, wavelength, self.nodes_per_wavelength)
        return A_f, taper, n

    def build_nodes(self, profile: SurfaceProfile, A: float, k_plus: float,
                    k_minus: float | None = None) -> NodeSet:
        A_f, taper, n = self.resolve(profile, A, k_plus, k_minus)
        logger.info(
            "Surface %s truncated at |x1| <= %.3f, taper %.3f, %d nodes",
            profile.label, A_f, taper, n + 1,
        )
        return quadrature_nodes(profile, A_f, n, taper)


@dataclass(eq=False)
class SystemHandle:
    """An assembled, LU-factorized boundary-integral system."""

    bc: BoundaryCondition
    k_plus: float
    surface: SurfaceProfile
    nodes: NodeSet
    matrix: np.ndarray
    lu: np.ndarray
    piv: np.ndarray
    factorization_id: int
    condition: float

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(eq=False)
class DensitySolution:
    """Density values at the nodes; columns index sources when several were solved.

    For the transmission problem ``values`` is the pair (phi1, phi2).
    """

    nodes: NodeSet
    bc: BoundaryCondition
    k_plus: float
    values: np.ndarray | tuple[np.ndarray, np.ndarray]
    factorization_id: int
    sources: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))


def transmission_matrix(nodes: NodeSet, k_plus: float, k_minus: float) -> np.ndarray:
    """Block transmission matrix without parameter checks (k_plus == k_minus allowed)."""
    n = len(nodes)
    identity = np.eye(n)
    matrix = np.empty((2 * n, 2 * n), dtype=complex)
    matrix[:n, :n] = (double_layer_matrix(nodes, k_plus, UPWARD)
                      - double_layer_matrix(nodes, k_minus, UPWARD) + identity)
    matrix[:n, n:] = single_layer_matrix(nodes, k_plus) - single_layer_matrix(nodes, k_minus)
    matrix[n:, :n] = hypersingular_difference_matrix(nodes, k_plus, k_minus, UPWARD)
    matrix[n:, n:] = (adjoint_double_layer_matrix(nodes, k_plus, UPWARD)
                      - adjoint_double_layer_matrix(nodes, k_minus, UPWARD) - identity)
    return matrix


def _system_matrix(bc: BoundaryCondition, k_plus: float, nodes: NodeSet) -> np.ndarray:
    n = len(nodes)
    if bc.variant == DIRICHLET:
        return DIRICHLET_JUMP * np.eye(n) + double_layer_matrix(nodes, k_plus)
    if bc.variant == IMPEDANCE:
        rho = bc.rho(nodes.s)
        return (0.5 * np.eye(n) + adjoint_double_layer_matrix(nodes, k_plus)
                - 1j * k_plus * rho[:, None] * single_layer_matrix(nodes, k_plus))
    return transmission_matrix(nodes, k_plus, bc.k_minus)


def _condition_estimate(matrix: np.ndarray, lu: np.ndarray) -> float:
    anorm = np.linalg.norm(matrix, 1)
    (gecon,) = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or rcond <= 0:
        return math.inf
    return 1.0 / rcond


def assemble(bc: BoundaryCondition, surface: SurfaceProfile, k_plus: float,
             nodes: NodeSet) -> SystemHandle:
    """Assemble and LU-factorize the boundary-integral system for ``bc``.

    Raises:
        BoundaryConditionError: If the condition is invalid for k_plus.
        SingularSystemError: If the matrix is numerically singular.
        ValueError: If there are no nodes.
    """
    if len(nodes) == 0:
        raise ValueError("Cannot assemble a system without nodes")
    bc.validate(k_plus)

    matrix = _system_matrix(bc, k_plus, nodes)
    if not np.all(np.isfinite(matrix)):
        raise SingularSystemError("System matrix has non-finite entries", math.inf)
    lu, piv = lu_factor(matrix, check_finite=False)
    condition = _condition_estimate(matrix, lu)
    if not condition < 1.0 / np.finfo(float).eps:
        raise SingularSystemError(f"{bc.label} system is singular", condition)

    factorization_id = _next_factorization_id()
    logger.info(
        "Assembled %s system: size %d, condition ~ %.3e, factorization #%d",
        bc.label, matrix.shape[0], condition, factorization_id,
    )
    return SystemHandle(
        bc=bc, k_plus=k_plus, surface=surface, nodes=nodes, matrix=matrix,
        lu=lu, piv=piv, factorization_id=factorization_id, condition=condition,
    )


def _right_hand_side(system: SystemHandle, sources: np.ndarray) -> np.ndarray:
    nodes = system.nodes
    k = system.k_plus
    x = nodes.points[:, None, :]
    y = sources[None, :, :]
    incident = np.asarray(phi(k, x, y))
    if system.bc.variant == DIRICHLET:
        return -incident
    gradient = grad_phi(k, x, y)
    if system.bc.variant == IMPEDANCE:
        normals = nodes.normals[:, None, :]
        dnu = gradient[..., 0] * normals[..., 0] + gradient[..., 1] * normals[..., 1]
        rho = system.bc.rho(nodes.s)[:, None]
        return -(dnu - 1j * k * rho * incident)
    normals = UPWARD * nodes.normals[:, None, :]
    dnu = gradient[..., 0] * normals[..., 0] + gradient[..., 1] * normals[..., 1]
    return np.concatenate([-incident, -dnu], axis=0)


def solve_density(system: SystemHandle, source) -> DensitySolution:
    """Back-substitute against the cached factorization for one or many sources.

    All sources go through one ``lu_solve`` call as columns of the right-hand side.

    Args:
        system: Assembled system.
        source: One point (2,) or several points (m, 2).

    Returns:
        DensitySolution; values are 1-D for a single source, (n, m) otherwise.

    Raises:
        GeometryError: If a source is not strictly above the surface.
    """
    sources = np.asarray(source, dtype=float)
    single = sources.ndim == 1
    sources = np.atleast_2d(sources)
    heights = system.surface.height(sources[:, 0])
    if np.any(sources[:, 1] <= heights):
        bad = sources[np.argmax(sources[:, 1] <= heights)].tolist()
        raise GeometryError(f"Source {bad} is not above the surface")

    rhs = _right_hand_side(system, sources)
    values = lu_solve((system.lu, system.piv), rhs, check_finite=False)
    if single:
        values = values[:, 0]

    n = len(system.nodes)
    if system.bc.variant == TRANSMISSION:
        values = (values[:n], values[n:])
    return DensitySolution(
        nodes=system.nodes, bc=system.bc, k_plus=system.k_plus, values=values,
        factorization_id=system.factorization_id, sources=sources,
    )


def _direction(direction) -> np.ndarray:
    e = np.asarray(direction, dtype=float)
    return e / np.hypot(e[0], e[1])


def _near_spacings() -> float:
    return float(get_solver_defaults()["solver"]["near_field_spacings"])


def _upper_layers(density: DensitySolution, k: float, targets: np.ndarray, direction=None):
    """Evaluation matrices of the layers that represent the upper field."""
    nodes = density.nodes
    near = _near_spacings()
    e = None if direction is None else _direction(direction)[None, None, :]
    variant = density.bc.variant

    if variant in (DIRICHLET, TRANSMISSION):
        orientation = 1.0 if variant == DIRICHLET else UPWARD
        if e is None:
            double = evaluation_matrix(
                nodes, targets, lambda d, r, x, nu: double_layer_kernel(k, d, r, orientation * nu), near)
        else:
            double = evaluation_matrix(
                nodes, targets, lambda d, r, x, nu: hypersingular_kernel(k, d, r, e, orientation * nu), near)
        if variant == DIRICHLET:
            return double, None
    if e is None:
        single = evaluation_matrix(nodes, targets, lambda d, r, x, nu: single_layer_kernel(k, d, r), near)
    else:
        single = evaluation_matrix(nodes, targets, lambda d, r, x, nu: single_layer_gradient(k, d, r, e), near)
    if variant == IMPEDANCE:
        return None, single
    return double, single


def _combine(double, single, values):
    if isinstance(values, tuple):
        phi1, phi2 = values
        return double @ phi1 + single @ phi2
    matrix = double if double is not None else single
    return matrix @ values


def _check_bc(density: DensitySolution, bc: BoundaryCondition | None) -> None:
    if bc is not None and bc.variant != density.bc.variant:
        raise BoundaryConditionError(
            f"Density solves the {density.bc.variant} problem, not {bc.variant}"
        )


def scattered_field(density: DensitySolution, bc: BoundaryCondition | None, k_plus: float,
                    eval_points) -> np.ndarray:
    """Scattered field u^s at points above the surface.

    Returns:
        Shape (T,) for a single-source density, (T, m) otherwise.

    Raises:
        GeometryError: If a point is on or below the surface.
    """
    _check_bc(density, bc)
    targets = np.atleast_2d(np.asarray(eval_points, dtype=float))
    check_side(density.nodes, targets, "above")
    double, single = _upper_layers(density, k_plus, targets)
    return _combine(double, single, density.values)


def scattered_field_gradient(density: DensitySolution, bc: BoundaryCondition | None,
                             k_plus: float, eval_points, direction=(0.0, 1.0)) -> np.ndarray:
    """Derivative of u^s along ``direction`` (default the upward line normal (0, 1))."""
    _check_bc(density, bc)
    targets = np.atleast_2d(np.asarray(eval_points, dtype=float))
    check_side(density.nodes, targets, "above")
    double, single = _upper_layers(density, k_plus, targets, direction)
    return _combine(double, single, density.values)


def transmitted_field(density: DensitySolution, k_minus: float, eval_points,
                      direction=None) -> np.ndarray:
    """Transmitted field u^t (or its derivative along ``direction``) below the surface.

    Raises:
        BoundaryConditionError: If the density does not solve a transmission problem.
        GeometryError: If a point is on or above the surface.
    """
    if density.bc.variant != TRANSMISSION:
        raise BoundaryConditionError("transmitted_field needs a transmission density")
    targets = np.atleast_2d(np.asarray(eval_points, dtype=float))
    check_side(density.nodes, targets, "below")
    nodes = density.nodes
    near = _near_spacings()
    k = k_minus
    if direction is None:
        double = evaluation_matrix(
            nodes, targets, lambda d, r, x, nu: double_layer_kernel(k, d, r, UPWARD * nu), near)
        single = evaluation_matrix(nodes, targets, lambda d, r, x, nu: single_layer_kernel(k, d, r), near)
    else:
        e = _direction(direction)[None, None, :]
        double = evaluation_matrix(
            nodes, targets, lambda d, r, x, nu: hypersingular_kernel(k, d, r, e, UPWARD * nu), near)
        single = evaluation_matrix(
            nodes, targets, lambda d, r, x, nu: single_layer_gradient(k, d, r, e), near)
    return _combine(double, single, density.values)
