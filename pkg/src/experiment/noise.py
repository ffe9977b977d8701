"""Multiplicative-scale Gaussian noise for Cauchy data.

Each matrix entry gets delta * (zeta1 + i zeta2) * max|entries| with zeta1,
zeta2 independent standard normals per entry. The two matrices use their own
maxima. Draws come from numpy's PCG64 generator (ziggurat normals) in the
order: us real, us imaginary, dnus real, dnus imaginary.
"""

import dataclasses
import logging

import numpy as np

from src.forward.measurement import CauchyDataSet

logger = logging.getLogger(__name__)


def _perturb(matrix: np.ndarray, delta: float, rng: np.random.Generator) -> np.ndarray:
    scale = delta * float(np.abs(matrix).max()) if matrix.size else 0.0
    zeta1 = rng.standard_normal(matrix.shape)
    zeta2 = rng.standard_normal(matrix.shape)
    return matrix + scale * (zeta1 + 1j * zeta2)


def add_noise(data: CauchyDataSet, delta: float, seed: int) -> CauchyDataSet:
    """Return a noisy copy of ``data``; delta = 0 copies the matrices unchanged.

    Raises:
        ValueError: If delta is negative.
    """
    if not delta >= 0:
        raise ValueError(f"Noise ratio must be >= 0, got {delta}")
    if delta == 0:
        us, dnus = data.us.copy(), data.dnus.copy()
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        us = _perturb(data.us, delta, rng)
        dnus = _perturb(data.dnus, delta, rng)
        logger.info("Added %.0f%% noise (seed %d)", 100 * delta, seed)
    return dataclasses.replace(
        data, us=us, dnus=dnus, noise_delta=float(delta), seed=int(seed),
        metadata=dict(data.metadata),
    )
