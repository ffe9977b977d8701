"""Surface extraction and reconstruction scoring for Rough Surface Imaging."""

import logging
from dataclasses import dataclass

import numpy as np

from src.imaging.indicator import ImagingResult
from src.surfaces.catalog import SurfaceProfile

logger = logging.getLogger(__name__)

RELIABILITY_THRESHOLD = 0.2


class EmptyWindowError(ValueError):
    """No reliable extracted column falls inside the scoring window."""


@dataclass(frozen=True, eq=False)
class ExtractedProfile:
    """Per-column peak height of the indicator."""

    x1: np.ndarray
    x2: np.ndarray
    peak: np.ndarray
    reliable: np.ndarray

    def __len__(self) -> int:
        return len(self.x1)


def extract_profile(result: ImagingResult,
                    threshold: float = RELIABILITY_THRESHOLD) -> ExtractedProfile:
    """Take the x2 of the largest indicator value in every x1 column.

    Ties go to the lower x2. Columns whose peak is below ``threshold`` times
    the global maximum are flagged unreliable.
    """
    values = np.asarray(result.values)
    rows = np.argmax(values, axis=0)
    columns = np.arange(values.shape[1])
    peak = values[rows, columns]
    global_max = float(values.max()) if values.size else 0.0
    reliable = peak >= threshold * global_max
    extracted = ExtractedProfile(
        x1=result.grid.x1, x2=result.grid.x2[rows], peak=peak, reliable=reliable,
    )
    logger.debug("Extracted profile: %d of %d columns reliable", int(reliable.sum()), len(columns))
    return extracted


def error_metrics(extracted: ExtractedProfile, truth: SurfaceProfile,
                  window: tuple[float, float]) -> tuple[float, float]:
    """Mean and max absolute height error over reliable columns inside ``window``.

    Raises:
        EmptyWindowError: If no reliable column lies in the window.
    """
    lo, hi = window
    mask = extracted.reliable & (extracted.x1 >= lo) & (extracted.x1 <= hi)
    if not mask.any():
        raise EmptyWindowError(f"No reliable columns in window [{lo}, {hi}]")
    errors = np.abs(extracted.x2[mask] - truth.height(extracted.x1[mask]))
    return float(errors.mean()), float(errors.max())


def parse_window(text: str) -> tuple[float, float]:
    """Parse 'a:b' into a scoring window."""
    parts = text.replace(" ", "").split(":")
    if len(parts) != 2:
        raise ValueError(f"Window must look like 'a:b', got {text!r}")
    lo, hi = float(parts[0]), float(parts[1])
    if hi < lo:
        raise ValueError(f"Window [{lo}, {hi}] is empty")
    return lo, hi
