"""Result composer for Rough Surface Imaging.

Writes plot-ready artifacts for an imaging result: the indicator heatmap as
CSV and as an 8-bit PGM image, the extracted profile, the true surface when
known, and a gnuplot script rendered from a Jinja2 template.
"""

import csv
import logging
from pathlib import Path

import numpy as np
from jinja2 import Environment, FileSystemLoader
from PIL import Image

from src.config import TEMPLATES_DIR
from src.imaging.extract import ExtractedProfile
from src.imaging.indicator import ImagingResult
from src.surfaces.catalog import SurfaceProfile

logger = logging.getLogger(__name__)

TRUTH_SAMPLES = 801


def write_heatmap_csv(result: ImagingResult, path) -> Path:
    """Rows (x1, x2, I) for every grid point, x1 fastest."""
    path = Path(path)
    x1 = result.grid.x1
    x2 = result.grid.x2
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x1", "x2", "I"])
        for r, height in enumerate(x2):
            for c, pos in enumerate(x1):
                writer.writerow([float(pos), float(height), float(result.values[r, c])])
    return path


def scaled_image(values: np.ndarray) -> np.ndarray:
    """Scale by the global max to 0..255, top row = largest x2."""
    peak = float(values.max()) if values.size else 0.0
    if peak <= 0:
        pixels = np.zeros(values.shape, dtype=np.uint8)
    else:
        pixels = np.rint(255.0 * values / peak).astype(np.uint8)
    return pixels[::-1, :]


def write_pgm(result: ImagingResult, path) -> Path:
    """8-bit grayscale PGM of the indicator."""
    path = Path(path)
    Image.fromarray(scaled_image(np.asarray(result.values))).save(path, format="PPM")
    return path


def write_profile_csv(extracted: ExtractedProfile, path) -> Path:
    """Rows (x1, x2, reliable) with one row per grid column."""
    path = Path(path)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x1", "x2", "reliable"])
        for pos, height, ok in zip(extracted.x1, extracted.x2, extracted.reliable):
            writer.writerow([float(pos), float(height), int(bool(ok))])
    return path


def write_truth_csv(truth: SurfaceProfile, x1_min: float, x1_max: float, path) -> Path:
    """Sample the true surface over the grid's x1 range."""
    path = Path(path)
    s = np.linspace(x1_min, x1_max, TRUTH_SAMPLES)
    heights = truth.height(s)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x1", "x2"])
        for pos, height in zip(s, heights):
            writer.writerow([float(pos), float(height)])
    return path


def render_gnuplot(context: dict) -> str:
    """Render the heatmap plot script."""
    env = Environment(loader=FileSystemLoader(str(TEMPLATES_DIR)), keep_trailing_newline=True)
    template = env.get_template("heatmap.gp.j2")
    return template.render(**context)


def compose_outputs(result: ImagingResult, extracted: ExtractedProfile, out_dir,
                    stem: str = "image", title: str = "",
                    truth: SurfaceProfile | None = None) -> list[Path]:
    """Write all imaging artifacts into ``out_dir``.

    Returns:
        Paths of the files written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = result.grid

    heatmap = write_heatmap_csv(result, out_dir / f"{stem}_heatmap.csv")
    pgm = write_pgm(result, out_dir / f"{stem}.pgm")
    profile = write_profile_csv(extracted, out_dir / f"{stem}_profile.csv")
    written = [heatmap, pgm, profile]

    truth_csv = None
    if truth is not None:
        truth_csv = write_truth_csv(truth, grid.x1_min, grid.x1_max, out_dir / f"{stem}_truth.csv")
        written.append(truth_csv)

    script_path = out_dir / f"{stem}.gp"
    script = render_gnuplot({
        "title": title or stem,
        "script_name": script_path.name,
        "png_name": f"{stem}.png",
        "height_px": max(300, int(1000 * (grid.x2_max - grid.x2_min) / max(grid.x1_max - grid.x1_min, 1e-9)) + 150),
        "x1_min": grid.x1_min,
        "x1_max": grid.x1_max,
        "x2_min": grid.x2_min,
        "x2_max": grid.x2_max,
        "max_value": float(result.values.max()) or 1.0,
        "heatmap_csv": heatmap.name,
        "profile_csv": profile.name,
        "truth_csv": truth_csv.name if truth_csv else None,
    })
    script_path.write_text(script)
    written.append(script_path)
    logger.info("Wrote %d imaging artifacts to %s", len(written), out_dir)
    return written
