"""Main pipeline orchestrator for Rough Surface Imaging.

Coordinates the four stages of an imaging experiment:
Forward simulation -> Noise -> Imaging -> Metrics
Every run writes its artifacts and a manifest.json into one output directory.
"""

import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path

from src.composer.composer import compose_outputs
from src.config import LOG_LEVEL, LOGS_DIR, get_solver_defaults
from src.experiment.noise import add_noise
from src.experiment.settings import ExperimentConfig, serialize_config
from src.experiment.storage import export_csv, load_dataset, save_dataset
from src.forward.measurement import CauchyDataSet, cauchy_data
from src.forward.solver import factorization_count
from src.imaging.extract import EmptyWindowError, error_metrics, extract_profile
from src.imaging.indicator import ImagingGrid, ImagingResult, sweep
from src.surfaces.catalog import SurfaceProfile, UnknownSurfaceError, catalog

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def setup_logging() -> None:
    """Configure logging for the pipeline."""
    LOGS_DIR.mkdir(parents=True, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = LOGS_DIR / f"pipeline_{timestamp}.log"

    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler(sys.stdout),
        ],
    )


@dataclass
class RunManifest:
    """Record of one run: config snapshot, timings, files, conditioning and metrics."""

    command: str
    config: str = ""
    timings: dict[str, float] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    condition_estimates: list[float] = field(default_factory=list)
    factorizations: int = 0
    metrics: dict[str, float] = field(default_factory=dict)
    status: str = "running"
    error: str | None = None
    started_at: str = field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))

    def add_output(self, path) -> None:
        self.outputs.append(str(path))

    def missing_outputs(self) -> list[str]:
        return [p for p in self.outputs if not Path(p).exists()]

    def save(self, out_dir) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(asdict(self), f, indent=2)
        return path

    @classmethod
    def load(cls, path) -> "RunManifest":
        with open(path) as f:
            return cls(**json.load(f))


def _truth_for(label: str | None) -> SurfaceProfile | None:
    if not label:
        return None
    try:
        return catalog(label)
    except UnknownSurfaceError:
        logger.warning("No ground truth for surface %r", label)
        return None


def stage_forward(cfg: ExperimentConfig, manifest: RunManifest) -> CauchyDataSet:
    """Stage 1: Simulate the Cauchy data."""
    logger.info("=== Stage 1: Forward simulation ===")
    started = time.perf_counter()
    before = factorization_count()

    data = cauchy_data(
        cfg.boundary_condition(), cfg.surface_profile(), cfg.physics.k_plus,
        cfg.line(), cfg.truncation(),
    )

    used = factorization_count() - before
    manifest.factorizations += used
    manifest.condition_estimates.append(float(data.metadata.get("condition", float("nan"))))
    manifest.timings["forward"] = time.perf_counter() - started
    logger.info("Factorizations for this dataset: %d", used)
    return data


def stage_noise(data: CauchyDataSet, cfg: ExperimentConfig, manifest: RunManifest) -> CauchyDataSet:
    """Stage 2: Add measurement noise."""
    logger.info("=== Stage 2: Noise (delta=%g, seed=%d) ===", cfg.noise.delta, cfg.noise.seed)
    started = time.perf_counter()
    noisy = add_noise(data, cfg.noise.delta, cfg.noise.seed)
    manifest.timings["noise"] = time.perf_counter() - started
    return noisy


def stage_image(data: CauchyDataSet, grid: ImagingGrid, M: int, manifest: RunManifest,
                threads: int = 1) -> ImagingResult:
    """Stage 3: Evaluate the indicator and extract the profile."""
    logger.info("=== Stage 3: Imaging (%s, M=%d) ===", grid.spec(), M)
    started = time.perf_counter()
    result = sweep(grid, data, M, threads=threads)
    threshold = get_solver_defaults()["imaging"]["reliability_threshold"]
    result.extracted = extract_profile(result, threshold)
    manifest.timings["image"] = time.perf_counter() - started
    return result


def stage_metrics(result: ImagingResult, truth: SurfaceProfile | None,
                  window: tuple[float, float], manifest: RunManifest) -> tuple[float, float] | None:
    """Stage 4: Score the reconstruction against the true surface."""
    logger.info("=== Stage 4: Metrics ===")
    if truth is None:
        logger.info("No ground truth available, skipping metrics")
        return None
    try:
        mean_abs, max_abs = error_metrics(result.extracted, truth, window)
    except EmptyWindowError as e:
        logger.warning("Metrics unavailable: %s", e)
        return None
    result.metrics = (mean_abs, max_abs)
    manifest.metrics.update({"mean_abs_error": mean_abs, "max_abs_error": max_abs})
    logger.info("Reconstruction error on [%g, %g]: mean %.4f, max %.4f", *window, mean_abs, max_abs)
    return mean_abs, max_abs


def _finish(manifest: RunManifest, out_dir: Path) -> RunManifest:
    missing = manifest.missing_outputs()
    if missing:
        raise RuntimeError(f"Expected outputs were not written: {', '.join(missing)}")
    manifest.status = "success"
    manifest.save(out_dir)
    return manifest


def _fail(manifest: RunManifest, out_dir: Path, error: Exception) -> None:
    logger.error("%s run failed: %s", manifest.command, error, exc_info=True)
    manifest.status = "failed"
    manifest.error = str(error)
    manifest.save(out_dir)


def run_forward(cfg: ExperimentConfig, out_dir) -> RunManifest:
    """Simulate (and optionally add noise to) a dataset, then write it with a manifest."""
    out_dir = Path(out_dir)
    manifest = RunManifest(command="forward", config=serialize_config(cfg))
    try:
        data = stage_forward(cfg, manifest)
        if cfg.noise.delta > 0:
            data = stage_noise(data, cfg, manifest)
        manifest.add_output(save_dataset(data, out_dir / "dataset.rgh"))
        manifest.add_output(export_csv(data, out_dir / "dataset.csv"))
        return _finish(manifest, out_dir)
    except Exception as e:
        _fail(manifest, out_dir, e)
        raise


def run_image(dataset_path, grid: ImagingGrid, out_dir, M: int = 256,
              window: tuple[float, float] = (-3.0, 3.0), threads: int = 1) -> RunManifest:
    """Image a stored dataset and write the plot artifacts."""
    out_dir = Path(out_dir)
    manifest = RunManifest(command="image")
    try:
        data = load_dataset(dataset_path)
        result = stage_image(data, grid, M, manifest, threads)
        truth = _truth_for(data.surface_label)
        stage_metrics(result, truth, window, manifest)
        title = f"{data.surface_label or 'dataset'} k+={data.k_plus:g} delta={data.noise_delta:g}"
        for path in compose_outputs(result, result.extracted, out_dir, "image", title, truth):
            manifest.add_output(path)
        return _finish(manifest, out_dir)
    except Exception as e:
        _fail(manifest, out_dir, e)
        raise


def run_full_pipeline(cfg: ExperimentConfig, out_dir, threads: int = 1) -> RunManifest:
    """Run forward -> noise -> image -> metrics for one experiment.

    Returns:
        The manifest, also saved as manifest.json in ``out_dir``.
    """
    out_dir = Path(out_dir)
    logger.info("Starting pipeline run into %s", out_dir)
    manifest = RunManifest(command="pipeline", config=serialize_config(cfg))
    try:
        clean = stage_forward(cfg, manifest)
        manifest.add_output(save_dataset(clean, out_dir / "dataset_clean.rgh"))

        noisy = stage_noise(clean, cfg, manifest)
        manifest.add_output(save_dataset(noisy, out_dir / "dataset.rgh"))
        manifest.add_output(export_csv(noisy, out_dir / "dataset.csv"))

        result = stage_image(noisy, cfg.grid(), cfg.imaging.M, manifest, threads)
        truth = cfg.surface_profile()
        stage_metrics(result, truth, cfg.window(), manifest)

        title = (f"{cfg.surface.name} {cfg.physics.bc} k+={cfg.physics.k_plus:g} "
                 f"delta={cfg.noise.delta:g}")
        for path in compose_outputs(result, result.extracted, out_dir, "image", title, truth):
            manifest.add_output(path)
        manifest = _finish(manifest, out_dir)
        logger.info("Pipeline complete: %s", manifest.metrics or "no metrics")
        return manifest
    except Exception as e:
        _fail(manifest, out_dir, e)
        raise
