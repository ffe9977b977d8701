"""Command-line interface for Rough Surface Imaging.

Subcommands: forward, image, pipeline, verify.
Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

import logging
import sys
from datetime import datetime
from pathlib import Path

import click
import numpy as np

from src.config import OUTPUT_DIR, get_solver_defaults
from src.experiment.settings import ConfigError, ExperimentConfig, apply_scale, load_config
from src.experiment.storage import DatasetFormatError
from src.imaging.extract import parse_window
from src.imaging.indicator import ImagingGrid
from src.pipeline import run_forward, run_full_pipeline, run_image, setup_logging
from src.validator.validator import format_report, run_checks

logger = logging.getLogger(__name__)

EXIT_NUMERICAL = 1
EXIT_USAGE = 2

_USAGE_ERRORS = (ConfigError, DatasetFormatError, FileNotFoundError, ValueError)

threads_option = click.option(
    "--threads", type=click.IntRange(min=1), envvar="ROUGHIMG_THREADS", default=1,
    show_default=True, help="Worker threads (falls back to ROUGHIMG_THREADS).",
)
out_option = click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
                          default=None, help="Output directory.")


def _fail(error: Exception, code: int) -> None:
    click.echo(f"Error: {error}", err=True)
    sys.exit(code)


def _guarded(action):
    try:
        return action()
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as e:
        _fail(e, EXIT_NUMERICAL)
    except _USAGE_ERRORS as e:
        _fail(e, EXIT_USAGE)


def _experiment(config_path: Path, paper_scale: bool, delta: float | None,
                seed: int | None) -> ExperimentConfig:
    cfg = apply_scale(load_config(config_path), paper_scale=paper_scale)
    updates = {}
    if delta is not None:
        if delta < 0:
            raise ConfigError("noise ratio must be >= 0", field="--delta")
        updates["delta"] = delta
    if seed is not None:
        updates["seed"] = seed
    if updates:
        cfg = cfg.model_copy(update={"noise": cfg.noise.model_copy(update=updates)})
    return cfg


def _output_dir(out_dir: Path | None, cfg: ExperimentConfig | None, stem: str) -> Path:
    if out_dir is not None:
        return out_dir
    if cfg is not None and cfg.output.dir:
        return Path(cfg.output.dir)
    return OUTPUT_DIR / f"{stem}_{datetime.now().strftime('%Y%m%d_%H%M%S')}"


@click.group()
@click.version_option(package_name="rough-surface-imaging")
def cli():
    """Rough-surface scattering simulation and direct imaging."""
    setup_logging()


@cli.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Experiment INI file.")
@out_option
@click.option("--delta", type=float, default=None, help="Noise ratio override.")
@click.option("--seed", type=int, default=None, help="Noise seed override.")
@click.option("--paper-scale", is_flag=True, help="Use paper-scale resolution for unset fields.")
def forward(config_path, out_dir, delta, seed, paper_scale):
    """Simulate Cauchy data and write a dataset file."""
    def action():
        cfg = _experiment(config_path, paper_scale, delta, seed)
        target = _output_dir(out_dir, cfg, "forward")
        manifest = run_forward(cfg, target)
        click.echo(f"Dataset written to {manifest.outputs[0]} ({manifest.factorizations} factorization)")

    _guarded(action)


@cli.command()
@click.option("--dataset", "dataset_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Dataset file.")
@click.option("--grid", "grid_spec", default=None, help="x1min:x1max:nx1,x2min:x2max:nx2")
@click.option("--window", "window_spec", default=None, help="Metric window a:b.")
@click.option("--m", "M", type=click.IntRange(min=2), default=None, help="Half-circle grid count.")
@out_option
@threads_option
def image(dataset_path, grid_spec, window_spec, M, out_dir, threads):
    """Image a dataset: heatmap, PGM, profile and gnuplot script."""
    def action():
        defaults = get_solver_defaults()["imaging"]
        grid = ImagingGrid.parse(grid_spec or defaults["grid"])
        window = parse_window(window_spec or defaults["window"])
        target = _output_dir(out_dir, None, "image")
        manifest = run_image(dataset_path, grid, target, M or defaults["M"], window, threads)
        click.echo(f"Imaging artifacts written to {target}")
        if manifest.metrics:
            click.echo(
                f"mean_abs={manifest.metrics['mean_abs_error']:.4f} "
                f"max_abs={manifest.metrics['max_abs_error']:.4f}"
            )

    _guarded(action)


@cli.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Experiment INI file.")
@out_option
@click.option("--delta", type=float, default=None, help="Noise ratio override.")
@click.option("--seed", type=int, default=None, help="Noise seed override.")
@threads_option
@click.option("--paper-scale", is_flag=True, help="Use paper-scale resolution for unset fields.")
def pipeline(config_path, out_dir, delta, seed, threads, paper_scale):
    """Run forward -> noise -> image -> metrics end to end."""
    def action():
        cfg = _experiment(config_path, paper_scale, delta, seed)
        target = _output_dir(out_dir, cfg, "pipeline")
        manifest = run_full_pipeline(cfg, target, threads)
        click.echo(f"Pipeline artifacts written to {target}")
        for key, value in manifest.metrics.items():
            click.echo(f"{key}={value:.4f}")

    _guarded(action)


@cli.command()
@click.option("--level", type=click.Choice(["fast", "full"]), default="fast", show_default=True)
def verify(level):
    """Run the identity and oracle verification suites."""
    results = _guarded(lambda: run_checks(level))
    click.echo(format_report(results))
    if not all(r.passed for r in results):
        sys.exit(EXIT_NUMERICAL)


def main():
    cli()


if __name__ == "__main__":
    main()
