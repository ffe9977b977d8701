"""Dry-run script: reproduces the three numerical example trends at desk scale.

Runs every example ladder (wavenumber, aperture/height, noise level) on both
surfaces of each example through the full pipeline and prints the
reconstruction error of every run.

Usage: python -m scripts.dry_run [--example example1] [--threads N] [--paper-scale]
"""

import logging
import sys
from datetime import datetime

import click

from src.config import OUTPUT_DIR
from src.experiment.ladders import example_runs
from src.pipeline import run_full_pipeline, setup_logging

logger = logging.getLogger(__name__)


@click.command()
@click.option("--example", "examples", multiple=True, help="Limit to these ladders (repeatable).")
@click.option("--threads", type=click.IntRange(min=1), default=1, envvar="ROUGHIMG_THREADS")
@click.option("--paper-scale", is_flag=True, help="Use paper-scale resolution for unset fields.")
def main(examples, threads, paper_scale):
    setup_logging()
    logger.info("=== Rough Surface Imaging - Dry Run ===")
    root = OUTPUT_DIR / f"dry_run_{datetime.now().strftime('%Y%m%d_%H%M%S')}"
    rows = []
    try:
        for run in example_runs(list(examples) or None, paper_scale):
            manifest = run_full_pipeline(run.config, root / run.slug, threads)
            rows.append((run.example, run.surface, run.label, run.config.measurement.N,
                         manifest.metrics.get("mean_abs_error", float("nan")),
                         sum(manifest.timings.values())))
    except Exception as e:
        logger.error("Dry run failed: %s", str(e), exc_info=True)
        sys.exit(1)

    logger.info("=== Dry Run Complete ===")
    print(f"\n{'example':<10} {'surface':<8} {'setting':<11} {'N':>4} {'mean_abs':>10} {'seconds':>9}")
    for example, surface, label, N, error, seconds in rows:
        print(f"{example:<10} {surface:<8} {label:<11} {N:>4} {error:>10.4f} {seconds:>9.1f}")
    print(f"\nArtifacts under: {root}")


if __name__ == "__main__":
    main()
