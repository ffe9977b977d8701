"""Configuration manager for Rough Surface Imaging.

Loads the JSON settings files under config/ and environment variables.
"""

import json
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Base paths
PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_DIR = PROJECT_ROOT / "config"
DATA_DIR = PROJECT_ROOT / "data"
LOGS_DIR = PROJECT_ROOT / "logs"
TEMPLATES_DIR = PROJECT_ROOT / "templates"
EXPERIMENTS_DIR = CONFIG_DIR / "experiments"


def _load_json(filename: str) -> dict:
    """Load a JSON config file from the config directory."""
    path = CONFIG_DIR / filename
    with open(path, "r") as f:
        return json.load(f)


def get_solver_defaults() -> dict:
    """Load truncation, solver and imaging defaults."""
    return _load_json("solver-defaults.json")


def get_surface_bounds() -> dict:
    """Load per-surface band bounds and formulas."""
    return _load_json("surfaces.json")


def get_example_ladders() -> dict:
    """Load the example experiment files and their parameter ladders."""
    return _load_json("experiments/ladders.json")


# Environment-based settings
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
OUTPUT_DIR = Path(os.getenv("ROUGHIMG_OUTPUT_DIR", str(DATA_DIR / "runs")))
