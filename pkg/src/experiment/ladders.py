"""Parameter ladders for the shipped reconstruction examples.

Each example names two experiment files (one per surface) and three steps.
A step overrides fields of one config section; scaling runs after the
override so resolution follows the stepped wavenumber and aperture.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass

from src.config import EXPERIMENTS_DIR, get_example_ladders
from src.experiment.settings import ExperimentConfig, apply_scale, load_config, with_updates

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LadderRun:
    """One rung of an example ladder, ready to run."""

    example: str
    surface: str
    label: str
    config: ExperimentConfig

    @property
    def slug(self) -> str:
        return f"{self.example}_{self.surface}_{self.label.replace('=', '').replace('+', 'p')}"


def _ladder(example: str) -> dict:
    ladders = get_example_ladders()
    if example not in ladders:
        raise ValueError(f"Unknown example {example!r}; expected one of {', '.join(ladders)}")
    return ladders[example]


def ladder_config(example: str, label: str, filename: str | None = None,
                  paper_scale: bool = False) -> ExperimentConfig:
    """Config of one ladder step.

    Args:
        example: Ladder name, e.g. "example1".
        label: Step label, e.g. "k+=30".
        filename: Experiment file; defaults to the example's first surface.
        paper_scale: Scale unset fields to paper values instead of desk values.

    Raises:
        ValueError: For an unknown example or step label.
    """
    ladder = _ladder(example)
    steps = {step["label"]: step for step in ladder["steps"]}
    if label not in steps:
        raise ValueError(f"Unknown step {label!r} for {example}; expected one of {', '.join(steps)}")
    step = steps[label]
    cfg = load_config(EXPERIMENTS_DIR / (filename or ladder["files"][0]))
    cfg = with_updates(cfg, step["section"], **step["values"])
    return apply_scale(cfg, paper_scale=paper_scale)


def example_runs(examples: list[str] | None = None, paper_scale: bool = False) -> Iterator[LadderRun]:
    """Every step of every surface of the chosen examples (all of them by default)."""
    for example in examples or list(get_example_ladders()):
        ladder = _ladder(example)
        for filename in ladder["files"]:
            for step in ladder["steps"]:
                cfg = ladder_config(example, step["label"], filename, paper_scale)
                logger.debug("Ladder %s %s on %s", example, step["label"], cfg.surface.name)
                yield LadderRun(example=example, surface=cfg.surface.name, label=step["label"], config=cfg)
