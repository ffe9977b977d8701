"""Experiment configuration for Rough Surface Imaging.

Experiments are INI files with the sections [surface], [physics],
[measurement], [imaging], [noise] and an optional [output]. Values are
validated by pydantic models; unspecified fields take the defaults below
and, unless paper scale is requested, the desk-scale overrides from
config/solver-defaults.json.
"""

import configparser
import logging
import math
import re
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import get_solver_defaults
from src.forward.conditions import BoundaryCondition, compile_rho
from src.forward.measurement import MeasurementLine
from src.forward.solver import TruncationConfig
from src.imaging.extract import parse_window
from src.imaging.indicator import ImagingGrid, format_number
from src.surfaces.catalog import SurfaceProfile, catalog

logger = logging.getLogger(__name__)

SECTIONS = ("surface", "physics", "measurement", "imaging", "noise", "output")

# lower-cased INI keys -> model field names
_KEYS = {
    "surface": {"name": "name"},
    "physics": {
        "bc": "bc",
        "k_plus": "k_plus",
        "rho": "rho",
        "k_minus": "k_minus",
        "nodes_per_wavelength": "nodes_per_wavelength",
    },
    "measurement": {"h": "H", "a": "A", "n": "N"},
    "imaging": {"m": "M", "grid": "grid", "window": "window"},
    "noise": {"delta": "delta", "seed": "seed"},
    "output": {"dir": "dir"},
}


class ConfigError(ValueError):
    """Invalid experiment configuration, with the offending field and line."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(field)
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SurfaceSpec(_Section):
    name: str

    @field_validator("name")
    @classmethod
    def _known_surface(cls, value: str) -> str:
        value = value.strip().lower()
        catalog(value)
        return value


class PhysicsSpec(_Section):
    bc: Literal["dirichlet", "impedance", "transmission"]
    k_plus: float = Field(gt=0)
    rho: str | None = None
    k_minus: float | None = Field(default=None, gt=0)
    nodes_per_wavelength: float | None = Field(default=None, gt=0)

    @field_validator("bc", mode="before")
    @classmethod
    def _normalise_bc(cls, value):
        return value.strip().lower() if isinstance(value, str) else value

    @model_validator(mode="after")
    def _variant_parameters(self) -> "PhysicsSpec":
        if self.bc == "impedance":
            if not self.rho:
                raise ValueError("impedance condition needs physics.rho")
            compile_rho(self.rho)
        if self.bc == "transmission":
            if self.k_minus is None:
                raise ValueError("transmission condition needs physics.k_minus")
            if self.k_minus == self.k_plus:
                raise ValueError("transmission condition needs k_minus != k_plus")
        return self


class MeasurementSpec(_Section):
    H: float = Field(default=1.5, gt=0)
    A: float = Field(default=10.0, gt=0)
    N: int = Field(default=100, ge=1)


class ImagingSpec(_Section):
    M: int = Field(default=256, ge=2)
    grid: str = "-5:5:201,0.3:1.3:101"
    window: str = "-3:3"

    @field_validator("grid")
    @classmethod
    def _valid_grid(cls, value: str) -> str:
        return ImagingGrid.parse(value).spec()

    @field_validator("window")
    @classmethod
    def _valid_window(cls, value: str) -> str:
        lo, hi = parse_window(value)
        return f"{format_number(lo)}:{format_number(hi)}"


class NoiseSpec(_Section):
    delta: float = Field(default=0.0, ge=0)
    seed: int = 0


class OutputSpec(_Section):
    dir: str | None = None


class ExperimentConfig(BaseModel):
    """A complete, validated experiment."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    surface: SurfaceSpec
    physics: PhysicsSpec
    measurement: MeasurementSpec = Field(default_factory=MeasurementSpec)
    imaging: ImagingSpec = Field(default_factory=ImagingSpec)
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def _grid_below_line(self) -> "ExperimentConfig":
        grid = ImagingGrid.parse(self.imaging.grid)
        if grid.x2_max >= self.measurement.H:
            raise ValueError(
                f"imaging grid top {grid.x2_max:g} must be below measurement H={self.measurement.H:g}"
            )
        return self

    def surface_profile(self) -> SurfaceProfile:
        return catalog(self.surface.name)

    def boundary_condition(self) -> BoundaryCondition:
        if self.physics.bc == "impedance":
            return BoundaryCondition.impedance(self.physics.rho)
        if self.physics.bc == "transmission":
            return BoundaryCondition.transmission(self.physics.k_minus)
        return BoundaryCondition.dirichlet()

    def line(self) -> MeasurementLine:
        return MeasurementLine(H=self.measurement.H, A=self.measurement.A, N=self.measurement.N)

    def grid(self) -> ImagingGrid:
        return ImagingGrid.parse(self.imaging.grid)

    def window(self) -> tuple[float, float]:
        return parse_window(self.imaging.window)

    def truncation(self) -> TruncationConfig:
        return TruncationConfig.from_defaults(nodes_per_wavelength=self.physics.nodes_per_wavelength)


def _locate(text: str, section: str, key: str | None = None) -> int | None:
    """1-based line number of ``key`` inside ``section`` (or of the section header)."""
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        header = re.match(r"^\[([^\]]+)\]", line)
        if header:
            current = header.group(1).strip().lower()
            if key is None and current == section:
                return number
            continue
        if key is not None and current == section:
            name = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            if name == key.lower():
                return number
    return None


def _read_ini(text: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("key found before any [section] header", line=e.lineno) from e
    except configparser.DuplicateOptionError as e:
        raise ConfigError("duplicate key", field=f"{e.section}.{e.option}", line=e.lineno) from e
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"duplicate section [{e.section}]", line=e.lineno) from e
    except configparser.ParsingError as e:
        lineno = e.errors[0][0] if e.errors else None
        raise ConfigError("expected 'key = value'", line=lineno) from e
    return parser


def _to_fields(parser: configparser.ConfigParser, text: str) -> dict:
    data: dict[str, dict] = {}
    for section in parser.sections():
        name = section.strip().lower()
        if name not in _KEYS:
            raise ConfigError(
                f"unknown section [{section}]; expected one of {', '.join(SECTIONS)}",
                line=_locate(text, name),
            )
        fields = data.setdefault(name, {})
        for key, value in parser.items(section):
            if key not in _KEYS[name]:
                raise ConfigError("unknown key", field=f"{name}.{key}", line=_locate(text, name, key))
            if not value.strip():
                raise ConfigError("value is empty", field=f"{name}.{key}", line=_locate(text, name, key))
            fields[_KEYS[name][key]] = value.strip()
    for required in ("surface", "physics"):
        if required not in data:
            raise ConfigError(f"missing section [{required}]", field=required)
    return data


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate experiment INI text.

    Raises:
        ConfigError: With line/field diagnostics; validation failures list every bound violated.
    """
    parser = _read_ini(text)
    data = _to_fields(parser, text)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        problems = []
        first_field = None
        first_line = None
        for err in e.errors():
            loc = [str(part) for part in err["loc"]]
            field = ".".join(loc) if loc else "config"
            problems.append(f"{field}: {err['msg']}")
            if first_field is None:
                first_field = field
                if len(loc) >= 2:
                    reverse = {v: k for k, v in _KEYS.get(loc[0], {}).items()}
                    first_line = _locate(text, loc[0], reverse.get(loc[1], loc[1]))
        raise ConfigError("; ".join(problems), field=first_field, line=first_line) from e


def load_config(path) -> ExperimentConfig:
    """Read and parse an experiment file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ConfigError: If the file is invalid.
    """
    path = Path(path)
    return parse_config(path.read_text())


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Canonical INI text; parse_config(serialize_config(cfg)) == cfg."""
    lines: list[str] = []
    for section in SECTIONS:
        values = getattr(cfg, section).model_dump()
        entries = [(key, val) for key, val in values.items() if val is not None]
        if not entries:
            continue
        if lines:
            lines.append("")
        lines.append(f"[{section}]")
        for key, val in entries:
            lines.append(f"{key} = {_format(val)}")
    return "\n".join(lines) + "\n"


def line_sampling_floor(A: float, k_plus: float, per_wavelength: float) -> int:
    """Smallest N whose receiver spacing A / N is at most a wavelength / per_wavelength."""
    return math.ceil(per_wavelength * A * k_plus / (2.0 * math.pi) - 1e-9)


def halfcircle_floor(k_plus: float, A: float, H: float, grid: ImagingGrid, step: int) -> int:
    """Smallest multiple of ``step`` covering k+ times the largest |y' - z'| on the grid."""
    reach = A + max(abs(grid.x1_min), abs(grid.x1_max)) + H
    return step * math.ceil(k_plus * reach / step)


def apply_scale(cfg: ExperimentConfig, paper_scale: bool = False) -> ExperimentConfig:
    """Fill fields the file left unset with desk-scale (or paper-scale) values.

    At desk scale an unset N is raised until the receiver spacing resolves
    ``receivers_per_wavelength`` points per wavelength of k+, and an unset M is
    raised to a multiple of ``halfcircle_step`` that covers k+ |y' - z'| over
    the imaging grid.
    """
    scale = get_solver_defaults()["paper_scale" if paper_scale else "desk_scale"]
    measurement = cfg.measurement
    physics = cfg.physics
    imaging = cfg.imaging
    if "N" not in measurement.model_fields_set:
        N = int(scale["N"])
        if scale.get("receivers_per_wavelength"):
            N = max(N, line_sampling_floor(measurement.A, physics.k_plus, scale["receivers_per_wavelength"]))
        measurement = measurement.model_copy(update={"N": N})
    if "nodes_per_wavelength" not in physics.model_fields_set:
        physics = physics.model_copy(update={"nodes_per_wavelength": float(scale["nodes_per_wavelength"])})
    if "grid" not in imaging.model_fields_set:
        imaging = imaging.model_copy(update={"grid": scale["grid"]})
    if "M" not in imaging.model_fields_set and scale.get("halfcircle_step"):
        M = max(imaging.M, halfcircle_floor(physics.k_plus, measurement.A, measurement.H,
                                            ImagingGrid.parse(imaging.grid), int(scale["halfcircle_step"])))
        imaging = imaging.model_copy(update={"M": M})
    scaled = cfg.model_copy(update={"measurement": measurement, "physics": physics, "imaging": imaging})
    logger.info(
        "%s scale: N=%d, M=%d, nodes/wavelength=%g, grid=%s",
        "Paper" if paper_scale else "Desk", measurement.N, imaging.M,
        physics.nodes_per_wavelength, imaging.grid,
    )
    return scaled


def with_updates(cfg: ExperimentConfig, section: str, **values) -> ExperimentConfig:
    """Copy of ``cfg`` with fields of one section replaced and the whole config revalidated.

    Fields that were unset stay unset, so apply_scale can still fill them.
    """
    if section not in SECTIONS:
        raise ValueError(f"Unknown section {section!r}")
    data = cfg.model_dump(exclude_unset=True)
    data.setdefault(section, {}).update(values)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(str(e), field=section) from e
