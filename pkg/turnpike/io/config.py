"""
Module for experiment configuration files.

Configuration files are flat, line oriented text::

    # comment
    experiment = particle
    seed = 7
    particle.n = 30
    particle.v_bar = 0.5, 0.5

Every line holds one ``key = value`` pair, keys carry at most one dot
(``section.key``) and comma separated values become lists. The parsed
mapping is validated by strict pydantic models, so unknown or misspelled
keys are rejected before anything is computed.
"""
import logging
import math
from typing import Annotated, Literal, Optional, Tuple

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, ValidationInfo, \
    field_validator

from turnpike.exceptions import ConfigError

logger = logging.getLogger('turnpike.io')


def _split_list(value):
    """Accept a scalar, a list or a comma separated string for vector keys."""
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


Vector = Annotated[Tuple[float, ...], BeforeValidator(_split_list)]
Counts = Annotated[Tuple[int, ...], BeforeValidator(_split_list)]


class Section(BaseModel):
    """Base class of the config sections: unknown keys are errors."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


def _check_vector(value, info, name="d"):
    d = info.data.get(name)
    if d is not None and len(value) not in (1, d):
        raise ValueError("expected 1 or %d components, got %d" % (d, len(value)))
    if not all(math.isfinite(c) for c in value):
        raise ValueError("components must be finite")
    return value


def _check_after(value, info, lower):
    bound = info.data.get(lower)
    if bound is not None and not value > bound:
        raise ValueError("must exceed %s = %r" % (lower, bound))
    return value


class KernelSection(Section):
    """Interaction kernel: a registered name plus the prototype's parameters."""

    name: str = "prototype"
    c_psi: float = Field(1.0, gt=0)
    gamma: float = Field(1.0, ge=0)


class ParticleSection(Section):
    """Particle experiment."""

    n: int = Field(30, ge=1)
    d: int = Field(1, ge=1)
    dt: float = Field(1e-3, gt=0)
    t_end: float = Field(4.0, gt=0)
    lam: float = Field(0.25, gt=0, alias="lambda")
    beta: float = Field(2.0, ge=0)
    v_bar: Vector = (0.5,)
    sigma: float = Field(1.0, ge=0)
    seed: Optional[int] = None
    mean_x: Vector = (1.0,)
    mean_v: Vector = (0.0,)
    fit_t_lo: float = 1.0
    fit_t_hi: float = 3.0
    cheap_control: bool = True
    snapshot_every: int = Field(100, ge=1)

    @field_validator("v_bar", "mean_x", "mean_v")
    @classmethod
    def _vector_length(cls, value, info: ValidationInfo):
        return _check_vector(value, info)

    @field_validator("fit_t_hi")
    @classmethod
    def _window(cls, value, info: ValidationInfo):
        return _check_after(value, info, "fit_t_lo")


class MeanFieldSection(Section):
    """Convergence study over ensemble sizes."""

    d: int = Field(1, ge=1)
    dt: float = Field(1e-2, gt=0)
    t_end: float = Field(5.0, gt=0)
    lam: float = Field(0.25, gt=0, alias="lambda")
    v_bar: Vector = (0.5,)
    sigma: float = Field(1.0, ge=0)
    mean_x: Vector = (1.0,)
    mean_v: Vector = (0.0,)
    n_list: Counts = (100, 400, 800)
    w1_time: Literal["end", "start"] = "end"

    @field_validator("v_bar", "mean_x", "mean_v")
    @classmethod
    def _vector_length(cls, value, info: ValidationInfo):
        return _check_vector(value, info)

    @field_validator("n_list")
    @classmethod
    def _sizes(cls, value):
        if len(value) < 2 or value[0] < 1 or any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("must be at least two strictly increasing positive sizes")
        if any(value[-1] % n for n in value):
            raise ValueError("every size must divide the largest one")
        return value


class HydroSection(Section):
    """Settings shared by the two hydrodynamic experiments."""

    x_min: float = -5.0
    x_max: float = 5.0
    m_cells: int = Field(200, ge=2)
    cfl: float = Field(0.4, gt=0, le=1)
    source_cfl: float = Field(0.01, gt=0, le=1)
    beta: float = Field(2.0, ge=0)
    v_bar: float = 0.0
    lam: float = Field(1.0, gt=0, alias="lambda")
    t_end: float = Field(4.0, gt=0)
    rho_floor: float = Field(1e-12, gt=0)
    rho0: float = Field(0.1, gt=0)
    u0: float = 1.0
    initial: Literal["bump", "uniform"] = "bump"
    snapshot_times: Vector = (0.0, 0.5, 4.0)
    fit_t_lo: float = 0.5
    fit_t_hi: float = 2.0
    cheap_control: bool = True

    @field_validator("x_max")
    @classmethod
    def _domain(cls, value, info: ValidationInfo):
        return _check_after(value, info, "x_min")

    @field_validator("fit_t_hi")
    @classmethod
    def _window(cls, value, info: ValidationInfo):
        return _check_after(value, info, "fit_t_lo")

    @field_validator("snapshot_times")
    @classmethod
    def _snapshots(cls, value):
        if any(t < 0 for t in value):
            raise ValueError("snapshot times must be nonnegative")
        return tuple(sorted(set(value)))


class PressurelessSection(HydroSection):
    """Pressureless experiment."""

    v_bar: float = -0.1
    density_weighted: bool = False


class EulerSection(HydroSection):
    """Full Euler experiment."""

    v_bar: float = 0.1
    p0: float = Field(0.01, gt=0)
    e_floor: float = Field(1e-10, gt=0)
    energy_source: Literal["moment", "symmetric"] = "moment"


class FitSection(Section):
    """Standalone decay fit of a series file."""

    series: Optional[str] = None
    column: Optional[str] = None
    t_lo: float = 0.0
    t_hi: float = math.inf
    floor: Optional[float] = Field(None, gt=0)

    @field_validator("t_hi")
    @classmethod
    def _window(cls, value, info: ValidationInfo):
        return _check_after(value, info, "t_lo")


class ExperimentConfig(Section):
    """A complete experiment configuration."""

    experiment: Literal["particle", "pless", "euler", "convergence", "fit"]
    output_dir: str = "out"
    seed: int = 0
    kernel: KernelSection = KernelSection()
    particle: ParticleSection = ParticleSection()
    meanfield: MeanFieldSection = MeanFieldSection()
    pless: PressurelessSection = PressurelessSection()
    euler: EulerSection = EulerSection()
    fit: FitSection = FitSection()

    @property
    def particle_seed(self):
        """Seed of the particle experiment, the section's own if set."""
        return self.seed if self.particle.seed is None else self.particle.seed


# Section written by dump_config for each experiment.
EXPERIMENT_SECTIONS = {
    "particle": "particle",
    "pless": "pless",
    "euler": "euler",
    "convergence": "meanfield",
    "fit": "fit",
}


def parse_config_text(text):
    """Parse ``key = value`` lines into a nested mapping of raw strings.

    Raises:
        ConfigError: Malformed line, nested key or duplicate key.
    """
    raw = {}
    seen = set()
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("line %d" % number, "expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or key.count(".") > 1 or any(not part for part in key.split(".")):
            raise ConfigError(key or "line %d" % number, "keys are 'name' or 'section.name'")
        if key in seen:
            raise ConfigError(key, "duplicate key")
        seen.add(key)
        if "," in value:
            value = [part.strip() for part in value.split(",")]
        if "." in key:
            section, name = key.split(".")
            target = raw.setdefault(section, {})
            if not isinstance(target, dict):
                raise ConfigError(key, "'%s' is not a section" % section)
            target[name] = value
        else:
            if isinstance(raw.get(key), dict):
                raise ConfigError(key, "'%s' is a section" % key)
            raw[key] = value
    return raw


def _error_key(error):
    return ".".join(str(part) for part in error["loc"] if isinstance(part, str)) or "config"


def validate_config(raw):
    """Validate a nested mapping into an :class:`ExperimentConfig`.

    Raises:
        ConfigError: Naming the first offending ``section.key``.
    """
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(_error_key(first), first["msg"]) from exc


def load_config(path):
    """Read and validate a configuration file."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError("config", "cannot read %s: %s" % (path, exc)) from exc
    config = validate_config(parse_config_text(text))
    logger.debug("Loaded %s experiment from %s", config.experiment, path)
    return config


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(config):
    """Render ``config`` as config-file text: top-level keys, kernel and the experiment's section."""
    lines = ["experiment = %s" % config.experiment,
             "output_dir = %s" % config.output_dir,
             "seed = %d" % config.seed]
    for section in ("kernel", EXPERIMENT_SECTIONS[config.experiment]):
        values = getattr(config, section).model_dump(by_alias=True)
        for key, value in values.items():
            if value is None:
                continue
            lines.append("%s.%s = %s" % (section, key, _format_value(value)))
    return "\n".join(lines) + "\n"


def builtin_configs():
    """Return the reference configurations keyed by file stem."""
    return {
        "particle": ExperimentConfig(experiment="particle", output_dir="out/particle"),
        "pless": ExperimentConfig(experiment="pless", output_dir="out/pless"),
        "euler": ExperimentConfig(experiment="euler", output_dir="out/euler"),
        "convergence": ExperimentConfig(experiment="convergence", output_dir="out/convergence"),
    }
