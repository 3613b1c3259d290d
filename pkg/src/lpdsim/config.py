"""Experiment configuration: INI-style ``key = value`` sections, presets, overrides.

Powers are written in dB and converted to linear units while parsing, so
everything downstream of :func:`parse_config` is linear.
"""

from __future__ import annotations

import configparser
import dataclasses
import enum
import hashlib
from dataclasses import dataclass, field
from importlib import resources

from .channel import ChannelScenario, Fading, PathLossLaw, db_to_linear
from .detector import ThresholdMode
from .netmodel import Placement, Region

__all__ = [
    "ConfigError",
    "ExperimentKind",
    "ExperimentConfig",
    "parse_config",
    "load_preset",
    "PRESETS",
]

PRESETS = ("fig3", "fig6", "fig12")


class ConfigError(ValueError):
    pass


class ExperimentKind(enum.Enum):
    DETECT_ONCE = "detect"
    SWEEP_T = "sweep-t"
    SWEEP_P = "sweep-p"
    NET_GEN = "netgen"
    ROUTE_ONCE = "route"
    SECURE_RATIO_SWEEP = "secure-ratio"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: ExperimentKind = ExperimentKind.DETECT_ONCE
    seed: int = 0
    trials: int = 1000

    # channel
    alice_power: float = 1000.0
    noise_power: float = 1.0
    alpha: float = 3.0
    path_loss_law: PathLossLaw = PathLossLaw.UNBOUNDED
    fading: Fading = Fading.NONE
    block_fading: bool = False

    # warden walk; spacing None means "place P_2t at edge_ratio * noise"
    t: int = 25
    m: int = 100
    spacing: float | None = None
    edge_ratio: float = 1.0
    per_sample_bernoulli: bool = False

    # detector / schedule
    beta: float = 0.05
    mode: ThresholdMode | None = None
    transmit_prob: float = 1.0

    # sweeps
    alphas: tuple[float, ...] = (3.0, 4.0)
    betas: tuple[float, ...] = (0.05,)
    t_values: tuple[int, ...] = (25, 50, 100)
    p_values: tuple[float, ...] = (0.0, 0.05, 0.1, 0.2, 0.5)

    # network
    placement: Placement = Placement.UNIFORM
    width: float = 200.0
    height: float = 100.0
    n: int = 300
    density: float = 0.015
    clusters: int = 6
    spread: float = 12.0
    detection_radius: float = 5.0
    comm_radius: float = 20.0
    bs_position: tuple[float, float] = (0.0, 50.0)
    source_position: tuple[float, float] = (200.0, 50.0)
    p_max: float = 0.25
    router: str = "dbr"
    node_counts: tuple[int, ...] = (100, 200, 300, 400, 500, 600)
    placements: tuple[Placement, ...] = (Placement.UNIFORM, Placement.CLUSTERED)
    routers: tuple[str, ...] = ("dbr", "gbr")
    max_attempts: int = 2000

    source_text: str = field(default="", compare=False, repr=False)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        for r in (self.router, *self.routers):
            if r not in ("dbr", "gbr"):
                raise ConfigError(f"unknown router {r!r} (expected dbr or gbr)")

    @property
    def scenario(self) -> ChannelScenario:
        return self.scenario_for(self.alpha)

    def scenario_for(self, alpha: float) -> ChannelScenario:
        try:
            return ChannelScenario(
                alice_power=self.alice_power,
                noise_power=self.noise_power,
                path_loss_exponent=alpha,
                path_loss_law=self.path_loss_law,
                fading=self.fading,
                block_fading=self.block_fading,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def region(self) -> Region:
        return Region(self.width, self.height)

    def canonical(self) -> str:
        """Stable text form of every setting that can influence results."""
        lines = []
        for f in dataclasses.fields(self):
            if f.name == "source_text":
                continue
            lines.append(f"{f.name}={_render(getattr(self, f.name))}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]


def _render(value) -> str:
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, tuple):
        return ",".join(_render(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(";", ",").split(",") if x.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace(";", ",").split(",") if x.strip())


def _pair(text: str) -> tuple[float, float]:
    values = _floats(text)
    if len(values) != 2:
        raise ValueError(f"expected two comma-separated numbers, got {text!r}")
    return values


def _spacing(text: str):
    return None if text.strip().lower() == "auto" else float(text)


def _mode(text: str):
    return None if text.strip().lower() == "auto" else ThresholdMode(text.strip().lower())


def _words(text: str) -> tuple[str, ...]:
    return tuple(x.strip().lower() for x in text.split(",") if x.strip())


# (section, key) -> (field name, parser)
_KEYS = {
    ("experiment", "kind"): ("kind", lambda s: ExperimentKind(s.strip().lower())),
    ("experiment", "seed"): ("seed", int),
    ("experiment", "trials"): ("trials", int),
    ("channel", "alice_power_db"): ("alice_power", lambda s: db_to_linear(float(s))),
    ("channel", "noise_power_db"): ("noise_power", lambda s: db_to_linear(float(s))),
    ("channel", "path_loss_exponent"): ("alpha", float),
    ("channel", "path_loss_law"): ("path_loss_law", lambda s: PathLossLaw(s.strip().lower())),
    ("channel", "fading"): ("fading", lambda s: Fading(s.strip().lower())),
    ("channel", "block_fading"): ("block_fading", _bool),
    ("warden", "t"): ("t", int),
    ("warden", "m"): ("m", int),
    ("warden", "spacing"): ("spacing", _spacing),
    ("warden", "edge_ratio"): ("edge_ratio", float),
    ("warden", "per_sample_bernoulli"): ("per_sample_bernoulli", _bool),
    ("detector", "beta"): ("beta", float),
    ("detector", "mode"): ("mode", _mode),
    ("schedule", "transmit_prob"): ("transmit_prob", float),
    ("sweep", "alphas"): ("alphas", _floats),
    ("sweep", "betas"): ("betas", _floats),
    ("sweep", "t_values"): ("t_values", _ints),
    ("sweep", "p_values"): ("p_values", _floats),
    ("network", "placement"): ("placement", lambda s: Placement(s.strip().lower())),
    ("network", "width"): ("width", float),
    ("network", "height"): ("height", float),
    ("network", "n"): ("n", int),
    ("network", "density"): ("density", float),
    ("network", "clusters"): ("clusters", int),
    ("network", "spread"): ("spread", float),
    ("network", "detection_radius"): ("detection_radius", float),
    ("network", "comm_radius"): ("comm_radius", float),
    ("network", "bs_position"): ("bs_position", _pair),
    ("network", "source_position"): ("source_position", _pair),
    ("network", "p_max"): ("p_max", float),
    ("network", "router"): ("router", lambda s: s.strip().lower()),
    ("network", "node_counts"): ("node_counts", _ints),
    ("network", "placements"): ("placements", lambda s: tuple(Placement(w) for w in _words(s))),
    ("network", "routers"): ("routers", _words),
    ("network", "max_attempts"): ("max_attempts", int),
}


def parse_config(text: str = "", overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Parse INI text, then apply ``section.key -> value`` overrides.

    Unknown sections or keys are rejected so that typos do not silently fall
    back to defaults.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    raw: dict[tuple[str, str], str] = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            raw[(section.lower(), key.lower())] = value
    for dotted, value in (overrides or {}).items():
        section, _, key = dotted.partition(".")
        raw[(section.lower(), key.lower())] = str(value)

    values = {}
    for (section, key), value in raw.items():
        if (section, key) not in _KEYS:
            raise ConfigError(f"unknown config key [{section}] {key}")
        name, conv = _KEYS[(section, key)]
        try:
            values[name] = conv(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for [{section}] {key}: {value!r} ({exc})") from exc
    try:
        return ExperimentConfig(source_text=text, **values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_preset(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("lpdsim.presets").joinpath(f"{name}.ini").read_text()
