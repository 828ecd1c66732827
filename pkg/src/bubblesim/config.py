"""Scenario configuration: a flat key-value YAML schema.

Every key is optional and falls back to a documented default, so the
minimal useful file is something like

    n_mean_reverting: 500
    n_speculators: 0
    seed: 2023

Unknown keys are rejected by name rather than silently ignored, so a typo
in a config file fails the run instead of quietly running the defaults.
Internally the flat keys are grouped into the population, fundamental and
market-maker parameter blocks used by the simulation.
"""

import dataclasses
from dataclasses import dataclass, field

import yaml

from .agents import PopulationConfig
from .fundamental import FundamentalParams
from .marketmaker import MarketMakerParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 2023
    horizon_s: float = 23_400.0         # one 6.5-hour trading day
    snapshot_interval_s: float = 1.0
    mtm_interval_s: float = 60.0
    snapshot_depth: int = 5
    output_dir: str = "out"
    population: PopulationConfig = field(default_factory=PopulationConfig)
    fundamental: FundamentalParams = field(default_factory=FundamentalParams)
    market_maker: MarketMakerParams = field(default_factory=MarketMakerParams)

    def __post_init__(self):
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.horizon_s <= 0:
            raise ConfigError(f"horizon_s must be positive, got {self.horizon_s}")
        if self.snapshot_interval_s <= 0:
            raise ConfigError(f"snapshot_interval_s must be positive, got {self.snapshot_interval_s}")
        if self.mtm_interval_s <= 0:
            raise ConfigError(f"mtm_interval_s must be positive, got {self.mtm_interval_s}")
        if self.snapshot_depth < 1:
            raise ConfigError(f"snapshot_depth must be >= 1, got {self.snapshot_depth}")
        if not self.output_dir:
            raise ConfigError("output_dir must be a non-empty path")


_TOP_KEYS = ("seed", "horizon_s", "snapshot_interval_s", "mtm_interval_s",
             "snapshot_depth", "output_dir")

# flat key -> (section attribute, field name); built once from the dataclasses
_KEY_MAP = {}
for _f in dataclasses.fields(PopulationConfig):
    _KEY_MAP[_f.name] = ("population", _f.name)
for _f in dataclasses.fields(FundamentalParams):
    _KEY_MAP[f"fundamental_{_f.name}"] = ("fundamental", _f.name)
for _f in dataclasses.fields(MarketMakerParams):
    _KEY_MAP[f"mm_{_f.name}"] = ("market_maker", _f.name)

_SECTION_TYPES = {
    "population": PopulationConfig,
    "fundamental": FundamentalParams,
    "market_maker": MarketMakerParams,
}


def known_keys():
    """All recognised flat config keys, sorted."""
    return sorted(list(_TOP_KEYS) + list(_KEY_MAP))


def from_mapping(data: dict) -> ScenarioConfig:
    """Build a config from a plain mapping, e.g. parsed YAML.  Raises
    ConfigError naming the first offending key on anything unrecognised."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config root must be a key-value mapping")
    top_kwargs = {}
    section_kwargs = {name: {} for name in _SECTION_TYPES}
    for key, value in data.items():
        if key in _TOP_KEYS:
            top_kwargs[key] = value
        elif key in _KEY_MAP:
            section, fname = _KEY_MAP[key]
            section_kwargs[section][fname] = value
        else:
            raise ConfigError(f"unknown config key '{key}'")
    sections = {}
    for name, cls in _SECTION_TYPES.items():
        try:
            sections[name] = cls(**section_kwargs[name])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config value: {exc}") from exc
    try:
        return ScenarioConfig(**top_kwargs, **sections)
    except TypeError as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc


def to_mapping(cfg: ScenarioConfig) -> dict:
    """The flat mapping form; from_mapping(to_mapping(cfg)) == cfg."""
    out = {key: getattr(cfg, key) for key in _TOP_KEYS}
    for key, (section, fname) in _KEY_MAP.items():
        out[key] = getattr(getattr(cfg, section), fname)
    return out


def load_config(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    return from_mapping(data)


def save_config(cfg: ScenarioConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(to_mapping(cfg), fh, sort_keys=True)


def with_composition(cfg: ScenarioConfig, n_mean_reverting: int,
                     n_speculators: int) -> ScenarioConfig:
    """Same scenario with a different agent mix."""
    population = dataclasses.replace(cfg.population,
                                     n_mean_reverting=n_mean_reverting,
                                     n_speculators=n_speculators)
    return dataclasses.replace(cfg, population=population)


def with_seed(cfg: ScenarioConfig, seed: int) -> ScenarioConfig:
    return dataclasses.replace(cfg, seed=seed)
