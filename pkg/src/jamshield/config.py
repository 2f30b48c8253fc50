"""Experiment presets and the flat ``key = value`` configuration format.

Every key defaults to the single-channel power-control reference setting, so
an empty file is a valid configuration.  Lines starting with ``#`` are
comments.  Unknown keys and malformed values are rejected with a
:class:`~jamshield.errors.ConfigurationError` naming the key.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from jamshield.errors import ConfigurationError

MODES = ("pc", "pcam", "mc-pcam")
OBSERVATIONS = ("discrete", "continuous")
AGENTS = ("rl", "fixed")
MODULATIONS = (2, 4, 8, 16, 32, 64)

FULL_EPISODES = 20_000
DESK_EPISODES = 4_000
SIGMA_J2_LEVELS = (0.0, 1e-4, 1e-3)


@dataclass(frozen=True)
class ExperimentPreset:
    name: str = "custom"
    mode: str = "pc"
    observation: str = "discrete"
    agent: str = "rl"
    p_max: float = 1.0
    tau_low: float = 0.2
    tau_high: float = 0.4
    power_levels: int = 101
    num_samples: int = 1
    horizon: int = 200
    episodes: int = FULL_EPISODES
    p_i: float = 100.0
    sigma_r2: float = 0.1
    sigma_j2: float = 0.0
    alpha: float = 0.1
    gamma: float = 0.95
    eps_start: float = 1.0
    eps_final: float = 0.01
    eps_decay: float = 0.999
    seed: int = 0
    p_stay: float = 0.8
    q_stay: float = 0.2
    num_channels: Optional[int] = None
    eta: float = 1e-3
    batch: int = 64
    buffer_capacity: int = 100_000
    target_sync: int = 1000

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}", key="mode")
        if self.observation not in OBSERVATIONS:
            raise ConfigurationError(
                f"observation must be one of {OBSERVATIONS}, got {self.observation!r}", key="observation"
            )
        if self.agent not in AGENTS:
            raise ConfigurationError(f"agent must be one of {AGENTS}, got {self.agent!r}", key="agent")
        if self.power_levels < 2:
            raise ConfigurationError("power_levels must be >= 2", key="power_levels")
        if self.episodes < 0:
            raise ConfigurationError("episodes must be >= 0", key="episodes")
        if self.seed < 0:
            raise ConfigurationError("seed must be >= 0", key="seed")
        if self.num_channels is not None:
            if self.mode == "mc-pcam" and self.num_channels < 2:
                raise ConfigurationError("mc-pcam needs num_channels >= 2", key="num_channels")
            if self.mode != "mc-pcam" and self.num_channels != 1:
                raise ConfigurationError(
                    f"mode {self.mode} is single-channel; num_channels must be 1", key="num_channels"
                )
        if not self.sigma_r2 > 0:
            raise ConfigurationError("sigma_r2 must be > 0", key="sigma_r2")
        # Remaining invariants live with the objects they describe; build them
        # once so a bad file fails at parse time rather than mid-run.
        from jamshield.experiment import build_environment, learner_config

        build_environment(self)
        learner_config(self)

    @property
    def channels(self) -> int:
        if self.num_channels is not None:
            return self.num_channels
        return 2 if self.mode == "mc-pcam" else 1

    def digest(self) -> str:
        """SHA-256 over every setting except ``name`` and ``seed``."""
        items = sorted((k, v) for k, v in asdict(self).items() if k not in ("name", "seed"))
        text = "\n".join(f"{k}={v!r}" for k, v in items)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentPreset)}
CONFIG_KEYS = tuple(k for k in _FIELD_TYPES if k != "name")


def _parse_value(key: str, text: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "str":
            return text.strip().strip("\"'").lower()
        if kind in ("int", "Optional[int]"):
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        return float(text)
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse {text!r} as {kind}", key=key) from None


def parse_config_text(text: str, source: str = "<string>") -> ExperimentPreset:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}", key=key)
        if key in values:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}", key=key)
        values[key] = _parse_value(key, value)
    name = Path(source).stem if source != "<string>" else "custom"
    return ExperimentPreset(name=name, **values)


def parse_config(path) -> ExperimentPreset:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, str(path))


_PRESET_SHAPES = {
    "table2-rl": dict(mode="pc", agent="rl"),
    "table2-fixed": dict(mode="pc", agent="fixed"),
    "table3-rl": dict(mode="pcam", agent="rl"),
    "table3-fixed": dict(mode="pcam", agent="fixed"),
    "table5-rl": dict(mode="mc-pcam", agent="rl"),
    "table5-fixed": dict(mode="mc-pcam", agent="fixed"),
    "table6-ds-sc": dict(mode="pcam", agent="rl", observation="discrete"),
    "table6-cs-sc": dict(mode="pcam", agent="rl", observation="continuous"),
    "table6-ds-mc": dict(mode="mc-pcam", agent="rl", observation="discrete"),
    "table6-cs-mc": dict(mode="mc-pcam", agent="rl", observation="continuous"),
}
PRESET_NAMES = tuple(_PRESET_SHAPES)


def get_preset(name: str, sigma_j2: float = 0.0, episodes: Optional[int] = None, seed: int = 0) -> ExperimentPreset:
    """Named reference configuration, optionally at a different scale or noise level."""
    try:
        shape = _PRESET_SHAPES[name]
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {PRESET_NAMES}") from None
    e = FULL_EPISODES if episodes is None else episodes
    return ExperimentPreset(name=name, sigma_j2=sigma_j2, episodes=e, seed=seed, **shape)


def with_overrides(preset: ExperimentPreset, **changes) -> ExperimentPreset:
    return replace(preset, **changes)
