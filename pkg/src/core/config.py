"""
Coprimator - Configuration Module
Settings and constants with persistence support
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields, asdict
from typing import Mapping, Optional

from src.core.errors import ConfigError

logger = logging.getLogger(__name__)

MAX_ELEMENTS_ENV = "COPRIMATOR_MAX_ELEMENTS"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Integer settings that may be zero; every other integer must be positive
ZERO_ALLOWED = {"radix_key_max_degree", "json_indent"}


def _check_section(name: str, section) -> None:
    for f in fields(section):
        value = getattr(section, f.name)
        key = f"{name}.{f.name}"
        if f.type is bool:
            if not isinstance(value, bool):
                raise ConfigError(f"{key} must be true or false, got {value!r}")
        elif f.type is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{key} must be an integer, got {value!r}")
            minimum = 0 if f.name in ZERO_ALLOWED else 1
            if value < minimum:
                raise ConfigError(f"{key} must be at least {minimum}, got {value}")


@dataclass
class EngineConfig:
    """Group enumeration settings"""
    max_elements: int = 1_000_000
    radix_key_max_degree: int = 15  # rows up to this degree are keyed by int64


@dataclass
class StarConfig:
    """Star commutator settings"""
    default_k_max: int = 6
    use_class_representatives: bool = True


@dataclass
class WitnessConfig:
    """Alternating group witness settings"""
    fallback_budget: int = 200_000
    verify: bool = True


@dataclass
class ParallelConfig:
    """Worker pool settings"""
    threads: int = 1
    chunk_size: int = 2048


@dataclass
class OutputConfig:
    """Report rendering settings"""
    json_indent: int = 2
    progress: bool = True


@dataclass
class AppConfig:
    """Main application configuration"""
    engine: EngineConfig = field(default_factory=EngineConfig)
    star: StarConfig = field(default_factory=StarConfig)
    witness: WitnessConfig = field(default_factory=WitnessConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    log_level: str = "WARNING"

    # Paths
    config_file: str = "settings.json"

    def reset(self):
        """Restore every section to its defaults"""
        defaults = AppConfig()
        self.engine = defaults.engine
        self.star = defaults.star
        self.witness = defaults.witness
        self.parallel = defaults.parallel
        self.output = defaults.output
        self.log_level = defaults.log_level

    def validate(self):
        """Raise ConfigError for the first mistyped or out-of-range value"""
        for name in ("engine", "star", "witness", "parallel", "output"):
            _check_section(name, getattr(self, name))
        if not isinstance(self.log_level, str) or self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"log_level must be one of {', '.join(LOG_LEVELS)}, got {self.log_level!r}")
        self.log_level = self.log_level.upper()

    def save(self, filepath: Optional[str] = None):
        """Save configuration to file"""
        path = filepath or self.config_file
        data = {
            'engine': asdict(self.engine),
            'star': asdict(self.star),
            'witness': asdict(self.witness),
            'parallel': asdict(self.parallel),
            'output': asdict(self.output),
            'log_level': self.log_level,
        }
        with open(path, 'w') as f:
            json.dump(data, f, indent=2)

    def load(self, filepath: Optional[str] = None) -> bool:
        """Load configuration from file"""
        path = filepath or self.config_file
        if not os.path.exists(path):
            return False

        try:
            with open(path, 'r') as f:
                data = json.load(f)

            if 'engine' in data:
                self.engine = EngineConfig(**data['engine'])
            if 'star' in data:
                self.star = StarConfig(**data['star'])
            if 'witness' in data:
                self.witness = WitnessConfig(**data['witness'])
            if 'parallel' in data:
                self.parallel = ParallelConfig(**data['parallel'])
            if 'output' in data:
                self.output = OutputConfig(**data['output'])
            if 'log_level' in data:
                self.log_level = data['log_level']
        except (OSError, ValueError, TypeError) as e:
            logger.warning("ignoring settings file %s: %s", path, e)
            return False

        self.validate()
        return True

    def apply_env(self, environ: Optional[Mapping[str, str]] = None):
        """Apply environment overrides (COPRIMATOR_MAX_ELEMENTS)"""
        env = os.environ if environ is None else environ
        raw = env.get(MAX_ELEMENTS_ENV)
        if raw is None or raw.strip() == "":
            return
        try:
            value = int(raw)
        except ValueError:
            raise ConfigError(f"{MAX_ELEMENTS_ENV} must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ConfigError(f"{MAX_ELEMENTS_ENV} must be positive, got {value}")
        self.engine.max_elements = value


# Global config instance
config = AppConfig()
