"""Settings taken from the environment."""
import logging
import os
from dataclasses import dataclass
from typing import Mapping, Optional

from nqcalc.errors import ConfigError

__all__ = ["SEED_VARIABLE", "LOG_LEVEL_VARIABLE", "DEFAULT_SEED", "Settings", "load_settings"]

SEED_VARIABLE = "NQCALC_SEED"
LOG_LEVEL_VARIABLE = "NQCALC_LOG_LEVEL"
DEFAULT_SEED = 20231

_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


@dataclass(frozen=True)
class Settings:
    seed: int = DEFAULT_SEED
    log_level: str = "WARNING"

    @property
    def level(self) -> int:
        return getattr(logging, self.log_level)

    def verbosity(self, count: int) -> int:
        """Log level after ``count`` ``-v`` flags."""
        if count >= 2:
            return logging.DEBUG
        if count == 1:
            return min(self.level, logging.INFO)
        return self.level


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    environ = os.environ if environ is None else environ
    raw_seed = environ.get(SEED_VARIABLE, "").strip()
    try:
        seed = int(raw_seed) if raw_seed else DEFAULT_SEED
    except ValueError:
        raise ConfigError(SEED_VARIABLE, raw_seed, "an integer") from None
    level = environ.get(LOG_LEVEL_VARIABLE, "").strip().upper() or "WARNING"
    if level not in _LEVELS:
        raise ConfigError(LOG_LEVEL_VARIABLE, level, f"one of {', '.join(_LEVELS)}")
    return Settings(seed, level)
