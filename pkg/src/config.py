"""
mhsolve configuration
Solver settings, environment overrides and the outcome tags of a solve.
"""

import logging
import os
from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Optional

from dotenv import load_dotenv

from .errors import ConfigError

ENV_PREFIX = "MHSOLVE_"


class Outcome(Enum):
    """Outcome of a solve over the rationals."""
    SUCCESS = "success"
    LOWER_DEGREE_SUSPECTED = "lower_degree_suspected"
    FAIL = "fail"

    @property
    def exit_code(self) -> int:
        return 2 if self is Outcome.FAIL else 0


@dataclass(frozen=True)
class SolverConfig:
    """Configuration for the solver commands."""
    seed: int = 0
    repeat: int = 3  # independent runs, highest degree wins
    threads: int = 1
    sigma: int = 30  # bits of precision for the minimum
    log_level: str = "WARNING"

    def __post_init__(self):
        if self.repeat < 1:
            raise ConfigError(f"repeat must be at least 1, got {self.repeat}")
        if self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.sigma < 0:
            raise ConfigError(f"sigma must be nonnegative, got {self.sigma}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        level = self.log_level.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"unknown log level {self.log_level!r}")
        object.__setattr__(self, "log_level", level)

    @classmethod
    def from_env(cls, env_file: Optional[str] = None) -> "SolverConfig":
        """Defaults overridden by MHSOLVE_* variables (read from env_file or a .env file when present)."""
        load_dotenv(env_file, override=False)
        values = {}
        for f in fields(cls):
            raw = os.environ.get(ENV_PREFIX + f.name.upper())
            if raw is None or raw == "":
                continue
            if f.type in (int, "int"):
                try:
                    values[f.name] = int(raw)
                except ValueError as exc:
                    raise ConfigError(f"{ENV_PREFIX}{f.name.upper()} must be an integer, got {raw!r}") from exc
            else:
                values[f.name] = raw
        return cls(**values)

    def with_overrides(self, **overrides) -> "SolverConfig":
        """Copy with the given non-None values replaced."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
