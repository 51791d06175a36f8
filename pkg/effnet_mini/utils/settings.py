"""Environment-driven defaults"""

import os
from dataclasses import dataclass
from pathlib import Path

from effnet_mini.exceptions import ConfigurationError

_TRUE_VALUES = {"1", "true", "yes", "on"}


def _int_env(name: str, default: str) -> int:
    value = os.getenv(name, default)
    try:
        return int(value)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be an integer, got '{value}'") from e


@dataclass(frozen=True)
class Settings:
    """Defaults read from the environment (and a .env file loaded by main.py).

    Command-line flags take precedence over every value here.
    """

    output_dir: Path
    data_dir: Path
    seed: int
    workers: int
    plots: bool

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from EFFNET_MINI_* environment variables"""
        return cls(
            output_dir=Path(os.getenv("EFFNET_MINI_OUTPUT_DIR", "output")),
            data_dir=Path(os.getenv("EFFNET_MINI_DATA_DIR", "data")),
            seed=_int_env("EFFNET_MINI_SEED", "0"),
            workers=max(1, _int_env("EFFNET_MINI_WORKERS", "1")),
            plots=os.getenv("EFFNET_MINI_PLOTS", "true").strip().lower() in _TRUE_VALUES,
        )
