"""
Configuration module for counter-fitting.
"""
import os
from pathlib import Path
from typing import Optional, Dict, Any, Union

from dotenv import load_dotenv, dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
import logging

from src.errors import ConfigError

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class RuntimeConfig(BaseModel):
    """Process-level settings, read from COUNTERFIT_* environment variables."""
    model_config = ConfigDict(validate_default=True)

    log_level: str = Field(default_factory=lambda: os.getenv("COUNTERFIT_LOG_LEVEL") or "INFO")
    log_file: Optional[str] = Field(default_factory=lambda: os.getenv("COUNTERFIT_LOG_FILE") or None)
    threads: int = Field(default_factory=lambda: os.getenv("COUNTERFIT_THREADS") or 1, ge=1)
    # Edge of the square blocks used for all-pairs cosine computations
    block_size: int = Field(default_factory=lambda: os.getenv("COUNTERFIT_BLOCK_SIZE") or 2048, ge=1)

    @field_validator("log_level")
    @classmethod
    def known_level(cls, level: str) -> str:
        level = level.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {level!r}, expected one of {', '.join(LOG_LEVELS)}")
        return level

    @classmethod
    def from_env(cls) -> "RuntimeConfig":
        try:
            return cls()
        except ValidationError as e:
            raise ConfigError(f"Invalid COUNTERFIT_* environment settings: {e}") from e


class Hyperparams(BaseModel):
    """Counter-fitting hyperparameters."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    delta: float = Field(default=1.0, ge=0.0, le=2.0)
    gamma: float = Field(default=0.0, ge=0.0, le=2.0)
    rho: float = Field(default=0.2, gt=0.0, lt=2.0)
    k1: float = Field(default=1.0, ge=0.0)
    k2: float = Field(default=1.0, ge=0.0)
    k3: float = Field(default=1.0, ge=0.0)
    epochs: int = Field(default=20, ge=0)
    learning_rate: float = Field(default=0.1, gt=0.0)
    seed: int = Field(default=0)

    @classmethod
    def build(cls, values: Optional[Dict[str, Any]] = None) -> "Hyperparams":
        """Validate a mapping of hyperparameter values."""
        values = {_normalize_key(k): v for k, v in (values or {}).items() if v is not None}
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"Invalid hyperparameters: {e}") from e

    @classmethod
    def from_file(cls, path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> "Hyperparams":
        """
        Create hyperparameters from a config file.

        `key = value` text files are read with python-dotenv, `.yml`/`.yaml`
        files with PyYAML. Non-None `overrides` win over file values.
        """
        values = load_config_file(path)
        values.update({_normalize_key(k): v for k, v in (overrides or {}).items() if v is not None})
        return cls.build(values)


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a config file into a dict with normalized keys."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")

    if path.suffix.lower() in (".yml", ".yaml"):
        import yaml
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = yaml.safe_load(fh) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Error parsing config {path}: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"Config {path} must be a mapping")
    else:
        raw = dotenv_values(path, encoding="utf-8")

    values = {}
    for key, value in raw.items():
        if value is None or value == "":
            raise ConfigError(f"Config {path}: key {key!r} has no value")
        values[_normalize_key(str(key))] = value
    logger.debug(f"Loaded config keys from {path}: {sorted(values)}")
    return values


class Config:
    """Main configuration class."""
    def __init__(self):
        self._runtime: Optional[RuntimeConfig] = None

    @property
    def runtime(self) -> RuntimeConfig:
        """Runtime settings, validated on first use."""
        if self._runtime is None:
            self._runtime = RuntimeConfig.from_env()
        return self._runtime

    def get_hyperparams(
        self,
        config_path: Optional[Union[str, Path]] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> Hyperparams:
        """Hyperparameters from defaults, an optional config file and overrides."""
        if config_path:
            return Hyperparams.from_file(config_path, overrides)
        return Hyperparams.build(overrides)


# Create a singleton instance
config = Config()
