"""
Configuration Management - Centralized configuration for the lab.

Settings are read from the environment (prefix ``VQE_LAB_``, nested
sections separated by ``__``) and an optional ``.env`` file, with
validation and sensible defaults. ``VQE_LAB_THREADS`` is the fallback for
the CLI's ``--threads`` flag.
"""

import math
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class PathConfig(BaseModel):
    """Path configuration."""
    data_dir: Path = Field(default=Path(__file__).resolve().parent.parent / "data")
    output_dir: Path = Field(default=Path("output"))
    logs_dir: Path = Field(default=Path("logs"))


class LoggingConfig(BaseModel):
    """Logging configuration."""
    level: str = Field(default="INFO")
    format: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    log_to_file: bool = Field(default=False)
    log_file_name: str = Field(default="vqe_lab.log")


class SpsaDefaults(BaseModel):
    """Standard SPSA gain constants; the calibration phase sets ``a``."""
    c: float = Field(default=0.1, gt=0)
    alpha: float = Field(default=0.602, gt=0, le=1)
    gamma: float = Field(default=0.101, gt=0, le=1)
    stability: float = Field(default=0.0, ge=0)
    target_step: float = Field(default=2 * math.pi / 10, gt=0)


class AccuracyConfig(BaseModel):
    """Reference energy and chemical-accuracy band, in Hartree."""
    reference_energy: float = Field(default=-1.86712)
    band: float = Field(default=0.0015, gt=0)


class SimilarityThresholds(BaseModel):
    """Defaults for ground/excited/erroneous classification."""
    jt_high: float = Field(default=0.5, ge=0, le=1)
    jt_low: float = Field(default=0.2, ge=0, le=1)
    ground_below: float = Field(default=0.005, ge=0, description="E0 - this is the band floor")
    ground_above: float = Field(default=0.17, ge=0, description="E0 + this is the band ceiling")
    excited_min: float = Field(default=-1.30)
    excited_max: float = Field(default=-1.10)


class MitigationConfig(BaseModel):
    """Constrained least-squares solver settings."""
    tolerance: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=20000, ge=1)
    condition_warning: float = Field(default=1e6, gt=1)


class Settings(BaseSettings):
    """
    Main settings class.

    Environment variables can be set via:
        - VQE_LAB_ENV: Environment name (development, staging, production)
        - VQE_LAB_THREADS: Worker count for sweeps
        - VQE_LAB_LOGGING__LEVEL: Log level override
    """

    model_config = SettingsConfigDict(
        env_prefix="VQE_LAB_",
        env_nested_delimiter="__",
        env_file=".env",
        extra="ignore",
    )

    # Environment
    env: str = Field(default="development")
    debug: bool = Field(default=False)

    # Execution
    threads: int = Field(default=1, ge=1)
    max_qubits: int = Field(default=10, ge=1, le=12)

    # Sections
    paths: PathConfig = Field(default_factory=PathConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    spsa: SpsaDefaults = Field(default_factory=SpsaDefaults)
    accuracy: AccuracyConfig = Field(default_factory=AccuracyConfig)
    similarity: SimilarityThresholds = Field(default_factory=SimilarityThresholds)
    mitigation: MitigationConfig = Field(default_factory=MitigationConfig)

    @classmethod
    def for_environment(cls, env: str) -> "Settings":
        """Settings for a named profile; unknown names get the development profile."""
        name = env if env in ENVIRONMENT_PROFILES else "development"
        level, log_to_file, debug = ENVIRONMENT_PROFILES[name]
        return cls(env=name, debug=debug, logging=LoggingConfig(level=level, log_to_file=log_to_file))


# env -> (log level, log to file, debug)
ENVIRONMENT_PROFILES: dict[str, tuple[str, bool, bool]] = {
    "development": ("INFO", False, True),
    "staging": ("INFO", True, False),
    "production": ("WARNING", True, False),
}


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create global settings instance."""
    global _settings
    if _settings is None:
        env = os.getenv("VQE_LAB_ENV", "development")
        _settings = Settings.for_environment(env)
    return _settings


def configure(settings: Optional[Settings]) -> None:
    """Override global settings (for testing); ``None`` resets to lazy defaults."""
    global _settings
    _settings = settings
