"""
Configuration settings for Soliton Lab
"""

from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    """Process-wide settings loaded from SOLITON_LAB_* environment variables"""

    # Output
    output_root: str = Field(default="runs", description="Root directory for artifact bundles")
    profile_cache_dir: Optional[str] = Field(default=None, description="Directory for cached profiles (.npz)")

    # Logging
    log_level: str = Field(default="INFO")
    log_json_file: Optional[str] = Field(default=None, description="Structured JSON log file")

    # Worker pool for sweeps
    max_workers: int = Field(default=4, ge=1)

    # Run guard and time stepping
    eta_max_threshold: float = Field(default=0.9, gt=0.0, lt=1.0)
    stability_constant: float = Field(default=1.0, gt=0.0)

    # Profile construction
    profile_rtol: float = Field(default=1e-13)
    profile_atol: float = Field(default=1e-15)
    profile_residual_tol: float = Field(default=1e-6)
    profile_min_half_length: float = Field(default=40.0, description="Required L * nu_c")

    # Modulation
    newton_tol: float = Field(default=1e-12)
    newton_max_iter: int = Field(default=25)
    orbital_radius: float = Field(default=0.2)
    bump_width: float = Field(default=5.0)

    # Diagnostics
    r_max: float = Field(default=3.0)

    model_config = SettingsConfigDict(
        env_prefix="SOLITON_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Global settings instance
settings = Settings()


# Experiment presets
class PresetId:
    PROFILE_SWEEP = "profile-sweep"
    ORBITAL = "orbital"
    ASYMPTOTIC = "asymptotic"
    MONOTONICITY = "monotonicity"
    VIRIAL = "virial"
    SPECTRAL_SWEEP = "spectral-sweep"
    TRANSONIC_CONSTANTS = "transonic-constants"
    CROSS_CHECK = "cross-check"

    ALL = (
        PROFILE_SWEEP, ORBITAL, ASYMPTOTIC, MONOTONICITY,
        VIRIAL, SPECTRAL_SWEEP, TRANSONIC_CONSTANTS, CROSS_CHECK,
    )


# Run termination status
class RunStatus:
    OK = "ok"
    NEAR_VACUUM_ABORT = "near_vacuum_abort"
    NAN_ABORT = "nan_abort"


# Time integration formulation
class Formulation:
    HYDRO = "hydro"
    CLASSICAL = "classical"


# Operator discretization
class Discretization:
    FD2 = "fd2"
    FD4 = "fd4"
    SPECTRAL = "spectral"

    ALL = (FD2, FD4, SPECTRAL)
