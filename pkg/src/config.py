"""
Configuration Module for DialecticKernel
Size bounds, corpus sizes and monitoring thresholds loaded from the environment
"""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class KernelSettings(BaseSettings):
    """Runtime settings; every field can be overridden by an environment variable of the same name"""

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    # Exhaustive validators stay fast only on desk-scale carriers
    max_poset_size: int = Field(default=64, ge=1)
    max_homset_size: int = Field(default=256, ge=1)
    max_types: int = Field(default=6, ge=1)
    max_witnesses: int = Field(default=20, ge=1)

    # Randomized corpora
    default_seed: int = 0
    default_depth: int = Field(default=4, ge=1)
    harness_derivations: int = Field(default=1000, ge=1)
    harness_max_depth: int = Field(default=6, ge=1)
    max_assignments: int = Field(default=4096, ge=1)

    # Performance thresholds
    max_law_seconds: float = Field(default=30.0, gt=0)
    max_memory_percent: float = Field(default=85.0, gt=0)

    jobs: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> KernelSettings:
    return KernelSettings()
