"""Application configuration using Pydantic Settings"""

from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables"""

    # Logging
    log_level: str = "INFO"

    # Root finding
    root_tolerance: float = 1e-10
    root_max_sweeps: int = 500
    root_zero_threshold: float = 1e-12
    extended_dps: int = 40
    extended_max_steps: int = 1000

    # Majorana clustering
    cluster_eps: float = 1e-6
    cluster_search_radius: float = 0.25
    snap_tolerance: float = 1e-11

    # Schur machinery limits
    nmax: int = 12
    dense_nmax: int = 10

    # Randomized checks
    seed: int = 42
    workers: int = 4

    # Output
    float_digits: int = 12

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "STELLAR_"
        case_sensitive = False


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


def override_settings(**values) -> Settings:
    """Apply per-invocation overrides (None leaves a setting untouched)"""
    settings = get_settings()
    for name, value in values.items():
        if value is not None:
            setattr(settings, name, value)
    return settings
