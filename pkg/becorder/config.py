"""
Configuration settings for becorder
Uses environment variables (prefix BECORDER_) with sensible defaults
"""

from functools import lru_cache
from typing import List

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="BECORDER_",
        case_sensitive=False,
        extra="ignore",
    )

    # API Settings
    API_VERSION: str = "1.0.0"
    ENVIRONMENT: str = "development"
    DEBUG: bool = True

    # Polynomial construction
    L_MAX: int = 12  # degree 4096

    # Certification
    SUBDIVISION_DEPTH_CAP: int = 64
    CROSS_CHECK_STURM: bool = False

    # Interval arithmetic (bits)
    HLF_START_PRECISION: int = 64
    HLF_MAX_PRECISION: int = 1024

    # Universe caps
    MATRIX_MAX_LEN: int = 8
    RANK_MAX_LEN: int = 8
    INFLUENCE_MAX_LEVEL: int = 12
    SEED_MAX_LEN: int = 16
    CLOSURE_HTTP_MAX_LEN: int = 9
    CLOSURE_WARN_NODES: int = 4096

    # Scaling exponents, kept as decimal strings so intervals enclose them exactly
    BEC_SCALING_EXPONENT: str = "3.627"
    AWGN_SCALING_EXPONENT: str = "4"

    # Matrix classification processes
    WORKERS: int = 1

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = False

    # CORS
    CORS_ORIGINS: List[str] = ["*"]


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


# Create settings instance
settings = get_settings()
