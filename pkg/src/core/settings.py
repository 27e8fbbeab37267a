"""Application settings and configuration."""

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="CHAUBOX_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="forbid",
    )

    # Environment
    environment: str = "development"
    log_level: str = "WARNING"
    log_format: str = "json"

    # Simulation
    default_seed: int = 1863
    default_replicates: int = Field(100, ge=1)
    max_workers: int = Field(1, ge=1)

    # Output
    output_precision: int = Field(6, ge=1, le=15)

    # Rendering (abstract units)
    plot_width: int = Field(240, ge=60)
    plot_height: int = Field(480, ge=120)
    plot_margin: int = Field(40, ge=0)
    plot_padding_fraction: float = Field(0.05, ge=0.0, lt=0.5)
    jitter_width: float = Field(0.15, ge=0.0, le=0.45)
    jitter_seed: int = 20240218

    # Ingestion
    max_input_rows: int = Field(10_000_000, ge=1)

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        """Validate environment value."""
        valid_environments = ["development", "test", "production"]
        if v not in valid_environments:
            raise ValueError(f"Environment must be one of: {valid_environments}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log renderer."""
        valid_formats = ["json", "console"]
        if v.lower() not in valid_formats:
            raise ValueError(f"Log format must be one of: {valid_formats}")
        return v.lower()

    @property
    def is_production(self) -> bool:
        """Check if running in production environment."""
        return self.environment == "production"

    @property
    def is_testing(self) -> bool:
        """Check if running in test environment."""
        return self.environment == "test"


@lru_cache()
def get_settings() -> Settings:
    """Get cached application settings."""
    return Settings()
