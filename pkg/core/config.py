from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SolverSettings(BaseSettings):
    max_pivots: int = Field(200_000, ge=1)  # Hard stop for the exact simplex
    bland_after: int = Field(50, ge=1)  # Degenerate pivots in a row before Bland's rule takes over

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="OVERHANG_SOLVER_",
        extra="ignore"
    )


class HarnessSettings(BaseSettings):
    # Only the log2 threshold of the weightless-move bound is rounded; everything else is exact.
    precision_bits: int = Field(64, ge=64)
    improved_constants: bool = False  # Adds non-normative records, never changes a verdict
    conjecture_constant: str = "1"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="OVERHANG_",
        extra="ignore"
    )


class RenderSettings(BaseSettings):
    scale: int = Field(40, ge=1)  # SVG pixels per unit length
    show_forces: bool = True
    stem_row_height: int = Field(60, ge=10)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="OVERHANG_RENDER_",
        extra="ignore"
    )


class Settings(BaseSettings):
    log_level: str = "WARNING"
    log_file: Optional[str] = None
    batch_workers: int = Field(4, ge=1)
    default_block_height: str = "1"  # Used when a stack file has no "h" header

    # Nested settings
    solver: SolverSettings = Field(default_factory=SolverSettings)
    harness: HarnessSettings = Field(default_factory=HarnessSettings)
    render: RenderSettings = Field(default_factory=RenderSettings)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="OVERHANG_",
        extra="ignore"
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
