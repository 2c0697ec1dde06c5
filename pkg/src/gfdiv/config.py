from collections.abc import Iterable
from functools import lru_cache
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_SEED = 0xC0FFEE
_DEFAULT_RATES: tuple[float, ...] = (0.1, 0.2, 0.3)


def _normalize_rates(raw: object) -> tuple[float, ...]:
    if raw is None or raw == "":
        return _DEFAULT_RATES

    if isinstance(raw, str):
        candidates = [item.strip() for item in raw.split(",")]
    elif isinstance(raw, Iterable) and not isinstance(raw, dict):
        candidates = [str(item).strip() for item in raw]
    else:
        raise ValueError(
            "Invalid value for GFDIV_DEFAULT_RATES; provide comma-separated numbers "
            "or a sequence."
        )

    cleaned = tuple(float(item) for item in candidates if item)
    return cleaned or _DEFAULT_RATES


class Settings(BaseSettings):
    """Runtime configuration loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=False,
        enable_decoding=False,
        populate_by_name=True,
    )

    environment: Literal["development", "ci", "production"] = Field(
        default="development", alias="GFDIV_ENV"
    )
    log_level: str = Field(default="INFO", alias="GFDIV_LOG_LEVEL")
    threads: int = Field(default=1, ge=1, alias="GFDIV_THREADS")
    seed: int = Field(default=DEFAULT_SEED, ge=0, alias="GFDIV_SEED")

    membership_lo: float = Field(default=1e-4, gt=0.0, alias="GFDIV_MEMBERSHIP_LO")
    membership_hi: float = Field(default=1e4, gt=0.0, alias="GFDIV_MEMBERSHIP_HI")
    membership_points: int = Field(default=2000, ge=16, alias="GFDIV_MEMBERSHIP_POINTS")
    membership_random_pairs: int = Field(
        default=100_000, ge=0, alias="GFDIV_MEMBERSHIP_RANDOM_PAIRS"
    )
    tplus_points: int = Field(default=300, ge=8, alias="GFDIV_TPLUS_POINTS")
    scan_chunk_size: int = Field(default=65_536, ge=1024, alias="GFDIV_SCAN_CHUNK_SIZE")
    scan_tol: float = Field(default=1e-9, gt=0.0, alias="GFDIV_SCAN_TOL")

    default_rates: tuple[float, ...] = Field(
        default=_DEFAULT_RATES, alias="GFDIV_DEFAULT_RATES"
    )

    @field_validator("default_rates", mode="before")
    @classmethod
    def _split_rates(cls, value: object) -> tuple[float, ...]:
        return _normalize_rates(value)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return cached settings instance."""

    return Settings()
