from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Dict

from dotenv import load_dotenv
from pydantic.v1 import BaseModel, BaseSettings, Field, root_validator, validator

ROOT_DIR = Path(__file__).resolve().parents[1]
ENV_PATH = ROOT_DIR / ".env"

if ENV_PATH.exists():
    load_dotenv(ENV_PATH)

load_dotenv()  # fallback to default search in case nothing matched above


def _bool_env(name: str, default: bool = False) -> bool:
    val = os.getenv(name)
    if val is None:
        return default
    lowered = val.strip().lower()
    if lowered in {"1", "true", "yes", "on", "enable", "enabled"}:
        return True
    if lowered in {"0", "false", "no", "off", "disable", "disabled"}:
        return False
    return default


def _int_env(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, default))
    except ValueError:
        return default


class ResourceCaps(BaseModel):
    """Largest n at which each metric runs without ``--cap-override``."""

    ai_max_n: int = Field(14, ge=2, le=20)
    faa_max_n: int = Field(12, ge=2, le=20)
    nonlinearity_max_n: int = Field(20, ge=2, le=20)
    max_monomials: int = Field(20000, ge=1)

    class Config:
        frozen = True


class VerificationPolicy(BaseModel):
    counterexample_limit: int = Field(100, ge=1)
    float_precision: int = Field(6, ge=1, le=17)
    lambda_seed: int = Field(0, ge=0)

    class Config:
        frozen = True


class FeatureFlags(BaseModel):
    record_runs: bool = False

    class Config:
        frozen = True


class Settings(BaseSettings):
    log_level: str = Field(default="INFO", env="POLAR_LOG_LEVEL")
    data_dir: Path = Field(default_factory=lambda: ROOT_DIR / "storage" / "data", env="POLAR_DATA_DIR")
    background_workers: int = Field(default=4, env="BACKGROUND_WORKERS")
    caps: ResourceCaps = Field(default_factory=ResourceCaps)
    verification: VerificationPolicy = Field(default_factory=VerificationPolicy)
    feature_flags: FeatureFlags = Field(default_factory=FeatureFlags)

    class Config:
        env_file = str(ENV_PATH) if ENV_PATH.exists() else None
        env_file_encoding = "utf-8"
        case_sensitive = False

    @root_validator(pre=True)
    def _derive_nested_models(cls, values: Dict[str, object]) -> Dict[str, object]:
        if "caps" not in values:
            values["caps"] = ResourceCaps(
                ai_max_n=_int_env("AI_MAX_N", 14),
                faa_max_n=_int_env("FAA_MAX_N", 12),
                nonlinearity_max_n=_int_env("NONLINEARITY_MAX_N", 20),
                max_monomials=_int_env("MAX_MONOMIALS", 20000),
            )
        if "verification" not in values:
            values["verification"] = VerificationPolicy(
                counterexample_limit=_int_env("COUNTEREXAMPLE_LIMIT", 100),
                float_precision=_int_env("FLOAT_PRECISION", 6),
                lambda_seed=_int_env("LAMBDA_SEED", 0),
            )
        if "feature_flags" not in values:
            values["feature_flags"] = FeatureFlags(record_runs=_bool_env("RECORD_RUNS", False))
        return values

    @validator("log_level", pre=True, always=True)
    def _normalise_level(cls, value: object) -> str:
        return str(value or "INFO").strip().upper()

    @validator("background_workers", pre=True, always=True)
    def _positive_workers(cls, value: object) -> int:
        try:
            workers = int(value)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            return 4
        return max(1, workers)

    def ensure_data_dir(self) -> Path:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        return self.data_dir


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


__all__ = [
    "Settings",
    "ResourceCaps",
    "VerificationPolicy",
    "FeatureFlags",
    "get_settings",
]
