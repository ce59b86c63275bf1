from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

CONFIG_DIR = Path(__file__).parent


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class SolverLimits(BaseModel):
    """
    Hard caps for every exponential corner of the toolkit. Hitting one raises
    `CapacityExceededError` instead of degrading silently.
    """

    steiner_max_starters: int = Field(
        default=12,
        ge=1,
        le=20,
        description="Largest number of Steiner starters the subset DP accepts (3^j blow-up).",
    )
    exact_max_species: int = Field(
        default=20,
        ge=1,
        le=64,
        description="Largest species count the exhaustive solver accepts.",
    )
    max_candidates: int = Field(
        default=1_000_000,
        ge=1,
        description="Largest number of candidate sets a greedy iteration may enumerate.",
    )
    max_seeds: int = Field(
        default=100_000,
        ge=1,
        description="Largest number of viable seeds the enumeration solver may visit.",
    )
    max_seconds: Optional[float] = Field(
        default=None,
        gt=0,
        description="Optional wall-time limit per solve, in seconds. None disables it.",
    )
    maxcov_max_sets: int = Field(default=12, ge=1, description="Max Coverage oracle cap on sets.")
    vc_max_vertices: int = Field(default=10, ge=1, description="Max Vertex Cover oracle cap on vertices.")
    sat_max_variables: int = Field(default=12, ge=1, description="Truth-table oracle cap on variables.")

    @field_validator("max_seconds", mode="before")
    @classmethod
    def _noneify_seconds(cls, v):
        # Allow '', 'none', 'null' (case-insensitive) to disable the limit via env
        if isinstance(v, str) and v.strip().lower() in {"", "none", "null"}:
            return None
        return v


class Settings(BaseSettings):
    app_name: str = "viaphy"
    VERSION: str = "0.1.0"

    LOG_LEVEL: LogLevel = Field(default=LogLevel.WARNING, description="Level of the 'app' logger")
    LOG_JSON: bool = Field(default=False, description="Render log records as JSON lines")

    THREADS: int = Field(
        default=1, ge=1, le=64, description="Worker threads for candidate evaluation"
    )
    ORACLE_CACHE_SIZE: int = Field(
        default=0,
        ge=0,
        description="Entries kept by the objective memo; 0 turns the memo off",
    )

    LIMITS: SolverLimits = Field(default_factory=SolverLimits)

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def _upper_level(cls, v):
        if isinstance(v, str):
            return v.strip().upper()
        return v

    model_config = SettingsConfigDict(
        env_prefix="VIAPHY_",
        env_file=CONFIG_DIR.parent / ".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
