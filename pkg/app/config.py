from functools import lru_cache
import os
from typing import Literal
from dotenv import load_dotenv
from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings

# Determine current environment (default: development)
_ENV = os.getenv("ENV", "development").lower()
# Load the corresponding .env file (e.g., .env.development, .env.testing, .env.production)
load_dotenv(f".env.{_ENV}", override=True)

class Settings(BaseSettings):
    """Toolchain settings loaded from environment variables.

    The active environment is selected via the ENV variable (development|testing|production).
    Values are loaded from the matching .env.<environment> file if present.
    """
    ENV: str = Field(default=_ENV)

    APP_NAME: str = Field(default="brep-tokenizer")
    APP_VERSION: str = Field(default="1.0.0")
    APP_DESCRIPTION: str = Field(default="B-Rep tokenization, decoding and evaluation toolchain")

    HOST: str = Field(default="127.0.0.1")
    PORT: int = Field(default=8000)
    RELOAD: bool = Field(default=False)  # Typically True only in development .env

    LOG_LEVEL: str = Field(default="INFO")
    LOG_FORMAT: Literal["console", "json", "rich"] = Field(default="console")

    # Tokenization
    WINDOW_STRIDE: Literal["1", "2", "global"] = Field(default="1")
    FACE_ORDERING: Literal["bft", "coord"] = Field(default="bft")
    MAX_FACES: int = Field(default=100, ge=1)
    MAX_EDGES: int = Field(default=1000, ge=0)
    MAX_SEQUENCE_TOKENS: int = Field(default=3000, ge=1)

    # Validity and evaluation
    GAP_TOLERANCE: float = Field(default=2.0 / 1024, gt=0)
    BOLT_AXIS_TOLERANCE_DEG: float = Field(default=5.0, gt=0)
    METRIC_SAMPLE_POINTS: int = Field(default=2000, ge=1)
    JSD_RESOLUTION: int = Field(default=32, ge=2)

    WORKER_THREADS: int = Field(
        default=4,
        ge=1,
        validation_alias=AliasChoices("BREP_THREADS", "WORKER_THREADS"),
    )

    @property
    def is_development(self) -> bool:
        return self.ENV == "development"

    @property
    def is_testing(self) -> bool:
        return self.ENV == "testing"

    @property
    def is_production(self) -> bool:
        return self.ENV == "production"

@lru_cache()
def get_settings() -> Settings:
    """Get the cached toolchain settings instance."""
    return Settings()
