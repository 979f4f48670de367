from pydantic import BaseModel, Field
from typing import List
import os


class Settings(BaseModel):
    fuel: int = Field(10000, ge=0)
    samples: int = Field(1000, ge=1)
    seed: int = 0
    log_level: str = "WARNING"
    host: str = "0.0.0.0"
    port: int = 5000
    cors_origins: List[str] = ["*"]


def get_settings() -> Settings:
    """Read settings from IMPSEM_* environment variables"""
    origins = os.getenv("IMPSEM_CORS_ORIGINS", "*")
    return Settings(
        fuel=os.getenv("IMPSEM_FUEL", "10000"),
        samples=os.getenv("IMPSEM_SAMPLES", "1000"),
        seed=os.getenv("IMPSEM_SEED", "0"),
        log_level=os.getenv("IMPSEM_LOG_LEVEL", "WARNING").upper(),
        host=os.getenv("IMPSEM_HOST", "0.0.0.0"),
        port=os.getenv("IMPSEM_PORT", "5000"),
        cors_origins=[o.strip() for o in origins.split(",") if o.strip()],
    )
