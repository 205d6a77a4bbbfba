from pathlib import Path
from typing import Tuple

from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv
load_dotenv()

DEFAULT_CACHE_DIR = Path.home() / ".cache" / "tp"


class Settings(BaseSettings):
    # Paths
    TP_CACHE_DIR: Path = DEFAULT_CACHE_DIR

    # Runtime
    LOG_LEVEL: str = "INFO"
    MAX_WORKERS: int = 4
    DOWNLOAD_TIMEOUT: float = 30.0

    # Numerics
    JITTER_LADDER: Tuple[float, ...] = (0.0, 1e-10, 1e-8, 1e-6)
    QUADRATURE_NODES: int = 256
    ALPHA_GRID_SIZE: int = 512
    SAMPLE_CHUNK: int = 256

    model_config = SettingsConfigDict(env_prefix="", case_sensitive=False)


# Create a settings instance
settings = Settings()
