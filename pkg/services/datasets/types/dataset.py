from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

DatasetName = Literal["sunspots", "heart", "tb3ms"]


class DatasetSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: DatasetName
    url: str
    description: str
    rows: int
    # bundled fallback, relative to the datasets package
    bundled: Optional[str] = None


class DatasetInfo(BaseModel):
    name: DatasetName
    path: Path
    source: str
    rows: int
    sha256: str
    # "cache", "download" or "bundled"
    origin: str
