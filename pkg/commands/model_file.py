"""Trained-model files: the full stack configuration, its training data and a content hash."""
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from transport.errors import ConfigError, ParseError
from transport.types import FitReport
from transport.types.config import StackConfig
from utils import content_hash, json_parser, write_text_atomic


class ModelData(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: List[float]
    y: List[float]


class ModelFile(BaseModel):
    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    config: StackConfig
    data: ModelData
    fit_report: Optional[FitReport] = None
    hash: str

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.data.t, dtype=float)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.data.y, dtype=float)


def model_hash(config: StackConfig, data: ModelData) -> str:
    return content_hash({"config": config.model_dump(mode="json"), "data": data.model_dump(mode="json")})


def build_model_file(config: StackConfig, t, y, report: Optional[FitReport] = None) -> ModelFile:
    data = ModelData(t=[float(v) for v in t], y=[float(v) for v in y])
    return ModelFile(config=config, data=data, fit_report=report, hash=model_hash(config, data))


def write_model(path: str | Path, model: ModelFile):
    write_text_atomic(path, model.model_dump_json(indent=2) + "\n")


def read_model(path: str | Path) -> ModelFile:
    """Load and verify a model file; a hash mismatch is a ConfigError."""
    try:
        payload = json_parser(str(path))
    except FileNotFoundError as err:
        raise ParseError(str(err)) from err
    except ValueError as err:
        raise ParseError(f"{path}: {err}") from err
    try:
        model = ModelFile.model_validate(payload)
    except ValidationError as err:
        raise ConfigError(f"{path}: invalid model file: {err}") from err
    expected = model_hash(model.config, model.data)
    if model.hash != expected:
        raise ConfigError(f"{path}: content hash mismatch (file says {model.hash[:12]}, content gives {expected[:12]})")
    return model


def read_stack_config(source: str) -> StackConfig:
    """Stack configuration from inline JSON or a JSON file."""
    try:
        payload = json_parser(source)
    except FileNotFoundError as err:
        raise ParseError(str(err)) from err
    except ValueError as err:
        raise ParseError(f"{source}: {err}") from err
    return StackConfig.model_validate(payload)
