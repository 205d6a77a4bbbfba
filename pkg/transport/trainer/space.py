"""Flat unconstrained parameter vector of a stack configuration."""
from __future__ import annotations

import re
from typing import Any, Dict, List, NamedTuple

import numpy as np
from pydantic import ValidationError

from ..errors import ConfigError
from ..types.config import StackConfig
from ..types.params import Param, iter_params

_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\[(\d+)\])?")


class ParamEntry(NamedTuple):
    path: str
    marker: Param
    # slice of the flat vector
    start: int
    stop: int
    is_list: bool


def _set_path(tree: Dict[str, Any], path: str, value: Any):
    parts = path.split(".")
    node: Any = tree
    for i, part in enumerate(parts):
        match = _TOKEN.fullmatch(part)
        if match is None:
            raise ConfigError(f"Malformed parameter path {path!r}")
        name, index = match.group(1), match.group(2)
        last = i == len(parts) - 1
        if index is None:
            if last:
                node[name] = value
            else:
                node = node[name]
        else:
            if last:
                node[name][int(index)] = value
            else:
                node = node[name][int(index)]


class ParamSpace:
    """Maps a ``StackConfig`` to the unconstrained vector the optimizer works on.

    Entries follow the depth-first order of ``iter_params``; list-valued fields
    occupy one slot per element.
    """

    def __init__(self, config: StackConfig):
        self.config = config
        self.entries: List[ParamEntry] = []
        offset = 0
        for path, marker, value in iter_params(config):
            is_list = isinstance(value, (list, tuple))
            width = len(value) if is_list else 1
            self.entries.append(ParamEntry(path, marker, offset, offset + width, is_list))
            offset += width
        self.size = offset

    @property
    def names(self) -> List[str]:
        out = []
        for e in self.entries:
            if e.is_list:
                out.extend(f"{e.path}[{i}]" for i in range(e.stop - e.start))
            else:
                out.append(e.path)
        return out

    @property
    def interval_mask(self) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        for e in self.entries:
            mask[e.start:e.stop] = e.marker.transform == "logit"
        return mask

    def pack(self, config: StackConfig | None = None) -> np.ndarray:
        """Unconstrained vector of ``config`` (defaults to the space's own config)."""
        config = config or self.config
        u = np.empty(self.size)
        for (path, marker, value), e in zip(iter_params(config), self.entries):
            if path != e.path:
                raise ConfigError(f"Configuration layout changed: {path!r} where {e.path!r} was expected")
            u[e.start:e.stop] = marker.unconstrain(np.atleast_1d(np.asarray(value, dtype=float)))
        return u

    def constrain(self, u: np.ndarray) -> np.ndarray:
        """Flat vector of constrained values, laid out like ``u``."""
        u = np.asarray(u, dtype=float)
        out = np.empty(self.size)
        for e in self.entries:
            out[e.start:e.stop] = e.marker.constrain(u[e.start:e.stop])
        return out

    def values(self, u: np.ndarray) -> Dict[str, float | List[float]]:
        """Constrained parameter values by path."""
        u = np.asarray(u, dtype=float)
        out: Dict[str, float | List[float]] = {}
        for e in self.entries:
            p = e.marker.constrain(u[e.start:e.stop])
            out[e.path] = [float(v) for v in p] if e.is_list else float(p[0])
        return out

    def unpack(self, u: np.ndarray) -> StackConfig:
        """Configuration at the unconstrained point ``u``; raises ConfigError if it is invalid."""
        if np.shape(u) != (self.size,):
            raise ConfigError(f"Parameter vector has shape {np.shape(u)}, expected ({self.size},)")
        if not np.all(np.isfinite(u)):
            raise ConfigError("Parameter vector is not finite")
        tree = self.config.model_dump()
        for path, value in self.values(u).items():
            _set_path(tree, path, value)
        try:
            return StackConfig.model_validate(tree)
        except ValidationError as err:
            raise ConfigError(f"Parameters leave the valid region: {err}") from err
