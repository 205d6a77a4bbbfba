"""Trainable-parameter markers carried in ``Annotated`` field metadata.

A field annotated with one of the aliases below is a model parameter. Plain
fields (counts, families, fixed settings) are configuration and are never
touched by the optimizer.
"""
from dataclasses import dataclass
from typing import Annotated, Iterator, List, Literal, Tuple, get_args

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import expit, logit

TransformKind = Literal["identity", "softplus", "logit"]

# keeps interval parameters strictly inside (lo, hi)
LOGIT_EPS = 1e-12
SOFTPLUS_FLOOR = -700.0


@dataclass(frozen=True)
class Param:
    transform: TransformKind = "identity"
    lo: float = 0.0
    hi: float = 1.0

    def constrain(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.transform == "softplus":
            return np.logaddexp(0.0, np.maximum(u, SOFTPLUS_FLOOR))
        if self.transform == "logit":
            p = np.clip(expit(u), 0.0, 1.0 - LOGIT_EPS)
            return self.lo + (self.hi - self.lo) * p
        return u

    def unconstrain(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.transform == "softplus":
            return p + np.log(-np.expm1(-p))
        if self.transform == "logit":
            frac = np.clip((p - self.lo) / (self.hi - self.lo), LOGIT_EPS, 1.0 - LOGIT_EPS)
            return logit(frac)
        return p


Real = Annotated[float, Param("identity")]
Positive = Annotated[float, Field(gt=0), Param("softplus")]
RealList = Annotated[List[float], Param("identity")]


def Interval(lo: float, hi: float):
    """Parameter in ``[lo, hi)``; the optimizer sees it through a scaled logit."""
    return Annotated[float, Field(ge=lo, lt=hi), Param("logit", lo, hi)]


def _marker(field_info) -> Param | None:
    for item in field_info.metadata:
        if isinstance(item, Param):
            return item
    # Optional[Positive] keeps the marker on the inner Annotated
    for arg in get_args(field_info.annotation):
        for item in getattr(arg, "__metadata__", ()):
            if isinstance(item, Param):
                return item
    return None


def iter_params(model: BaseModel, prefix: str = "") -> Iterator[Tuple[str, Param, object]]:
    """Walk a configuration tree depth-first, yielding ``(path, marker, value)``
    for every trainable field. Field order is declaration order, list order is kept."""
    for name, field_info in type(model).model_fields.items():
        value = getattr(model, name)
        path = f"{prefix}{name}"
        marker = _marker(field_info)
        if marker is not None:
            if value is not None:
                yield path, marker, value
            continue
        if isinstance(value, BaseModel):
            yield from iter_params(value, f"{path}.")
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                if isinstance(item, BaseModel):
                    yield from iter_params(item, f"{path}[{i}].")


def count_params(model: BaseModel) -> int:
    total = 0
    for _, _, value in iter_params(model):
        total += len(value) if isinstance(value, (list, tuple)) else 1
    return total
