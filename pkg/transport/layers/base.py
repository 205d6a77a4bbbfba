"""Common protocol of transport layers.

A layer is a family of maps indexed by input locations ``t``. ``forward`` pushes
reference-side values to data-side values, ``inverse`` pulls them back, and
``logdet_inv`` is log|det grad inverse| at the data-side value. Values may carry
leading batch dimensions; the last axis is aligned with ``t``.
"""
from abc import ABC, abstractmethod
from typing import ClassVar, Tuple

import numpy as np
from pydantic import BaseModel

from ..types.params import count_params


class TransportLayer(ABC):
    # one of "copula", "covariance", "marginal"
    role: ClassVar[str]
    kind: str

    config: BaseModel

    @abstractmethod
    def forward(self, t: np.ndarray, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def inverse(self, t: np.ndarray, y: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def logdet_inv(self, t: np.ndarray, y: np.ndarray) -> float: ...

    def inverse_and_logdet(self, t: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, float]:
        return self.inverse(t, y), self.logdet_inv(t, y)

    def parameter_count(self) -> int:
        return count_params(self.config)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.config!r})"
