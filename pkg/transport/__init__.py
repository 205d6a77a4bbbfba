"""Deep transport processes: layered measurable maps over Gaussian white noise."""
from .errors import (
    TransportError,
    ParseError,
    ConfigError,
    NumericalError,
    DomainError,
    FitError,
    DownloadError,
)
from .types.config import StackConfig, TrainConfig
from .stack import LayerStack, stack_nll, stack_posterior_sample, stack_quantiles, validate_stack
from .trainer import FitResult, fit

__all__ = [
    "TransportError",
    "ParseError",
    "ConfigError",
    "NumericalError",
    "DomainError",
    "FitError",
    "DownloadError",
    "StackConfig",
    "TrainConfig",
    "LayerStack",
    "stack_nll",
    "stack_posterior_sample",
    "stack_quantiles",
    "validate_stack",
    "FitResult",
    "fit",
]
