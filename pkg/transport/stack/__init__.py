from .stack import (
    LAYER_BUILDERS,
    LayerStack,
    build_layer,
    composite_nll,
    stack_nll,
    stack_posterior_sample,
    stack_quantiles,
    validate_stack,
)

__all__ = [
    "LAYER_BUILDERS",
    "LayerStack",
    "build_layer",
    "composite_nll",
    "stack_nll",
    "stack_posterior_sample",
    "stack_quantiles",
    "validate_stack",
]
