"""Python bindings of the polysob numerical library."""

from ._polysob import (
    DimensionPair,
    DivergenceError,
    GreenKernel,
    InvalidDimension,
    QuadratureFailure,
    constants,
    convolve,
    geometric_grid,
    giraud_regime,
    green_l2_norm_sq,
    pohozaev_bubble,
    probe_iopt,
    quotient_slope,
    regime_constants,
    scalar_curvature,
    tensor_trace,
    verify_bubble_identity,
    verify_kernel_identity,
)

__all__ = [
    "DimensionPair",
    "DivergenceError",
    "GreenKernel",
    "InvalidDimension",
    "QuadratureFailure",
    "constants",
    "convolve",
    "geometric_grid",
    "giraud_regime",
    "green_l2_norm_sq",
    "pohozaev_bubble",
    "probe_iopt",
    "quotient_slope",
    "regime_constants",
    "scalar_curvature",
    "tensor_trace",
    "verify_bubble_identity",
    "verify_kernel_identity",
]
