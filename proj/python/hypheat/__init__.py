"""Heat kernels on hyperbolic spaces."""

from ._hypheat import (
    ConvergenceError,
    DomainError,
    hw_density,
    hyperbolic_distance_h2,
    kernel,
    representations,
    residual,
    run_criterion,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "hw_density",
    "hyperbolic_distance_h2",
    "kernel",
    "representations",
    "residual",
    "run_criterion",
]
