"""Axisymmetric swirl-free Euler flow in R^d."""

from ._core import (
    CylGrid,
    decay_check,
    field_quasinorm,
    g_kernel,
    gaussian_velocity,
    gaussian_vorticity,
    h_closed,
    h_quad,
    lorentz_quasinorm,
    reconstruct,
    simulate,
    verify,
    weak_norm_of_g,
)

__all__ = [
    "CylGrid",
    "decay_check",
    "field_quasinorm",
    "g_kernel",
    "gaussian_velocity",
    "gaussian_vorticity",
    "h_closed",
    "h_quad",
    "lorentz_quasinorm",
    "reconstruct",
    "simulate",
    "verify",
    "weak_norm_of_g",
]
