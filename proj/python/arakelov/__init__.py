"""Theta norms, Green functions and explicit energy bounds on elliptic curves.

The compiled core exposes the main operations; see the project README for
the CLI and the underlying conventions.
"""

from ._core import (  # noqa: F401
    GreenFunction,
    PeriodMatrix,
    a_n,
    a_n_derivative,
    atlas_c2_side_condition,
    bound,
    build_atlas,
    c_g_rho,
    energy,
    estimate_an,
    estimate_hx,
    fay_residual,
    harmonic_bound,
    merkl_c0,
    radial_integral,
    reduce,
    theta,
    theta_norm,
    theta_norm_pic0,
    verify,
)

__all__ = [
    "GreenFunction",
    "PeriodMatrix",
    "a_n",
    "a_n_derivative",
    "atlas_c2_side_condition",
    "bound",
    "build_atlas",
    "c_g_rho",
    "energy",
    "estimate_an",
    "estimate_hx",
    "fay_residual",
    "harmonic_bound",
    "merkl_c0",
    "radial_integral",
    "reduce",
    "theta",
    "theta_norm",
    "theta_norm_pic0",
    "verify",
]

__version__ = "0.1.0"
