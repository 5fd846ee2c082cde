"""Quadrature, Fourier inversion, finite differences and identity checks."""

from .quadrature import QuadratureResult, arc_integral, gauss_legendre_panels, integrate
from .fourier import InversionConfig, forward_transform, invert_charfn, invert_charfn_cdf

__all__ = [
    "QuadratureResult",
    "arc_integral",
    "gauss_legendre_panels",
    "integrate",
    "InversionConfig",
    "forward_transform",
    "invert_charfn",
    "invert_charfn_cdf",
]
