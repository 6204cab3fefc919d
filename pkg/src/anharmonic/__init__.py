"""Numerics for generalized anharmonic oscillators.

Closed-form Hamilton flows for symbols (x^(2K) + xi^(2M))^p, eigenfunction
expansion propagators, anisotropic STFT wave-front diagnostics and annular
filter-of-singularities checks, all cross-validated against independent
brute-force oracles.
"""

from .grid import Grid
from .special import GExponents, g_inverse, g_km, gamma_fn, h_fn, incomplete_beta, tau

__all__ = [
    "Grid",
    "GExponents",
    "gamma_fn",
    "incomplete_beta",
    "g_km",
    "tau",
    "g_inverse",
    "h_fn",
]
