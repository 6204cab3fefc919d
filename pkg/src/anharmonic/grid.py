"""Uniform spatial grids with their FFT-dual frequency grids."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Grid x_i = -L + i*dx, i = 0..n-1, dx = 2L/n, on [-L, L).

    The dual frequency grid is the FFT grid xi_l = 2*pi*l/(n*dx) with
    l = -n/2..n/2-1, covering [-pi/dx, pi/dx).
    """

    half_width: float
    n: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ParameterError("grid half_width must be positive")
        if not _is_power_of_two(self.n):
            raise ParameterError(f"grid size must be a power of two, got {self.n}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.dx * np.arange(self.n)

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / (self.n * self.dx)

    @property
    def xi_fft(self) -> np.ndarray:
        """Frequency grid in FFT (wrap-around) order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @property
    def xi(self) -> np.ndarray:
        """Frequency grid in ascending order."""
        return np.fft.fftshift(self.xi_fft)

    @property
    def xi_max(self) -> float:
        return np.pi / self.dx

    def center_index(self) -> int:
        """Index of x = 0."""
        return self.n // 2

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.n == other.n
            and self.half_width == other.half_width
        )

    def __hash__(self):
        return hash((self.half_width, self.n))


def support_fraction_outside(values: np.ndarray, grid: Grid, fraction: float = 0.5) -> float:
    """Relative sup of |values| outside |x| <= fraction * L."""
    mask = np.abs(grid.x) > fraction * grid.half_width
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(values[mask])) / peak) if mask.any() else 0.0
