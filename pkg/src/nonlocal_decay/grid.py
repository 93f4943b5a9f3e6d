"""Uniform periodic grid and the unitary Fourier bookkeeping that goes with it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridError

MIN_POINTS = 256


@dataclass(frozen=True)
class Grid:
    """Periodic grid on [-X, X) with ``n_points`` nodes.

    Nodes are ``x_j = -X + j h`` with ``h = 2X/n``, so the origin sits at
    index ``n // 2``.  Wavenumbers follow numpy's FFT ordering,
    ``xi = 2 pi fftfreq(n, h)``, i.e. integer multiples of ``pi / X``.
    """

    n_points: int
    half_length: float

    def __post_init__(self):
        n = self.n_points
        if isinstance(n, bool) or int(n) != n:
            raise GridError(f"n_points must be an integer, got {n!r}")
        n = int(n)
        if n < MIN_POINTS or n & (n - 1):
            raise GridError(f"n_points must be a power of two >= {MIN_POINTS}, got {n}")
        if not (math.isfinite(self.half_length) and self.half_length > 0):
            raise GridError(f"half_length must be positive and finite, got {self.half_length!r}")
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "half_length", float(self.half_length))

    @property
    def h(self):
        return 2.0 * self.half_length / self.n_points

    @property
    def dxi(self):
        return math.pi / self.half_length

    @property
    def origin_index(self):
        return self.n_points // 2

    @cached_property
    def x(self):
        return -self.half_length + self.h * np.arange(self.n_points)

    @cached_property
    def xi(self):
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.h)

    @property
    def xi_nyquist(self):
        return math.pi / self.h

    def refined(self):
        """Same domain, half the spacing."""
        return Grid(2 * self.n_points, self.half_length)

    def extended(self):
        """Twice the domain, same spacing."""
        return Grid(2 * self.n_points, 2.0 * self.half_length)

    # -- transforms --------------------------------------------------------
    # Samples live in physical order (x ascending, origin at n//2).  The FFT
    # wants the origin at index 0, so every transform is wrapped in
    # ifftshift / fftshift.
    def to_spectral(self, values):
        return np.fft.fft(np.fft.ifftshift(values))

    def to_physical(self, coeffs):
        return np.fft.fftshift(np.fft.ifft(coeffs))

    def reflection_indices(self):
        """Index map j -> j' with x_{j'} = -x_j on the periodic grid."""
        n = self.n_points
        return (n - np.arange(n)) % n
