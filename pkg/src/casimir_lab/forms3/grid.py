"""Collocated periodic grid on the unit 3-torus [0, 1)^3.

Axis 0 is x, axis 1 is y, axis 2 is z; node (i, j, k) sits at
(i/n, j/n, k/n).  All derivatives are Fourier multipliers on the
trigonometric interpolant, so they are exact (to roundoff) for
band-limited data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class Grid:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 4 or self.n % 2 != 0:
            raise InvalidParameterError("grid size n must be an even integer >= 4")
        object.__setattr__(self, "n", int(self.n))

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @property
    def spacing(self) -> float:
        return 1.0 / self.n

    @cached_property
    def axis_coords(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    @cached_property
    def meshes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = self.axis_coords
        return tuple(np.meshgrid(x, x, x, indexing="ij"))

    @cached_property
    def k_full(self) -> np.ndarray:
        """Integer wavenumbers in fft order (0, 1, ..., n/2-1, -n/2, ..., -1)."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def k_half(self) -> np.ndarray:
        """Non-negative wavenumbers of the real transform (0 ... n/2)."""
        return np.arange(self.n // 2 + 1, dtype=float)

    @cached_property
    def deriv_multiplier(self) -> np.ndarray:
        """2*pi*i*k for the rfft of one axis, Nyquist mode zeroed."""
        mult = 2j * np.pi * self.k_half
        mult[-1] = 0.0  # the lone Nyquist cosine has no representable derivative
        return mult

    @cached_property
    def dealias_keep(self) -> int:
        """Largest |k| kept by the 2/3-rule filter."""
        return self.n // 3

    @cached_property
    def dealias_mask_r(self) -> np.ndarray:
        """Boolean keep-mask for rfftn layout (n, n, n/2+1)."""
        kx = np.abs(self.k_full)[:, None, None]
        ky = np.abs(self.k_full)[None, :, None]
        kz = self.k_half[None, None, :]
        kmax = np.maximum(np.maximum(kx, ky), kz)
        return kmax <= self.dealias_keep


def spectral_derivative(data: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    """d/dx_axis of the trigonometric interpolant; works on trailing-3D stacks."""
    ax = data.ndim - 3 + axis
    spec = np.fft.rfft(data, axis=ax)
    shape = [1] * data.ndim
    shape[ax] = grid.n // 2 + 1
    spec *= grid.deriv_multiplier.reshape(shape)
    return np.fft.irfft(spec, n=grid.n, axis=ax)


def dealias(data: np.ndarray, grid: Grid) -> np.ndarray:
    """Zero every mode with max |k| beyond the 2/3-rule cutoff."""
    spec = np.fft.rfftn(data, axes=(-3, -2, -1))
    spec *= grid.dealias_mask_r
    return np.fft.irfftn(spec, s=grid.shape, axes=(-3, -2, -1))


def band_limit(data: np.ndarray, grid: Grid, bandwidth: int) -> np.ndarray:
    """Project onto modes with max |k| <= bandwidth."""
    spec = np.fft.rfftn(data, axes=(-3, -2, -1))
    kx = np.abs(grid.k_full)[:, None, None]
    ky = np.abs(grid.k_full)[None, :, None]
    kz = grid.k_half[None, None, :]
    spec *= np.maximum(np.maximum(kx, ky), kz) <= bandwidth
    return np.fft.irfftn(spec, s=grid.shape, axes=(-3, -2, -1))


def spectral_tail_fraction(data: np.ndarray, grid: Grid, kmin: int | None = None) -> float:
    """Fraction of spectral energy at or beyond wavenumber kmin (default n/2 - 1).

    Used to warn about non-periodic or under-resolved inputs.
    """
    if kmin is None:
        kmin = grid.n // 2 - 1
    spec = np.fft.fftn(data, axes=(-3, -2, -1))
    k = np.abs(grid.k_full)
    kmax = np.maximum(np.maximum(k[:, None, None], k[None, :, None]), k[None, None, :])
    total = float(np.sum(np.abs(spec) ** 2))
    if total == 0.0:
        return 0.0
    tail = float(np.sum(np.abs(spec) ** 2 * (kmax >= kmin)))
    return tail / total
