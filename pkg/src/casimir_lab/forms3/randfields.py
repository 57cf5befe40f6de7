"""Seeded band-limited random fields for property suites and tests."""

from __future__ import annotations

import numpy as np

from .forms import Form0, Form1, VectorField
from .calculus import leray_project
from .grid import Grid


def random_scalar_array(grid: Grid, bandwidth: int, rng: np.random.Generator,
                        rms: float = 1.0, zero_mean: bool = True) -> np.ndarray:
    """Real scalar grid supported on modes with max |k| <= bandwidth."""
    n = grid.n
    spec = np.zeros((n, n, n), dtype=complex)
    k = grid.k_full
    mask = (np.abs(k)[:, None, None] <= bandwidth) \
        & (np.abs(k)[None, :, None] <= bandwidth) \
        & (np.abs(k)[None, None, :] <= bandwidth)
    m = int(mask.sum())
    spec[mask] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    if zero_mean:
        spec[0, 0, 0] = 0.0
    f = np.fft.ifftn(spec).real * n ** 1.5
    norm = float(np.sqrt(np.mean(f ** 2)))
    if norm > 0:
        f *= rms / norm
    return f


def random_form0(grid: Grid, bandwidth: int, rng, rms: float = 1.0,
                 zero_mean: bool = True) -> Form0:
    return Form0(grid, random_scalar_array(grid, bandwidth, rng, rms, zero_mean))


def random_form1(grid: Grid, bandwidth: int, rng, rms: float = 1.0) -> Form1:
    return Form1(grid, np.stack([
        random_scalar_array(grid, bandwidth, rng, rms) for _ in range(3)
    ]))


def random_form(grid: Grid, rank: int, bandwidth: int, rng, rms: float = 1.0):
    from .forms import form_of_rank
    n_comp = 1 if rank in (0, 3) else 3
    if n_comp == 1:
        return form_of_rank(rank, grid, random_scalar_array(grid, bandwidth, rng, rms))
    return form_of_rank(rank, grid, np.stack([
        random_scalar_array(grid, bandwidth, rng, rms) for _ in range(3)
    ]))


def random_vector_field(grid: Grid, bandwidth: int, rng, rms: float = 1.0) -> VectorField:
    return VectorField(grid, np.stack([
        random_scalar_array(grid, bandwidth, rng, rms) for _ in range(3)
    ]))


def random_divfree_field(grid: Grid, bandwidth: int, rng, rms: float = 1.0) -> VectorField:
    v = leray_project(random_vector_field(grid, bandwidth, rng, rms))
    norm = float(np.sqrt(np.mean(np.sum(v.data ** 2, axis=0))))
    if norm > 0:
        v = VectorField(grid, v.data * (rms / norm))
    return v
