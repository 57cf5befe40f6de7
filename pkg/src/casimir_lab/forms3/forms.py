"""Differential k-forms and vector fields as periodic component grids.

Component bases:
    Form0: {1}
    Form1: {dx, dy, dz}
    Form2: {dy^dz, dz^dx, dx^dy}
    Form3: {dx^dy^dz}
    VectorField: {d/dx, d/dy, d/dz}

The 2-form basis is ordered so that contracting the unit volume form mu
with a vector field V is the identity on components: i_V mu <-> V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError
from .grid import Grid


def _as_components(grid: Grid, data, n_comp: int) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    want = (n_comp,) + grid.shape if n_comp > 1 else grid.shape
    if arr.shape != want:
        raise InvalidParameterError(f"component data must have shape {want}, got {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class _GridObject:
    grid: Grid
    data: np.ndarray

    def __add__(self, other):
        self._check_mate(other)
        return type(self)(self.grid, self.data + other.data)

    def __sub__(self, other):
        self._check_mate(other)
        return type(self)(self.grid, self.data - other.data)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return type(self)(self.grid, self.data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(self.grid, -self.data)

    def _check_mate(self, other):
        if type(other) is not type(self) or other.grid != self.grid:
            raise InvalidParameterError(
                f"operands must be {type(self).__name__} on the same grid"
            )

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.data)))

    def l2(self) -> float:
        """L2 norm: sqrt of the grid mean of the squared component sum."""
        return float(np.sqrt(np.mean(self.data ** 2) * (self.data.size // self.grid.n ** 3)))

    def linf(self) -> float:
        return float(np.abs(self.data).max())


class Form0(_GridObject):
    rank = 0
    n_comp = 1

    def __init__(self, grid: Grid, data):
        super().__init__(grid, _as_components(grid, data, 1))


class Form1(_GridObject):
    rank = 1
    n_comp = 3

    def __init__(self, grid: Grid, data):
        super().__init__(grid, _as_components(grid, data, 3))


class Form2(_GridObject):
    rank = 2
    n_comp = 3

    def __init__(self, grid: Grid, data):
        super().__init__(grid, _as_components(grid, data, 3))


class Form3(_GridObject):
    rank = 3
    n_comp = 1

    def __init__(self, grid: Grid, data):
        super().__init__(grid, _as_components(grid, data, 1))


class VectorField(_GridObject):
    rank = None
    n_comp = 3

    def __init__(self, grid: Grid, data):
        super().__init__(grid, _as_components(grid, data, 3))


FORM_CLASSES = {0: Form0, 1: Form1, 2: Form2, 3: Form3}


def form_of_rank(rank: int, grid: Grid, data) -> _GridObject:
    try:
        cls = FORM_CLASSES[rank]
    except KeyError:
        raise InvalidParameterError(f"form rank must be 0..3, got {rank}") from None
    return cls(grid, data)


def zero_form(grid: Grid, rank: int):
    n_comp = FORM_CLASSES[rank].n_comp
    shape = (n_comp,) + grid.shape if n_comp > 1 else grid.shape
    return form_of_rank(rank, grid, np.zeros(shape))


def zero_field(grid: Grid) -> VectorField:
    return VectorField(grid, np.zeros((3,) + grid.shape))


def constant_field(grid: Grid, ux: float, uy: float, uz: float) -> VectorField:
    data = np.empty((3,) + grid.shape)
    data[0], data[1], data[2] = ux, uy, uz
    return VectorField(grid, data)


def volume_form(grid: Grid) -> Form3:
    """mu = dx^dy^dz; the torus has total volume 1."""
    return Form3(grid, np.ones(grid.shape))


def scalar_form(grid: Grid, fn) -> Form0:
    """Sample fn(x, y, z) (meshgrid arrays) at the nodes."""
    x, y, z = grid.meshes
    return Form0(grid, np.broadcast_to(np.asarray(fn(x, y, z), dtype=float), grid.shape).copy())


def coordinate_oneform(grid: Grid, axis: int) -> Form1:
    """The constant basis 1-form dx, dy or dz."""
    data = np.zeros((3,) + grid.shape)
    data[axis] = 1.0
    return Form1(grid, data)


def one_form(grid: Grid, fx, fy, fz) -> Form1:
    """Build a 1-form from three component callables of (x, y, z)."""
    x, y, z = grid.meshes
    data = np.stack([
        np.broadcast_to(np.asarray(f(x, y, z), dtype=float), grid.shape)
        for f in (fx, fy, fz)
    ])
    return Form1(grid, data.copy())


def vector_field(grid: Grid, ux, uy, uz) -> VectorField:
    x, y, z = grid.meshes
    data = np.stack([
        np.broadcast_to(np.asarray(u(x, y, z), dtype=float), grid.shape)
        for u in (ux, uy, uz)
    ])
    return VectorField(grid, data.copy())


def scale_by(f: Form0, obj):
    """Multiply any form or field pointwise by a scalar field."""
    return type(obj)(obj.grid, f.data * obj.data)
