"""Serialization: the F3RM flat binary container, CSV grids, loop-curve CSV.

F3RM layout (little-endian):
    bytes 0..3   magic "F3RM"
    uint32       version (1)
    uint32       n (points per axis)
    uint32       rank code: 0..3 for forms, 4 for a vector field
    uint32       component count
    float64[]    components, row-major, concatenated
"""

from __future__ import annotations

import csv

import numpy as np

from ..errors import FormatError
from .forms import FORM_CLASSES, VectorField, form_of_rank
from .grid import Grid

MAGIC = b"F3RM"
VERSION = 1
FIELD_RANK_CODE = 4


def save(path, obj) -> None:
    if isinstance(obj, VectorField):
        rank_code, n_comp = FIELD_RANK_CODE, 3
    else:
        rank_code, n_comp = obj.rank, obj.n_comp
    data = obj.data if obj.data.ndim == 4 else obj.data[None, ...]
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.array([VERSION, obj.grid.n, rank_code, n_comp],
                          dtype="<u4").tobytes())
        fh.write(np.ascontiguousarray(data, dtype="<f8").tobytes())


def load(path):
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        header = np.frombuffer(fh.read(16), dtype="<u4")
        if header.size != 4:
            raise FormatError("truncated header")
        version, n, rank_code, n_comp = (int(v) for v in header)
        if version != VERSION:
            raise FormatError(f"unsupported container version {version}")
        body = np.frombuffer(fh.read(), dtype="<f8")
    if body.size != n_comp * n ** 3:
        raise FormatError(f"body has {body.size} values, expected {n_comp * n ** 3}")
    grid = Grid(n)
    data = body.reshape((n_comp, n, n, n)).astype(float)
    if rank_code == FIELD_RANK_CODE:
        if n_comp != 3:
            raise FormatError("vector field container must have 3 components")
        return VectorField(grid, data)
    if rank_code not in FORM_CLASSES:
        raise FormatError(f"unknown rank code {rank_code}")
    if n_comp != FORM_CLASSES[rank_code].n_comp:
        raise FormatError(f"rank {rank_code} container must have "
                          f"{FORM_CLASSES[rank_code].n_comp} components")
    return form_of_rank(rank_code, grid, data if n_comp > 1 else data[0])


def to_csv(path, obj) -> None:
    """Plain-text dump for small grids: columns i, j, k, c0[, c1, c2]."""
    data = obj.data if obj.data.ndim == 4 else obj.data[None, ...]
    n_comp = data.shape[0]
    n = obj.grid.n
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "k"] + [f"c{c}" for c in range(n_comp)])
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    writer.writerow([i, j, k] + [repr(float(data[c, i, j, k]))
                                                 for c in range(n_comp)])


def read_loop_csv(path) -> np.ndarray:
    """Read a parametric loop (columns t, x, y, z) sampled uniformly in t.

    The final row must repeat the starting position (mod 1) and the t column
    must be uniform; returns the (m+1, 3) position samples including the
    closing row.
    """
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                rows.append([float(v) for v in row[:4]])
            except ValueError:
                if rows:
                    raise FormatError(f"non-numeric row in loop file: {row!r}") from None
                continue  # header line
    if len(rows) < 10:
        raise FormatError("loop file needs at least 10 sample rows")
    arr = np.asarray(rows, dtype=float)
    if arr.shape[1] != 4:
        raise FormatError("loop file must have columns t, x, y, z")
    t = arr[:, 0]
    dt = np.diff(t)
    if dt.size and (dt.min() <= 0 or np.abs(dt - dt.mean()).max() > 1e-9 * max(1.0, t[-1])):
        raise FormatError("loop parameter column must be uniform and increasing")
    return arr[:, 1:]
