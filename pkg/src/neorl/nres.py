"""Square grid receptive fields over a rectangular arena.

Each :class:`NresGrid` partitions the arena into ``N x N`` mutually exclusive
cells. Cells are addressed row-major, ``index = row * N + col``, with rows
counted along +y and columns along +x.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

Bounds = tuple[float, float, float, float]  # (x_min, y_min, x_max, y_max)

UNIT_SQUARE: Bounds = (0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class NresGrid:
    resolution: int
    bounds: Bounds = UNIT_SQUARE

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 1:
            raise ConfigurationError(f"resolution must be an integer >= 1, got {self.resolution!r}")
        x0, y0, x1, y1 = self.bounds
        if not (np.isfinite([x0, y0, x1, y1]).all() and x1 > x0 and y1 > y0):
            raise ConfigurationError(f"bounds must be non-degenerate (x0<x1, y0<y1), got {self.bounds!r}")

    @property
    def n_cells(self) -> int:
        return self.resolution * self.resolution

    @property
    def cell_size(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.bounds
        return (x1 - x0) / self.resolution, (y1 - y0) / self.resolution

    def cell_of(self, x: float, y: float) -> int:
        """Cell index containing ``(x, y)``; out-of-bounds points are clamped first.

        Cells are half-open ``[lo, hi)`` on each axis, except that the upper
        arena edge belongs to the last cell.
        """
        n = self.resolution
        x0, y0, x1, y1 = self.bounds
        col = int((x - x0) / (x1 - x0) * n)
        row = int((y - y0) / (y1 - y0) * n)
        col = 0 if col < 0 else (n - 1 if col >= n else col)
        row = 0 if row < 0 else (n - 1 if row >= n else row)
        return row * n + col

    def cells_of(self, xy: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`cell_of` for an ``(k, 2)`` array of points."""
        xy = np.asarray(xy, dtype=float).reshape(-1, 2)
        n = self.resolution
        x0, y0, x1, y1 = self.bounds
        col = np.floor((xy[:, 0] - x0) / (x1 - x0) * n).astype(np.int64)
        row = np.floor((xy[:, 1] - y0) / (y1 - y0) * n).astype(np.int64)
        np.clip(col, 0, n - 1, out=col)
        np.clip(row, 0, n - 1, out=row)
        return row * n + col

    def cell_center(self, cell: int) -> tuple[float, float]:
        if not 0 <= cell < self.n_cells:
            raise IndexError(f"cell {cell} out of range for a {self.resolution}x{self.resolution} grid")
        row, col = divmod(int(cell), self.resolution)
        wx, wy = self.cell_size
        x0, y0, _, _ = self.bounds
        return x0 + (col + 0.5) * wx, y0 + (row + 0.5) * wy

    def row_col(self, cell: int) -> tuple[int, int]:
        return divmod(int(cell), self.resolution)


def make_grid(resolution: int, bounds: Bounds = UNIT_SQUARE) -> NresGrid:
    return NresGrid(resolution, tuple(float(b) for b in bounds))


def cell_of(grid: NresGrid, coord) -> int:
    return grid.cell_of(coord[0], coord[1])


def cell_center(grid: NresGrid, cell: int) -> tuple[float, float]:
    return grid.cell_center(cell)


def compatible(a: NresGrid, b: NresGrid) -> bool:
    """Grids are compatible when they cover the same Euclidean space."""
    return tuple(a.bounds) == tuple(b.bounds)
