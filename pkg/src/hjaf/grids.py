"""Uniform grids and gridded scalar fields with boundary-aware indexing.

Everything downstream (smoothness indicators, monotone and high-order
schemes) reads neighbor values through the shift/ghost machinery defined
here, so boundary handling lives in exactly one place.  Ghost values are
produced by index mapping -- periodic wrap or clamp-to-edge -- rather than
by materialized ghost layers, which keeps field invariants trivial and
avoids a copy per Runge-Kutta stage.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum
from typing import TextIO, Union

import numpy as np

# Maximum supported ghost reach per side.  The widest consumer is the
# fourth-order Runge-Kutta scheme: four composed applications of a
# radius-2 stencil.  Narrower stencils simply use less.
GHOST_REACH = 8


class BoundaryCondition(Enum):
    """How out-of-range node indices are mapped back into the grid."""

    PERIODIC = "periodic"
    NEUMANN_ZERO = "neumann-zero"


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid: node j sits at ``x0 + j*dx`` for j in [0, n)."""

    x0: float
    dx: float
    n: int

    def __post_init__(self) -> None:
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if self.n < 3:
            raise ValueError(f"need at least 3 nodes, got {self.n}")

    @property
    def shape(self) -> tuple[int]:
        return (self.n,)

    @property
    def delta(self) -> float:
        return self.dx

    def nodes(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)


@dataclass(frozen=True)
class Grid2D:
    """Uniform 2D grid: node (j, i) sits at ``(x0 + j*dx, y0 + i*dy)``.

    Field arrays are stored row-major as ``values[i, j]`` with i the
    y index and j the x index.
    """

    x0: float
    y0: float
    dx: float
    dy: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError(f"spacings must be positive, got {self.dx}, {self.dy}")
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"need at least 3 nodes per axis, got {self.nx}x{self.ny}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def delta(self) -> float:
        return max(self.dx, self.dy)

    def xnodes(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    def ynodes(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.ny)

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) arrays of node coordinates, shaped like field values.
        Memoized per grid; treat the returned arrays as read-only."""
        return _cached_meshes(self)


Grid = Union[Grid1D, Grid2D]


@functools.lru_cache(maxsize=32)
def _cached_meshes(grid: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    X, Y = np.meshgrid(grid.xnodes(), grid.ynodes())
    X.setflags(write=False)
    Y.setflags(write=False)
    return X, Y


def _mapped_indices(idx: np.ndarray, n: int, bc: BoundaryCondition) -> np.ndarray:
    if bc is BoundaryCondition.PERIODIC:
        return idx % n
    return np.clip(idx, 0, n - 1)


class GridField:
    """Scalar values on a grid plus the boundary rule used to read past it."""

    __slots__ = ("grid", "values", "bc")

    def __init__(self, grid: Grid, values, bc: BoundaryCondition,
                 validate: bool = True):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid shape {grid.shape}")
        if validate and not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        self.grid = grid
        self.values = values
        self.bc = bc

    @property
    def ndim(self) -> int:
        return self.values.ndim

    def like(self, values: np.ndarray) -> "GridField":
        """New field on the same grid/BC.  Skips the finite check; time
        steppers validate once per step instead of once per stage."""
        return GridField(self.grid, values, self.bc, validate=False)

    def shifted(self, dj: int = 0, di: int = 0) -> np.ndarray:
        """Whole-grid array of ``u[i + di, j + dj]`` with the boundary rule
        applied, i.e. the vectorized form of :func:`ghost_value`."""
        if abs(dj) > GHOST_REACH or abs(di) > GHOST_REACH:
            raise IndexError(f"shift ({dj}, {di}) exceeds ghost reach {GHOST_REACH}")
        mode = "wrap" if self.bc is BoundaryCondition.PERIODIC else "clip"
        out = self.values
        if self.ndim == 1:
            if di != 0:
                raise ValueError("di shift on a 1D field")
            if dj != 0:
                out = np.take(out, np.arange(self.grid.n) + dj, mode=mode)
            return out
        if di != 0:
            out = np.take(out, np.arange(self.grid.ny) + di, axis=0, mode=mode)
        if dj != 0:
            out = np.take(out, np.arange(self.grid.nx) + dj, axis=1, mode=mode)
        return out


def ghost_value(field: GridField, j: int, i: int | None = None) -> float:
    """Value at signed index (j, i), applying the field's boundary rule.

    Indices may run past the grid by at most ``GHOST_REACH`` per side.
    """
    if field.ndim == 1:
        if i is not None:
            raise ValueError("1D field takes a single index")
        n = field.grid.n
        if j < -GHOST_REACH or j >= n + GHOST_REACH:
            raise IndexError(f"index {j} beyond ghost reach of grid with {n} nodes")
        return float(field.values[_mapped_indices(np.int64(j), n, field.bc)])
    if i is None:
        raise ValueError("2D field needs both indices")
    nx, ny = field.grid.nx, field.grid.ny
    if j < -GHOST_REACH or j >= nx + GHOST_REACH:
        raise IndexError(f"x index {j} beyond ghost reach of grid with {nx} nodes")
    if i < -GHOST_REACH or i >= ny + GHOST_REACH:
        raise IndexError(f"y index {i} beyond ghost reach of grid with {ny} nodes")
    jj = _mapped_indices(np.int64(j), nx, field.bc)
    ii = _mapped_indices(np.int64(i), ny, field.bc)
    return float(field.values[ii, jj])


def undiv_diff_1d(samples, k: int) -> float:
    """Order-k undivided difference of k+1 samples at consecutive nodes.

    Equals the k-th forward finite difference, i.e. the classical divided
    difference rescaled by ``k! * dx**k``.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("empty sample sequence")
    if k < 0:
        raise ValueError(f"order must be nonnegative, got {k}")
    if samples.size != k + 1:
        raise ValueError(f"order {k} needs {k + 1} samples, got {samples.size}")
    coeffs = np.array([math.comb(k, m) * (-1) ** (k - m) for m in range(k + 1)],
                      dtype=np.float64)
    return float(coeffs @ samples)


def undiv_diff_2d(block, t: int, s: int) -> float:
    """Mixed undivided difference of order t along axis 0 and s along axis 1.

    The two directional applications commute.
    """
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (t + 1, s + 1):
        raise ValueError(f"expected block of shape {(t + 1, s + 1)}, got {block.shape}")
    rows = np.array([undiv_diff_1d(block[:, c], t) for c in range(s + 1)])
    return undiv_diff_1d(rows, s)


def write_field_csv(field: GridField, out: TextIO) -> None:
    """Plain-text dump, one row per node, row-major, 17 significant digits."""
    if field.ndim == 1:
        out.write("x,value\n")
        for x, v in zip(field.grid.nodes(), field.values):
            out.write(f"{x:.17g},{v:.17g}\n")
        return
    out.write("x,y,value\n")
    xs = field.grid.xnodes()
    ys = field.grid.ynodes()
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            out.write(f"{x:.17g},{y:.17g},{field.values[i, j]:.17g}\n")
