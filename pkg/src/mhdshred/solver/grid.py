"""Structured masked grid for the stepped channel.

Cells are indexed ``[i, j]`` with ``i`` along the channel (x) and ``j``
vertical (y). Obstacles are rectangles of solid cells flush with the top
or bottom wall. Every cell face carries a type tag so stencil and flux
routines never need to re-derive boundary logic:

* x-faces have shape ``(nx+1, ny)``; face ``(i, j)`` separates cells
  ``(i-1, j)`` and ``(i, j)``.
* y-faces have shape ``(nx, ny+1)``; face ``(i, j)`` separates cells
  ``(i, j-1)`` and ``(i, j)``.

Wall faces additionally carry a thermal kind: 0 adiabatic, 1 fixed at
the upper-step temperature, 2 fixed at the lower-step temperature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import Geometry

# face type codes
INTERIOR = 0
INLET = 1
OUTLET = 2
WALL = 3
DEAD = 4

# solid kinds / wall thermal kinds
FLUID = 0
TOP_STEP = 1
BOTTOM_STEP = 2


class GeometryError(ValueError):
    """Grid cannot resolve the requested geometry."""


@dataclass(frozen=True)
class Grid:
    geometry: Geometry
    nx: int
    ny: int
    dx: float
    dy: float
    fluid_mask: np.ndarray       # (nx, ny) bool
    solid_kind: np.ndarray       # (nx, ny) int8
    xface_type: np.ndarray       # (nx+1, ny) int8
    yface_type: np.ndarray       # (nx, ny+1) int8
    xface_thermal: np.ndarray    # (nx+1, ny) int8
    yface_thermal: np.ndarray    # (nx, ny+1) int8
    closed: bool = False

    @property
    def n_fluid(self) -> int:
        return int(self.fluid_mask.sum())

    @property
    def xc(self) -> np.ndarray:
        return (np.arange(self.nx) + 0.5) * self.dx

    @property
    def yc(self) -> np.ndarray:
        return (np.arange(self.ny) + 0.5) * self.dy

    @property
    def flat_index(self) -> np.ndarray:
        """(nx, ny) map from cell to fluid-vector position, -1 for solid."""
        idx = np.full((self.nx, self.ny), -1, dtype=np.int64)
        idx[self.fluid_mask] = np.arange(self.n_fluid)
        return idx

    def pack(self, field) -> np.ndarray:
        """Gather a (nx, ny) cell field into a (n_fluid,) vector."""
        return np.asarray(field)[self.fluid_mask]

    def unpack(self, vec, fill=0.0) -> np.ndarray:
        """Scatter a (n_fluid,) vector back onto the (nx, ny) grid."""
        out = np.full((self.nx, self.ny), fill, dtype=np.float64)
        out[self.fluid_mask] = vec
        return out

    def cell_heights(self) -> np.ndarray:
        """Fluid-cell centre heights above the channel bottom (n_fluid,)."""
        yy = np.broadcast_to(self.yc[None, :], (self.nx, self.ny))
        return self.pack(yy)


def _span_to_cells(x0, x1, dx, n, what):
    i0 = int(round(x0 / dx))
    i1 = int(round(x1 / dx))
    if i1 - i0 < 1:
        raise GeometryError(
            f"{what} span ({x0}, {x1}) is thinner than one cell (dx={dx:g})")
    return max(i0, 0), min(i1, n)


def build_grid(geometry: Geometry, nx: int, ny: int, closed: bool = False) -> Grid:
    """Discretize the channel; snap step edges to the nearest cell face.

    ``closed=True`` turns the inlet/outlet faces into walls, giving a
    sealed box (used for equilibrium checks).
    """
    if nx < 8 or ny < 8:
        raise GeometryError(f"need nx, ny >= 8, got {nx}x{ny}")
    dx = geometry.L / nx
    dy = geometry.H / ny

    solid = np.zeros((nx, ny), dtype=np.int8)
    for x0, x1, wall in geometry.step_spans:
        i0, i1 = _span_to_cells(x0, x1, dx, nx, "step")
        height = geometry.H1 if wall == "top" else geometry.H2
        nj = int(round(height / dy))
        if nj < 2:
            raise GeometryError(
                f"step height {height:g} resolves to {nj} cells (dy={dy:g}); "
                "need at least 2")
        if wall == "top":
            solid[i0:i1, ny - nj:] = TOP_STEP
        else:
            solid[i0:i1, :nj] = BOTTOM_STEP
    fluid = solid == FLUID

    xt = np.full((nx + 1, ny), DEAD, dtype=np.int8)
    xth = np.zeros((nx + 1, ny), dtype=np.int8)
    left = fluid[:-1, :]
    right = fluid[1:, :]
    inner = xt[1:-1, :]
    inner[left & right] = INTERIOR
    inner[left ^ right] = WALL
    xt[0, fluid[0, :]] = WALL if closed else INLET
    xt[nx, fluid[-1, :]] = WALL if closed else OUTLET
    # wall faces inherit the solid neighbour's thermal kind
    mixed = left ^ right
    kind = np.where(left, solid[1:, :], solid[:-1, :])
    xth[1:-1, :][mixed] = kind[mixed]

    yt = np.full((nx, ny + 1), DEAD, dtype=np.int8)
    yth = np.zeros((nx, ny + 1), dtype=np.int8)
    below = fluid[:, :-1]
    above = fluid[:, 1:]
    innery = yt[:, 1:-1]
    innery[below & above] = INTERIOR
    innery[below ^ above] = WALL
    yt[:, 0][fluid[:, 0]] = WALL
    yt[:, ny][fluid[:, -1]] = WALL
    mixedy = below ^ above
    kindy = np.where(below, solid[:, 1:], solid[:, :-1])
    yth[:, 1:-1][mixedy] = kindy[mixedy]

    return Grid(geometry=geometry, nx=nx, ny=ny, dx=dx, dy=dy,
                fluid_mask=fluid, solid_kind=solid,
                xface_type=xt, yface_type=yt,
                xface_thermal=xth, yface_thermal=yth, closed=closed)
