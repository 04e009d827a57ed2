"""Sparse elliptic operators on the masked grid.

Two operator families back the time stepper:

* :class:`CellPoisson`, a 5-point Laplacian over fluid cells used both
  for the pressure equation and for projecting the magnetic field back
  to discrete solenoidality. Faces may be structurally Neumann (no
  coupling; the known boundary flux lives in the right-hand side) or
  half-cell Dirichlet.
* :class:`FaceDiffusion`, a Laplacian over one orientation of face
  unknowns, used to build the implicit Helmholtz operator
  ``(I + dt*eta*L)`` for magnetic diffusion. The magnetic diffusivity of
  a liquid metal is of order 1 m^2/s, so explicit diffusion would bound
  dt around 1e-7 s; the implicit solve removes that restriction.

All matrices are assembled once per grid and factorized with SuperLU, so
repeated solves cost a pair of triangular sweeps.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .grid import DEAD, INLET, INTERIOR, OUTLET, WALL, Grid


class EllipticSolveError(RuntimeError):
    """Direct solve produced an unacceptable residual (blow-up upstream)."""


class CellPoisson:
    """L phi = rhs over fluid cells, L assembled in positive form
    (diag = sum of couplings) so that L == -Laplacian.

    ``dirichlet_x``/``dirichlet_y`` are face-shaped float arrays holding
    the Dirichlet value at selected non-interior faces and NaN elsewhere.
    Dirichlet faces sit half a cell from the adjacent centre. With no
    Dirichlet face anywhere the operator is singular up to constants and
    is gauged by mean-zero right-hand side and solution.
    """

    def __init__(self, grid: Grid, dirichlet_x=None, dirichlet_y=None):
        self.grid = grid
        nx, ny, dx, dy = grid.nx, grid.ny, grid.dx, grid.dy
        idx = grid.flat_index
        n = grid.n_fluid
        diag = np.zeros(n)
        bc_rhs = np.zeros(n)
        rows, cols, vals = [], [], []

        def couple(p_cells, n_cells, c):
            np.add.at(diag, p_cells, c)
            np.add.at(diag, n_cells, c)
            rows.append(p_cells), cols.append(n_cells)
            vals.append(np.full(p_cells.size, -c))
            rows.append(n_cells), cols.append(p_cells)
            vals.append(np.full(p_cells.size, -c))

        ii, jj = np.nonzero(grid.xface_type == INTERIOR)
        if ii.size:
            couple(idx[ii - 1, jj], idx[ii, jj], 1.0 / dx**2)
        ii, jj = np.nonzero(grid.yface_type == INTERIOR)
        if ii.size:
            couple(idx[ii, jj - 1], idx[ii, jj], 1.0 / dy**2)

        has_dirichlet = False
        if dirichlet_x is not None:
            ii, jj = np.nonzero(np.isfinite(dirichlet_x))
            for i, j in zip(ii, jj):
                cell = idx[i, j] if i < nx and grid.fluid_mask[i, j] else idx[i - 1, j]
                c = 2.0 / dx**2
                diag[cell] += c
                bc_rhs[cell] += c * dirichlet_x[i, j]
                has_dirichlet = True
        if dirichlet_y is not None:
            ii, jj = np.nonzero(np.isfinite(dirichlet_y))
            for i, j in zip(ii, jj):
                cell = idx[i, j] if j < ny and grid.fluid_mask[i, j] else idx[i, j - 1]
                c = 2.0 / dy**2
                diag[cell] += c
                bc_rhs[cell] += c * dirichlet_y[i, j]
                has_dirichlet = True

        self.singular = not has_dirichlet
        if self.singular:
            diag = diag.copy()
            diag[0] += 1.0  # rank-one gauge fix; exact when rhs has zero mean
        rows.append(np.arange(n)), cols.append(np.arange(n)), vals.append(diag)
        self._bc_rhs = bc_rhs
        self._matrix = sp.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n, n))
        self._lu = splu(self._matrix)

    def solve(self, rhs, check=True):
        b = rhs + self._bc_rhs
        if self.singular:
            b = b - b.mean()
        x = self._lu.solve(b)
        if check:
            scale = float(np.max(np.abs(b)))
            resid = float(np.max(np.abs(self._matrix @ x - b)))
            if not np.isfinite(resid) or resid > 1e-6 * max(scale, 1.0):
                raise EllipticSolveError(
                    f"poisson residual {resid:.3e} vs rhs scale {scale:.3e}")
        if self.singular:
            x = x - x.mean()
        return x


def _face_unknowns(grid: Grid, axis: int):
    types = grid.xface_type if axis == 0 else grid.yface_type
    if axis == 0:
        unknown = (types == INTERIOR) | (types == INLET) | (types == OUTLET)
    else:
        unknown = types == INTERIOR
    fmap = np.full(types.shape, -1, dtype=np.int64)
    fmap[unknown] = np.arange(int(unknown.sum()))
    return unknown, fmap


class FaceDiffusion:
    """Laplacian over one orientation of magnetic-face unknowns.

    The operator acts on the perturbation from the applied uniform field,
    so every Dirichlet value is zero: tangential and normal components
    are pinned on walls and step surfaces, while the inlet/outlet planes
    close with zero normal gradient.
    """

    def __init__(self, grid: Grid, axis: int):
        self.grid = grid
        self.axis = axis
        self.unknown, self.fmap = _face_unknowns(grid, axis)
        nx, ny, dx, dy = grid.nx, grid.ny, grid.dx, grid.dy
        types = grid.xface_type if axis == 0 else grid.yface_type
        m = int(self.unknown.sum())
        diag = np.zeros(m)
        rows, cols, vals = [], [], []
        ii, jj = np.nonzero(self.unknown)
        me = self.fmap[ii, jj]

        def attach(di, dj, dist_sq, boundary_is_neumann, half_if_dead):
            """Add the (di, dj) stencil leg for every unknown face."""
            ni, nj = ii + di, jj + dj
            inside = ((ni >= 0) & (ni < types.shape[0])
                      & (nj >= 0) & (nj < types.shape[1]))
            out = ~inside
            if boundary_is_neumann:
                pass  # zero-gradient: the leg simply drops
            else:
                # physical wall at half spacing from the face centre
                np.add.at(diag, me[out], 2.0 / dist_sq)
            ni_c, nj_c = ni[inside], nj[inside]
            me_c = me[inside]
            nt = types[ni_c, nj_c]
            nb = self.fmap[ni_c, nj_c]
            coupled = nb >= 0
            np.add.at(diag, me_c[coupled], 1.0 / dist_sq)
            rows.append(me_c[coupled]), cols.append(nb[coupled])
            vals.append(np.full(int(coupled.sum()), -1.0 / dist_sq))
            fixed = ~coupled
            # fixed neighbour: Dirichlet zero either at a full spacing
            # (value lives on a wall surface) or half (buried in solid)
            half = fixed & (nt == DEAD) if half_if_dead else np.zeros_like(fixed)
            np.add.at(diag, me_c[fixed & ~half], 1.0 / dist_sq)
            np.add.at(diag, me_c[half], 2.0 / dist_sq)

        if axis == 0:
            attach(-1, 0, dx * dx, boundary_is_neumann=True, half_if_dead=False)
            attach(+1, 0, dx * dx, boundary_is_neumann=True, half_if_dead=False)
            attach(0, -1, dy * dy, boundary_is_neumann=False, half_if_dead=True)
            attach(0, +1, dy * dy, boundary_is_neumann=False, half_if_dead=True)
        else:
            attach(0, -1, dy * dy, boundary_is_neumann=False, half_if_dead=False)
            attach(0, +1, dy * dy, boundary_is_neumann=False, half_if_dead=False)
            attach(-1, 0, dx * dx, boundary_is_neumann=True, half_if_dead=True)
            attach(+1, 0, dx * dx, boundary_is_neumann=True, half_if_dead=True)

        rows.append(np.arange(m)), cols.append(np.arange(m)), vals.append(diag)
        self.laplacian = sp.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(m, m))
        self._identity = sp.identity(m, format="csc")

    def helmholtz_lu(self, coef: float):
        """Factorize (I + coef * L); coef = dt * eta."""
        return splu((self._identity + coef * self.laplacian).tocsc())

    def gather(self, faces):
        return faces[self.unknown]

    def scatter_into(self, faces, values):
        faces[self.unknown] = values
