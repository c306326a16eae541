"""Conservative second-order stencils on cell-centred grids.

Every system the solvers assemble has the symmetric finite-volume form

    reaction_i u_i + sum_faces K_f (u_i - u_j) = rhs_i

with nonnegative face coefficients ``K_f``.  Boundary faces are either
no-flux or homogeneous Dirichlet at the face (ghost value ``-u_i``, which
doubles the face coefficient).  Cells can be marked inactive: they are pinned
to zero and the faces between active and inactive cells become Dirichlet
faces, which keeps the operator symmetric.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BCKind, Geometry, Grid
from .linalg import SpdOperator, TridiagonalSystem, solve_spd, solve_tridiagonal


def cell_volumes(grid: Grid) -> np.ndarray:
    """Cell measures without the ``2 pi`` of the radial geometry."""
    if grid.geometry is Geometry.RADIAL_2D:
        return grid.centers(0) * grid.spacing[0]
    return np.full(grid.shape, float(np.prod(grid.spacing)))


def face_weights(grid: Grid) -> list[np.ndarray]:
    """Geometric conductances ``area / distance`` for every face, per axis."""
    if grid.geometry is Geometry.INTERVAL_1D:
        return [np.full(grid.shape[0] + 1, 1.0 / grid.spacing[0])]
    if grid.geometry is Geometry.RADIAL_2D:
        return [grid.faces(0) / grid.spacing[0]]
    nx, ny = grid.shape
    dx, dy = grid.spacing
    return [np.full((nx + 1, ny), dy / dx), np.full((nx, ny + 1), dx / dy)]


def face_means(q: np.ndarray, axis: int, boundary_value: float = 0.0) -> np.ndarray:
    """Arithmetic mean of ``q`` on every face, boundary faces against a ghost value."""
    pad = [(0, 0)] * q.ndim
    pad[axis] = (1, 1)
    qp = np.pad(q, pad, constant_values=boundary_value)
    lo = [slice(None)] * q.ndim
    hi = [slice(None)] * q.ndim
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    return 0.5 * (qp[tuple(lo)] + qp[tuple(hi)])


def _take(a: np.ndarray, axis: int, sl) -> np.ndarray:
    idx = [slice(None)] * a.ndim
    idx[axis] = sl
    return a[tuple(idx)]


@dataclass
class Stencil:
    diag: np.ndarray
    couplings: list[np.ndarray]

    @property
    def shape(self):
        return self.diag.shape

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        for ax, w in enumerate(self.couplings):
            lo = [slice(None)] * v.ndim
            hi = [slice(None)] * v.ndim
            lo[ax] = slice(None, -1)
            hi[ax] = slice(1, None)
            lo, hi = tuple(lo), tuple(hi)
            out[lo] -= w * v[hi]
            out[hi] -= w * v[lo]
        return out

    def is_m_matrix(self) -> bool:
        """Positive diagonal, nonpositive off-diagonals, weak row dominance."""
        offsum = np.zeros_like(self.diag)
        for ax, w in enumerate(self.couplings):
            if np.any(w < 0.0):
                return False
            offsum[_slice_lo(w.ndim, ax)] += w
            offsum[_slice_hi(w.ndim, ax)] += w
        return bool(np.all(self.diag > 0.0) and np.all(self.diag >= offsum * (1.0 - 1e-14)))

    def to_dense(self) -> np.ndarray:
        n = self.diag.size
        a = np.empty((n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = 1.0
            a[:, k] = self.apply(e.reshape(self.shape)).ravel()
        return a

    def tridiagonal(self, rhs: np.ndarray) -> TridiagonalSystem:
        (w,) = self.couplings
        return TridiagonalSystem(-w, self.diag, -w, rhs)

    def solve(self, rhs: np.ndarray, tol: float = 1e-10, x0=None) -> tuple[np.ndarray, int]:
        """Direct Thomas solve in 1D, Jacobi-preconditioned CG otherwise."""
        if self.diag.ndim == 1:
            return solve_tridiagonal(self.tridiagonal(rhs)), 1
        op = SpdOperator(self.apply, self.diag.size, self.diag)
        sol = solve_spd(op, rhs, tol=tol, x0=x0, jacobi=True)
        return sol.x, sol.iterations


def _slice_lo(ndim, axis):
    idx = [slice(None)] * ndim
    idx[axis] = slice(None, -1)
    return tuple(idx)


def _slice_hi(ndim, axis):
    idx = [slice(None)] * ndim
    idx[axis] = slice(1, None)
    return tuple(idx)


def assemble(
    reaction: np.ndarray,
    face_coeff: list[np.ndarray],
    dirichlet: list[tuple[bool, bool]],
    active: np.ndarray | None = None,
) -> Stencil:
    """Build the operator from cell reaction terms and full face coefficients.

    ``face_coeff[axis]`` includes the two boundary faces along ``axis``;
    ``dirichlet[axis]`` says whether the (lo, hi) boundary faces are
    homogeneous Dirichlet (otherwise no-flux).
    """
    diag = np.array(reaction, dtype=float)
    couplings = []
    for ax, k in enumerate(face_coeff):
        n_ax = diag.shape[ax]
        inner = _take(k, ax, slice(1, n_ax)).copy()
        lo_face = _take(k, ax, slice(0, 1))
        hi_face = _take(k, ax, slice(n_ax, n_ax + 1))
        d_lo, d_hi = dirichlet[ax]
        diag[_slice_lo(diag.ndim, ax)] += inner
        diag[_slice_hi(diag.ndim, ax)] += inner
        first = [slice(None)] * diag.ndim
        last = [slice(None)] * diag.ndim
        first[ax] = slice(0, 1)
        last[ax] = slice(n_ax - 1, n_ax)
        if d_lo:
            diag[tuple(first)] += 2.0 * lo_face
        if d_hi:
            diag[tuple(last)] += 2.0 * hi_face
        if active is not None:
            a_lo = active[_slice_lo(diag.ndim, ax)]
            a_hi = active[_slice_hi(diag.ndim, ax)]
            cut = a_lo != a_hi
            # a cut face turns from coupling (+K on the diagonal) into a Dirichlet face (+2K)
            diag[_slice_lo(diag.ndim, ax)] += np.where(cut & a_lo, inner, 0.0)
            diag[_slice_hi(diag.ndim, ax)] += np.where(cut & a_hi, inner, 0.0)
            inner = np.where(a_lo & a_hi, inner, 0.0)
        couplings.append(inner)
    if active is not None:
        diag = np.where(active, diag, 1.0)
    return Stencil(diag, couplings)


def dirichlet_faces(grid: Grid, kinds=(BCKind.DIRICHLET_ZERO, BCKind.DIRICHLET_VALUE)) -> list[tuple[bool, bool]]:
    return [(lo.kind in kinds, hi.kind in kinds) for lo, hi in grid.bc]
