"""Elliptic nutrient solves for the constant, in vitro and in vivo models.

The solve is carried out for the deficit ``u = c_b - c``, which turns every
far-field or exterior condition ``c = c_b`` into a homogeneous Dirichlet
condition:

* in vitro:  ``-lap u + psi(n) u = psi(n) c_b`` on tumour cells, ``u = 0``
  on exterior cells, the tumour/exterior interface sitting on the cell face;
* in vivo:   ``-lap u + (psi(n) + chi_ext) u = psi(n) c_b`` on every cell,
  ``u = 0`` on the outer box.

Both operators are symmetric M-matrices with a nonnegative right-hand side
bounded by the operator applied to ``c_b``, so ``0 <= c <= c_b`` holds at
the discrete level.
"""
from __future__ import annotations

import numpy as np

from . import _stencil
from .constitutive import psi
from .core import Field, Grid, ModelParams, NutrientKind

EPS_D = 1e-7
# roundoff slack when asserting 0 <= c <= c_b
BOUND_SLACK = 1e-10


class NutrientBoundsError(RuntimeError):
    """The computed nutrient left ``[0, c_b]`` beyond roundoff."""


def classify_support(n: Field, eps_d: float = EPS_D) -> np.ndarray:
    """Boolean tumour mask ``n > eps_d`` (``False`` marks exterior cells)."""
    if np.any(n.values < 0.0):
        raise ValueError("density must be nonnegative")
    return n.values > eps_d


def _box_dirichlet(grid: Grid) -> list[tuple[bool, bool]]:
    # every box face carries c = c_b, except the radial axis
    from .core import Geometry

    if grid.geometry is Geometry.RADIAL_2D:
        return [(False, True)]
    return [(True, True)] * grid.ndim


def solve_nutrient(
    n: Field,
    params: ModelParams,
    grid: Grid | None = None,
    eps_d: float = EPS_D,
    tol: float = 1e-12,
    return_iterations: bool = False,
):
    """Nutrient field ``c`` for the density ``n``.

    ``psi`` is evaluated at the given (lagged) density so the problem is linear.
    """
    grid = n.grid if grid is None else grid
    c_b = params.c_b
    kind = params.nutrient_kind
    if kind is NutrientKind.CONSTANT:
        out = Field.full(grid, c_b)
        return (out, 0) if return_iterations else out

    tumour = classify_support(n, eps_d)
    if not tumour.any():
        out = Field.full(grid, c_b)
        return (out, 0) if return_iterations else out

    vol = _stencil.cell_volumes(grid)
    vol = np.broadcast_to(vol, grid.shape)
    rate = psi(n.values)
    coeff = _stencil.face_weights(grid)
    if kind is NutrientKind.IN_VITRO:
        op = _stencil.assemble(vol * rate, coeff, _box_dirichlet(grid), active=tumour)
        rhs = np.where(tumour, vol * rate * c_b, 0.0)
    else:
        exterior = ~tumour
        op = _stencil.assemble(vol * (rate + exterior), coeff, _box_dirichlet(grid))
        rhs = vol * rate * c_b

    u, iters = op.solve(rhs, tol=tol)
    if kind is NutrientKind.IN_VITRO:
        u = np.where(tumour, u, 0.0)
    c = c_b - u
    lo, hi = c.min(), c.max()
    if lo < -BOUND_SLACK * c_b or hi > c_b * (1.0 + BOUND_SLACK):
        raise NutrientBoundsError(f"nutrient outside [0, c_b]: min {lo:.3e}, max {hi:.3e}")
    out = Field(grid, np.clip(c, 0.0, c_b))
    return (out, iters) if return_iterations else out
