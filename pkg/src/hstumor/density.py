"""Semi-implicit, positivity preserving density step.

With the mobility ``M = exp(-n**gamma)`` the flux ``n grad p`` is rewritten
as ``n M grad(n / (n M))``.  Freezing ``n M`` at the old level and taking the
ratio's numerator (and the growth term) at the new level gives, per cell,

    (1 - dt G_j) n_j^{k+1} - dt div_h[a grad_h(n^{k+1} / s)]_j = n_j^k

with ``s = n^k M^k + delta`` and ``a`` the face mean of ``n^k M^k``.  The
system is solved for ``v = n^{k+1} / s``, in which it is a symmetric
M-matrix as long as ``dt < 1 / G_m``; then ``n^{k+1} = s v >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _stencil
from .constitutive import GrowthFn, pressure
from .core import BCKind, ConfigurationError, Field, ModelParams, SimState, total_mass
from .linalg import SolverError

DELTA = 1e-14


class StepRejected(ValueError):
    """Time step violates ``dt < 1 / G_m``."""


@dataclass
class StepReport:
    dt_used: float
    linear_iterations: int
    min_density: float
    mass_before: float
    mass_after: float


def stable_dt(params: ModelParams, safety: float = 0.5) -> float:
    """``safety / G_m``, a time step satisfying the positivity bound."""
    if not 0.0 < safety < 1.0:
        raise ValueError("safety must lie in (0, 1)")
    return safety / params.g_max


def check_dt(dt: float, params: ModelParams) -> None:
    g_max = params.g_max
    if not (dt > 0.0 and dt * g_max < 1.0):
        raise StepRejected(
            f"dt = {dt!r} violates the positivity bound dt < 1/G_m = {1.0 / g_max!r}"
        )


def _boundary_kinds(grid):
    kinds = []
    for lo, hi in grid.bc:
        for b in (lo, hi):
            if b.kind is BCKind.DIRICHLET_VALUE and b.value != 0.0:
                raise ConfigurationError("density boundaries must be no-flux or zero Dirichlet")
        kinds.append((lo.kind is not BCKind.NO_FLUX, hi.kind is not BCKind.NO_FLUX))
    return kinds


def assemble_step(n: Field, c_next: Field, dt: float, params: ModelParams, delta: float = DELTA):
    """Operator, right-hand side and scaling ``s`` of one density step."""
    grid = n.grid
    nk = n.values
    with np.errstate(over="ignore"):
        q = nk * np.exp(-pressure(nk, params.gamma))
    s = q + delta
    g = GrowthFn(params.growth_kind, params.g0).evaluate(c_next.values)
    vol = np.broadcast_to(_stencil.cell_volumes(grid), grid.shape)
    coeff = [
        dt * w * _stencil.face_means(q, ax)
        for ax, w in enumerate(_stencil.face_weights(grid))
    ]
    op = _stencil.assemble(vol * s * (1.0 - dt * g), coeff, _boundary_kinds(grid))
    return op, vol * nk, s


def step_density(
    state: SimState,
    c_next: Field,
    dt: float,
    params: ModelParams,
    delta: float = DELTA,
    tol: float = 1e-13,
    check: bool = False,
) -> tuple[Field, StepReport]:
    """Advance the density by one step using the already updated nutrient.

    ``check=True`` additionally verifies the M-matrix property of the
    assembled operator before solving.
    """
    check_dt(dt, params)
    n = state.n
    op, rhs, s = assemble_step(n, c_next, dt, params, delta)
    if check and not op.is_m_matrix():
        raise SolverError("density operator lost the M-matrix property")
    v, iters = op.solve(rhs, tol=tol)
    n_new = s * v
    new = Field(n.grid, n_new)
    report = StepReport(
        dt_used=dt,
        linear_iterations=iters,
        min_density=float(n_new.min()),
        mass_before=total_mass(n),
        mass_after=total_mass(new),
    )
    return new, report
