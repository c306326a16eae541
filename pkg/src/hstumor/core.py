"""Grids, fields, model parameters and simulation state.

All fields are cell averages on a uniform, cell-centred grid.  Integral
quantities use the midpoint rule with the geometry's cell measure, so the
conservative flux form used by the solvers telescopes exactly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ConfigurationError(ValueError):
    """Invalid grid, parameter or experiment description."""


class DomainError(ValueError):
    """Argument outside the domain of a pointwise law or closed form."""


class Geometry(enum.Enum):
    INTERVAL_1D = "interval1d"
    RADIAL_2D = "radial2d"
    CARTESIAN_2D = "cartesian2d"

    @property
    def ndim(self) -> int:
        return 2 if self is Geometry.CARTESIAN_2D else 1


class BCKind(enum.Enum):
    NO_FLUX = "noflux"
    DIRICHLET_ZERO = "dirichlet_zero"
    DIRICHLET_VALUE = "dirichlet"


@dataclass(frozen=True)
class BC:
    kind: BCKind
    value: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "BC":
        """Parse ``noflux``, ``dirichlet_zero`` or ``dirichlet(<value>)``."""
        t = text.strip().lower()
        if t == "noflux":
            return NO_FLUX
        if t == "dirichlet_zero":
            return DIRICHLET_ZERO
        if t.startswith("dirichlet(") and t.endswith(")"):
            return cls(BCKind.DIRICHLET_VALUE, float(t[len("dirichlet("):-1]))
        raise ConfigurationError(f"unknown boundary condition {text!r}")

    def __str__(self) -> str:
        if self.kind is BCKind.DIRICHLET_VALUE:
            return f"dirichlet({self.value!r})"
        return self.kind.value


NO_FLUX = BC(BCKind.NO_FLUX)
DIRICHLET_ZERO = BC(BCKind.DIRICHLET_ZERO)


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred grid.

    ``extents`` holds one ``(lo, hi)`` pair per axis and ``bc`` one
    ``(lo_face, hi_face)`` pair per axis.  Radial grids start at the axis
    ``r = 0`` with centres ``(i + 1/2) dr``; the axis face is always no-flux.
    """

    geometry: Geometry
    extents: tuple[tuple[float, float], ...]
    cell_count: tuple[int, ...]
    bc: tuple[tuple[BC, BC], ...]

    @property
    def ndim(self) -> int:
        return len(self.cell_count)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cell_count

    @property
    def size(self) -> int:
        return int(np.prod(self.cell_count))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.extents, self.cell_count))

    def centers(self, axis: int = 0) -> np.ndarray:
        lo, _ = self.extents[axis]
        h = self.spacing[axis]
        return lo + (np.arange(self.cell_count[axis]) + 0.5) * h

    def faces(self, axis: int = 0) -> np.ndarray:
        lo, _ = self.extents[axis]
        return lo + np.arange(self.cell_count[axis] + 1) * self.spacing[axis]

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Cell-centre coordinate arrays, each of shape ``self.shape``."""
        return np.meshgrid(*(self.centers(a) for a in range(self.ndim)), indexing="ij")

    def cell_measure(self) -> np.ndarray:
        """Length, area (``2 pi r dr``) or area (``dx dy``) of every cell."""
        if self.geometry is Geometry.INTERVAL_1D:
            return np.full(self.shape, self.spacing[0])
        if self.geometry is Geometry.RADIAL_2D:
            return 2.0 * np.pi * self.centers(0) * self.spacing[0]
        dx, dy = self.spacing
        return np.full(self.shape, dx * dy)


def build_grid(
    geometry: Geometry | str,
    extents: Sequence[float] | Sequence[Sequence[float]],
    cell_count: int | Sequence[int],
    bc: BC | str | Sequence = NO_FLUX,
) -> Grid:
    """Validate a grid description and build the grid.

    ``extents`` may be a flat ``(lo, hi)`` pair for one-axis geometries, or a
    pair per axis.  ``bc`` may be a single tag used on every face, a
    ``(lo, hi)`` pair used on every axis, or a pair per axis.

    Examples
    --------
    >>> g = build_grid("interval1d", (-5, 5), 200)
    >>> g.spacing
    (0.05,)
    """
    geometry = Geometry(geometry)
    ndim = geometry.ndim

    ext = np.asarray(extents, dtype=float)
    if ext.ndim == 1:
        ext = np.tile(ext, (ndim, 1))
    if ext.shape != (ndim, 2):
        raise ConfigurationError(f"{geometry.value} needs {ndim} (lo, hi) extent pair(s)")
    if not np.all(np.isfinite(ext)) or np.any(ext[:, 1] <= ext[:, 0]):
        raise ConfigurationError(f"extents must be finite with hi > lo, got {ext.tolist()}")

    counts = (int(cell_count),) * ndim if np.isscalar(cell_count) else tuple(int(c) for c in cell_count)
    if len(counts) != ndim:
        raise ConfigurationError(f"{geometry.value} needs {ndim} cell count(s)")
    if any(c < 4 for c in counts):
        raise ConfigurationError(f"cell_count must be >= 4 on every axis, got {counts}")

    if geometry is Geometry.RADIAL_2D and ext[0, 0] != 0.0:
        raise ConfigurationError("radial grids must start at r = 0")

    faces = _normalise_bc(bc, ndim)
    if geometry is Geometry.RADIAL_2D:
        # zero-flux axis face, whatever was asked for
        faces = ((NO_FLUX, faces[0][1]),)

    return Grid(
        geometry=geometry,
        extents=tuple((float(lo), float(hi)) for lo, hi in ext),
        cell_count=counts,
        bc=faces,
    )


def _normalise_bc(bc, ndim: int) -> tuple[tuple[BC, BC], ...]:
    def one(b) -> BC:
        if isinstance(b, BC):
            return b
        if isinstance(b, str):
            return BC.parse(b)
        raise ConfigurationError(f"cannot interpret boundary condition {b!r}")

    if isinstance(bc, (BC, str)):
        return ((one(bc), one(bc)),) * ndim
    bc = list(bc)
    if len(bc) == 2 and all(isinstance(b, (BC, str)) for b in bc):
        pair = (one(bc[0]), one(bc[1]))
        return (pair,) * ndim
    if len(bc) != ndim:
        raise ConfigurationError("boundary conditions must be given for every face")
    return tuple((one(lo), one(hi)) for lo, hi in bc)


@dataclass
class Field:
    """Cell-averaged scalar values on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(f"field shape {self.values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def full(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(value)))

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())


class GrowthKind(enum.Enum):
    CONSTANT = "constant"
    LINEAR_IN_C = "linear"


class NutrientKind(enum.Enum):
    CONSTANT = "constant"
    IN_VITRO = "invitro"
    IN_VIVO = "invivo"


class PsiKind(enum.Enum):
    IDENTITY = "identity"


@dataclass(frozen=True)
class ModelParams:
    """Pressure exponent, growth law and nutrient model.

    ``gamma`` is the exponent of ``p(n) = n**gamma``; ``g0`` the growth rate
    and ``c_b`` the far-field nutrient level.
    """

    gamma: float = 80.0
    g0: float = 1.0
    c_b: float = 1.0
    growth_kind: GrowthKind = GrowthKind.CONSTANT
    nutrient_kind: NutrientKind = NutrientKind.CONSTANT
    psi_kind: PsiKind = PsiKind.IDENTITY

    def __post_init__(self):
        object.__setattr__(self, "growth_kind", GrowthKind(self.growth_kind))
        object.__setattr__(self, "nutrient_kind", NutrientKind(self.nutrient_kind))
        object.__setattr__(self, "psi_kind", PsiKind(self.psi_kind))
        if not self.gamma >= 1.0:
            raise ConfigurationError(f"gamma must be >= 1, got {self.gamma}")
        if not self.g0 > 0.0:
            raise ConfigurationError(f"g0 must be positive, got {self.g0}")
        if not self.c_b > 0.0:
            raise ConfigurationError(f"c_b must be positive, got {self.c_b}")

    @property
    def g_max(self) -> float:
        """Largest growth rate reachable for nutrient in ``[0, c_b]``."""
        from .constitutive import GrowthFn

        return GrowthFn(self.growth_kind, self.g0).evaluate(self.c_b)


@dataclass
class SimState:
    time: float
    n: Field
    c: Field
    step_index: int = 0


def total_mass(n: Field) -> float:
    """Midpoint-rule integral of ``n`` with the grid's cell measure."""
    return float(np.sum(n.values * n.grid.cell_measure()))
