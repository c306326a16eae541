"""Experiment descriptions and the flat ``key = value`` config format.

Grammar
-------
A config file is UTF-8 text made of ``key = value`` lines grouped under
``[section]`` headers.  ``#`` starts a comment.  Lists are comma separated.
Keys before the first header belong to the top level (only ``name``).

::

    name = disk

    [grid]
    geometry = radial2d          # interval1d | radial2d | cartesian2d
    extent = 0, 3                # lo, hi  (extent_y for the second axis)
    cells = 60                   # or "nx, ny"
    bc = noflux, dirichlet_zero  # lo, hi  (bc_y for the second axis)

    [model]
    gamma = 80
    g0 = 1
    c_b = 1
    growth = constant            # constant | linear
    nutrient = constant          # constant | invitro | invivo

    [initial]
    kind = disk                  # disk | annulus | double_annulus | tanh_slab
                                 # | rectangles | flower
    radius = 0.8
    amplitude = 0.99

    [time]
    dt = 2.5e-5
    t_end = 0.5
    snapshots = 0.0975, 0.2975, 0.4975
    front_every = 100            # steps between front samples

    [output]
    directory = out/disk
    formats = csv, json

    [compare]
    oracle = ball                # none | ball | annulus | double_annulus
                                 # | vitro1d | vivo1d | vitro_radial | vivo_radial
    ode_dt = 1e-4

    [numerics]
    threshold = 0.5
    eps_d = 1e-7
    delta = 1e-14
    cg_tol = 1e-10
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .core import ConfigurationError, Geometry, Grid, ModelParams, build_grid
from .heleshaw import OdeKind


class ConfigError(ConfigurationError):
    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.key = key
        self.line = line


# --- initial conditions ------------------------------------------------------


def _radius(grid: Grid) -> np.ndarray:
    if grid.geometry is Geometry.CARTESIAN_2D:
        x, y = grid.mesh()
        return np.hypot(x, y)
    return np.abs(grid.centers(0))


@dataclass(frozen=True)
class Disk:
    radius: float
    amplitude: float = 0.99

    def evaluate(self, grid: Grid) -> np.ndarray:
        return np.where(_radius(grid) <= self.radius, self.amplitude, 0.0)


@dataclass(frozen=True)
class Annulus:
    r_minus: float
    r_plus: float
    amplitude: float = 0.99

    def evaluate(self, grid: Grid) -> np.ndarray:
        r = _radius(grid)
        return np.where((r >= self.r_minus) & (r <= self.r_plus), self.amplitude, 0.0)


@dataclass(frozen=True)
class DoubleAnnulus:
    radii: tuple[float, float, float, float]
    amplitude: float = 0.99

    def evaluate(self, grid: Grid) -> np.ndarray:
        r = _radius(grid)
        r1, r2, r3, r4 = self.radii
        inside = ((r >= r1) & (r <= r2)) | ((r >= r3) & (r <= r4))
        return np.where(inside, self.amplitude, 0.0)


@dataclass(frozen=True)
class TanhSlab:
    """``amplitude/2 (tanh(k (x - c + w)) - tanh(k (x - c - w)))``."""

    halfwidth: float
    center: float = 0.0
    steepness: float = 100.0
    amplitude: float = 0.99

    def evaluate(self, grid: Grid) -> np.ndarray:
        x = grid.centers(0) - self.center
        k, w = self.steepness, self.halfwidth
        return 0.5 * self.amplitude * (np.tanh(k * (x + w)) - np.tanh(k * (x - w)))


@dataclass(frozen=True)
class Rectangles:
    boxes: tuple[tuple[float, float, float, float], ...]
    amplitude: float = 0.99

    def evaluate(self, grid: Grid) -> np.ndarray:
        x, y = grid.mesh()
        inside = np.zeros(grid.shape, dtype=bool)
        for x0, x1, y0, y1 in self.boxes:
            inside |= (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)
        return np.where(inside, self.amplitude, 0.0)


@dataclass(frozen=True)
class Flower:
    """Inside ``r < base_radius + petal_amplitude * sin(petals * theta)``."""

    base_radius: float = 0.5
    petal_amplitude: float = 0.5
    petals: int = 4
    amplitude: float = 0.9

    def evaluate(self, grid: Grid) -> np.ndarray:
        x, y = grid.mesh()
        level = np.hypot(x, y) - self.base_radius - self.petal_amplitude * np.sin(self.petals * np.arctan2(y, x))
        return np.where(level < 0.0, self.amplitude, 0.0)


InitialCondition = Disk | Annulus | DoubleAnnulus | TanhSlab | Rectangles | Flower

_IC_GEOMETRIES = {
    Disk: set(Geometry),
    Annulus: {Geometry.RADIAL_2D, Geometry.CARTESIAN_2D},
    DoubleAnnulus: {Geometry.RADIAL_2D, Geometry.CARTESIAN_2D},
    TanhSlab: {Geometry.INTERVAL_1D},
    Rectangles: {Geometry.CARTESIAN_2D},
    Flower: {Geometry.CARTESIAN_2D},
}


def oracle_initial_state(ic: InitialCondition) -> list[float]:
    if isinstance(ic, Disk):
        return [ic.radius]
    if isinstance(ic, Annulus):
        return [ic.r_minus, ic.r_plus]
    if isinstance(ic, DoubleAnnulus):
        return list(ic.radii)
    if isinstance(ic, TanhSlab):
        return [ic.center + ic.halfwidth]
    raise ConfigurationError(f"no analytic front for initial condition {type(ic).__name__}")


# --- experiment ----------------------------------------------------------


@dataclass
class ExperimentSpec:
    name: str
    grid: Grid
    params: ModelParams
    initial: InitialCondition
    dt: float
    t_end: float
    snapshot_times: tuple[float, ...] = ()
    front_every: int = 100
    output_dir: Path | None = None
    formats: tuple[str, ...] = ("csv", "json")
    oracle: OdeKind | None = None
    ode_dt: float = 1e-4
    threshold: float = 0.5
    eps_d: float = 1e-7
    delta: float = 1e-14
    cg_tol: float = 1e-10

    def __post_init__(self):
        self.validate()

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def validate(self) -> None:
        g_max = self.params.g_max
        if not (self.dt > 0.0 and self.dt * g_max < 1.0):
            raise ConfigError(
                f"dt = {self.dt!r} violates the positivity condition dt < 1/G_m = {1.0 / g_max!r}", "dt"
            )
        if not self.t_end >= 0.0:
            raise ConfigError("t_end must be nonnegative", "t_end")
        if abs(self.n_steps * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise ConfigError(f"t_end = {self.t_end!r} is not a whole number of steps of {self.dt!r}", "t_end")
        for t in self.snapshot_times:
            if not 0.0 <= t <= self.t_end * (1 + 1e-12):
                raise ConfigError(f"snapshot time {t!r} outside [0, t_end]", "snapshots")
        if self.front_every < 1:
            raise ConfigError("front_every must be a positive step count", "front_every")
        if self.grid.geometry not in _IC_GEOMETRIES[type(self.initial)]:
            raise ConfigError(
                f"initial condition {type(self.initial).__name__} does not fit a {self.grid.geometry.value} grid",
                "kind",
            )
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError("threshold must lie in (0, 1)", "threshold")
        if self.oracle is not None:
            if self.grid.ndim != 1:
                raise ConfigError("analytic comparison needs a 1D or radial grid", "oracle")
            oracle_initial_state(self.initial)
        unknown = set(self.formats) - {"csv", "json"}
        if unknown:
            raise ConfigError(f"unknown output format(s) {sorted(unknown)}", "formats")

    def track_count(self) -> int:
        """Number of boundaries tracked in the front trace."""
        if self.oracle is not None:
            return self.oracle.state_dim
        if isinstance(self.initial, Annulus):
            return 2
        if isinstance(self.initial, DoubleAnnulus):
            return 4
        return 1


# --- parsing -------------------------------------------------------------


def _float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _floats(text: str) -> tuple[float, ...]:
    return tuple(_float(t) for t in text.split(",") if t.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _words(text: str) -> tuple[str, ...]:
    return tuple(t.strip().lower() for t in text.split(",") if t.strip())


def _boxes(text: str) -> tuple[tuple[float, ...], ...]:
    boxes = tuple(tuple(_float(v) for v in part.split()) for part in text.split(";") if part.strip())
    if not boxes or any(len(b) != 4 for b in boxes):
        raise ValueError("expected 'x0 x1 y0 y1; ...'")
    return boxes


def _str(text: str) -> str:
    return text.strip()


# section -> key -> (converter, required)
_SCHEMA: dict[str, dict[str, tuple[Callable, bool]]] = {
    "": {"name": (_str, True)},
    "grid": {
        "geometry": (_str, True),
        "extent": (_floats, True),
        "extent_y": (_floats, False),
        "cells": (_ints, True),
        "bc": (_words, False),
        "bc_y": (_words, False),
    },
    "model": {
        "gamma": (_float, True),
        "g0": (_float, False),
        "c_b": (_float, False),
        "growth": (_str, False),
        "nutrient": (_str, False),
    },
    "initial": {
        "kind": (_str, True),
        "amplitude": (_float, False),
        "radius": (_float, False),
        "r_minus": (_float, False),
        "r_plus": (_float, False),
        "radii": (_floats, False),
        "center": (_float, False),
        "halfwidth": (_float, False),
        "steepness": (_float, False),
        "boxes": (_boxes, False),
        "base_radius": (_float, False),
        "petal_amplitude": (_float, False),
        "petals": (int, False),
    },
    "time": {
        "dt": (_float, True),
        "t_end": (_float, True),
        "snapshots": (_floats, False),
        "front_every": (int, False),
    },
    "output": {"directory": (_str, False), "formats": (_words, False)},
    "compare": {"oracle": (_str, False), "ode_dt": (_float, False)},
    "numerics": {
        "threshold": (_float, False),
        "eps_d": (_float, False),
        "delta": (_float, False),
        "cg_tol": (_float, False),
    },
}

_IC_KEYS = {
    "disk": ("radius",),
    "annulus": ("r_minus", "r_plus"),
    "double_annulus": ("radii",),
    "tanh_slab": ("halfwidth",),
    "rectangles": ("boxes",),
    "flower": (),
}


def parse_config(text: str, base_dir: Path | None = None) -> ExperimentSpec:
    """Parse and validate a config text (see the module docstring).

    Relative output directories are resolved against ``base_dir`` when given.
    """
    values: dict[tuple[str, str], object] = {}
    lines: dict[tuple[str, str], int] = {}
    section = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", line=lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key not in _SCHEMA[section]:
            where = f"[{section}]" if section else "the top level"
            raise ConfigError(f"unknown key in {where}", key, lineno)
        if (section, key) in values:
            raise ConfigError("duplicate key", key, lineno)
        conv, _ = _SCHEMA[section][key]
        try:
            values[(section, key)] = conv(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"cannot parse {value!r}: {exc}", key, lineno) from None
        lines[(section, key)] = lineno

    missing = [
        f"[{sec}] {key}" if sec else key
        for sec, keys in _SCHEMA.items()
        for key, (_, required) in keys.items()
        if required and (sec, key) not in values
    ]
    if missing:
        raise ConfigError("missing required key(s): " + ", ".join(missing))

    def get(sec, key, default=None):
        return values.get((sec, key), default)

    def fail(msg, sec, key):
        raise ConfigError(msg, key, lines.get((sec, key)))

    # grid
    try:
        geometry = Geometry(get("grid", "geometry").lower())
    except ValueError:
        fail("geometry must be interval1d, radial2d or cartesian2d", "grid", "geometry")
    extent = get("grid", "extent")
    if len(extent) != 2:
        fail("extent needs 'lo, hi'", "grid", "extent")
    cells = get("grid", "cells")
    bc = get("grid", "bc", ("noflux",))
    bc_pair = (bc[0], bc[0]) if len(bc) == 1 else bc
    if len(bc_pair) != 2:
        fail("bc needs one tag or 'lo, hi'", "grid", "bc")
    try:
        if geometry is Geometry.CARTESIAN_2D:
            ext_y = get("grid", "extent_y", extent)
            bc_y = get("grid", "bc_y", bc_pair)
            bc_y = (bc_y[0], bc_y[0]) if len(bc_y) == 1 else bc_y
            counts = cells if len(cells) == 2 else cells * 2
            grid = build_grid(geometry, (extent, ext_y), counts, (bc_pair, bc_y))
        else:
            if len(cells) != 1:
                fail("one-axis grids take a single cell count", "grid", "cells")
            grid = build_grid(geometry, extent, cells[0], bc_pair)
    except ConfigurationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "grid", lines.get(("grid", "geometry"))) from None

    # model
    try:
        params = ModelParams(
            gamma=get("model", "gamma"),
            g0=get("model", "g0", 1.0),
            c_b=get("model", "c_b", 1.0),
            growth_kind=get("model", "growth", "constant").lower(),
            nutrient_kind=get("model", "nutrient", "constant").lower(),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "model", lines.get(("model", "gamma"))) from None

    # initial condition
    kind = get("initial", "kind").lower()
    if kind not in _IC_KEYS:
        fail(f"unknown initial condition {kind!r}", "initial", "kind")
    for key in _IC_KEYS[kind]:
        if ("initial", key) not in values:
            fail(f"initial condition {kind!r} needs '{key}'", "initial", "kind")
    amp = {"amplitude": get("initial", "amplitude")} if ("initial", "amplitude") in values else {}
    if kind == "disk":
        ic = Disk(get("initial", "radius"), **amp)
    elif kind == "annulus":
        ic = Annulus(get("initial", "r_minus"), get("initial", "r_plus"), **amp)
    elif kind == "double_annulus":
        radii = get("initial", "radii")
        if len(radii) != 4 or list(radii) != sorted(radii):
            fail("radii needs four increasing values", "initial", "radii")
        ic = DoubleAnnulus(radii, **amp)
    elif kind == "tanh_slab":
        ic = TanhSlab(
            get("initial", "halfwidth"),
            center=get("initial", "center", 0.0),
            steepness=get("initial", "steepness", 100.0),
            **amp,
        )
    elif kind == "rectangles":
        ic = Rectangles(get("initial", "boxes"), **amp)
    else:
        ic = Flower(
            base_radius=get("initial", "base_radius", 0.5),
            petal_amplitude=get("initial", "petal_amplitude", 0.5),
            petals=get("initial", "petals", 4),
            **amp,
        )

    oracle_name = get("compare", "oracle", "none").lower()
    try:
        oracle = None if oracle_name == "none" else OdeKind(oracle_name)
    except ValueError:
        fail(f"unknown oracle {oracle_name!r}", "compare", "oracle")

    name = get("", "name")
    directory = get("output", "directory")
    out = Path(directory) if directory else Path("out") / name
    if base_dir is not None and not out.is_absolute() and directory:
        out = base_dir / out

    try:
        return ExperimentSpec(
            name=name,
            grid=grid,
            params=params,
            initial=ic,
            dt=get("time", "dt"),
            t_end=get("time", "t_end"),
            snapshot_times=get("time", "snapshots", ()),
            front_every=get("time", "front_every", 100),
            output_dir=out,
            formats=get("output", "formats", ("csv", "json")),
            oracle=oracle,
            ode_dt=get("compare", "ode_dt", 1e-4),
            threshold=get("numerics", "threshold", 0.5),
            eps_d=get("numerics", "eps_d", 1e-7),
            delta=get("numerics", "delta", 1e-14),
            cg_tol=get("numerics", "cg_tol", 1e-10),
        )
    except ConfigError as exc:
        if exc.key is not None and exc.line is None:
            sec = next((s for s, keys in _SCHEMA.items() if exc.key in keys), None)
            line = lines.get((sec, exc.key)) if sec is not None else None
            raise ConfigError(str(exc).split(": ", 1)[-1], exc.key, line) from None
        raise


def load_config(path: str | Path) -> ExperimentSpec:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"))
