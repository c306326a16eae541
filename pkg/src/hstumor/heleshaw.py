"""Closed-form Hele-Shaw limit solutions and front ODEs.

Radially symmetric tumours in the incompressible limit: expanding balls,
single and double annuli with constant growth, and slabs/disks with linear
growth under the in vitro and in vivo nutrient models.  These are the
reference solutions the density solver is compared with.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError
from .specfun import i0, i1, k0, k1

MIN_GAP = 1e-8


class OdeKind(enum.Enum):
    BALL = "ball"
    ANNULUS_2D = "annulus"
    DOUBLE_ANNULUS_2D = "double_annulus"
    VITRO_1D = "vitro1d"
    VIVO_1D = "vivo1d"
    VITRO_RADIAL_2D = "vitro_radial"
    VIVO_RADIAL_2D = "vivo_radial"

    @property
    def state_dim(self) -> int:
        return {OdeKind.ANNULUS_2D: 2, OdeKind.DOUBLE_ANNULUS_2D: 4}.get(self, 1)


class Model(enum.Enum):
    VITRO = "vitro"
    VIVO = "vivo"


class Shape(enum.Enum):
    LINE = "1d"
    RADIAL_2D = "radial2d"


class FrontEvent(DomainError):
    """Trajectory left the admissible set (collapse or merge)."""


# --- constant growth -------------------------------------------------------


def ball_radius(t, r0: float, g0: float, d: int):
    """Radius ``r0 exp(g0 t / d)`` of an expanding ball in dimension ``d``."""
    if d not in (1, 2, 3):
        raise DomainError("d must be 1, 2 or 3")
    return r0 * np.exp(g0 * np.asarray(t) / d)


def ball_pressure(r, radius: float, g0: float, d: int):
    """Limit pressure ``g0 (R^2 - r^2) / (2d)`` inside the ball, 0 outside."""
    r = np.asarray(r, dtype=float)
    p = np.where(np.abs(r) <= radius, g0 * (radius**2 - r**2) / (2.0 * d), 0.0)
    return p if p.ndim else float(p)


def annulus_rhs(r_minus: float, r_plus: float, g0: float) -> tuple[float, float]:
    """Radial velocities ``(dr-/dt, dr+/dt)`` of a 2D annulus."""
    if not 0.0 < r_minus < r_plus:
        raise DomainError(f"annulus radii must satisfy 0 < r- < r+, got ({r_minus}, {r_plus})")
    if r_plus - r_minus < MIN_GAP:
        raise DomainError("annulus is degenerate (gap below 1e-8)")
    log_ratio = math.log(r_plus) - math.log(r_minus)
    # m / (4 pi) with m = pi (r+^2 - r-^2)
    mass_term = g0 * (r_plus**2 - r_minus**2) / (4.0 * log_ratio)
    return 0.5 * g0 * r_minus - mass_term / r_minus, 0.5 * g0 * r_plus - mass_term / r_plus


def annulus_pressure(r, r_minus: float, r_plus: float, g0: float):
    """``-g0 r^2/4 + a ln r + b`` vanishing at both radii, 0 outside."""
    r = np.asarray(r, dtype=float)
    log_ratio = math.log(r_plus) - math.log(r_minus)
    a = g0 * (r_plus**2 - r_minus**2) / (4.0 * log_ratio)
    b = -g0 * (r_plus**2 * math.log(r_minus) - r_minus**2 * math.log(r_plus)) / (4.0 * log_ratio)
    inside = (r >= r_minus) & (r <= r_plus)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(inside, -0.25 * g0 * r**2 + a * np.log(np.where(inside, r, 1.0)) + b, 0.0)
    return p if p.ndim else float(p)


def double_annulus_rhs(r1: float, r2: float, r3: float, r4: float, g0: float) -> tuple[float, ...]:
    """Velocities of two nested, separated annuli.

    Each annulus carries its own pressure, so the pairs are decoupled.
    Raises :class:`FrontEvent` when the annuli touch (``r2 >= r3``).
    """
    if not (0.0 < r1 < r2 and 0.0 < r3 < r4):
        raise DomainError(f"double annulus radii out of order: {(r1, r2, r3, r4)}")
    if r2 >= r3:
        raise FrontEvent(f"annuli merged: r2 = {r2} >= r3 = {r3}")
    return annulus_rhs(r1, r2, g0) + annulus_rhs(r3, r4, g0)


# --- linear growth, in vitro / in vivo ---------------------------------------


def front_speed_1d(radius: float, model: Model | str, c_b: float = 1.0, g0: float = 1.0) -> float:
    """Speed of the right edge of a symmetric slab ``[-R, R]``."""
    model = Model(model)
    if not radius > 0.0:
        raise DomainError("R must be positive")
    if model is Model.VITRO:
        return c_b * g0 * math.tanh(radius)
    # sinh(R) e^-R written without overflow
    return c_b * g0 * 0.5 * -math.expm1(-2.0 * radius)


def _vivo_radial_coefficient(radius: float) -> tuple[float, float, float]:
    """``K1(R)/den``, ``I1(R)/den`` and ``den = K0 I1 + K1 I0`` at ``R``."""
    kk0, kk1, ii0, ii1 = k0(radius), k1(radius), i0(radius), i1(radius)
    den = kk0 * ii1 + kk1 * ii0
    return kk1 / den, ii1 / den, den


def front_speed_radial2d(radius: float, model: Model | str, c_b: float = 1.0, g0: float = 1.0) -> float:
    """Speed of the edge of a 2D disk of radius ``R``."""
    model = Model(model)
    if not radius > 0.0:
        raise DomainError("R must be positive")
    if model is Model.VITRO:
        return c_b * g0 * i1(radius) / i0(radius)
    a0, _, _ = _vivo_radial_coefficient(radius)
    return c_b * g0 * a0 * i1(radius)


def pressure_profile(x, radius: float, model: Model | str, shape: Shape | str, c_b: float = 1.0, g0: float = 1.0):
    """Limit pressure at ``x`` (or ``r``) for a tumour of half-width/radius ``R``."""
    model, shape = Model(model), Shape(shape)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    inside = ax <= radius
    xi = np.where(inside, ax, 0.0)
    if shape is Shape.LINE:
        if model is Model.VITRO:
            p = c_b * g0 * (1.0 - np.cosh(xi) / math.cosh(radius))
        else:
            p = c_b * g0 * math.exp(-radius) * (math.cosh(radius) - np.cosh(xi))
    else:
        if model is Model.VITRO:
            p = c_b * g0 * (1.0 - i0(xi) / i0(radius))
        else:
            a0, _, _ = _vivo_radial_coefficient(radius)
            p = c_b * g0 * a0 * (i0(radius) - i0(xi))
    p = np.where(inside, p, 0.0)
    return p if p.ndim else float(p)


def nutrient_profile(x, radius: float, model: Model | str, shape: Shape | str, c_b: float = 1.0):
    """Limit nutrient concentration inside and outside the tumour."""
    model, shape = Model(model), Shape(shape)
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    inside = ax <= radius
    xi = np.where(inside, ax, 0.0)
    xo = np.where(inside, radius, ax)
    if shape is Shape.LINE:
        if model is Model.VITRO:
            c_in = c_b * np.cosh(xi) / math.cosh(radius)
            c_out = np.full_like(ax, c_b)
        else:
            c_in = c_b * math.exp(-radius) * np.cosh(xi)
            # c_b - c_b sinh(R) e^-|x|, in an overflow-free form
            c_out = c_b - c_b * 0.5 * (np.exp(radius - xo) - np.exp(-radius - xo))
    else:
        if model is Model.VITRO:
            c_in = c_b * i0(xi) / i0(radius)
            c_out = np.full_like(ax, c_b)
        else:
            a0, a1, _ = _vivo_radial_coefficient(radius)
            c_in = c_b * a0 * i0(xi)
            c_out = c_b - c_b * a1 * k0(xo)
    c = np.where(inside, c_in, c_out)
    return c if c.ndim else float(c)


# --- ODE integration ------------------------------------------------------


@dataclass(frozen=True)
class FrontOde:
    """Right-hand side of a front-position ODE."""

    kind: OdeKind
    g0: float = 1.0
    c_b: float = 1.0
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", OdeKind(self.kind))

    @property
    def state_dim(self) -> int:
        return self.kind.state_dim

    def validate(self, y) -> None:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.state_dim,):
            raise DomainError(f"{self.kind.value} state has {self.state_dim} component(s), got {y.shape}")
        if np.any(y <= 0.0):
            raise FrontEvent(f"radius collapsed to zero: {y.tolist()}")
        if np.any(np.diff(y) <= 0.0):
            raise FrontEvent(f"radii lost their ordering: {y.tolist()}")

    def __call__(self, y: np.ndarray) -> np.ndarray:
        k = self.kind
        if k is OdeKind.BALL:
            return np.array([self.g0 * y[0] / self.d])
        if k is OdeKind.ANNULUS_2D:
            return np.array(annulus_rhs(y[0], y[1], self.g0))
        if k is OdeKind.DOUBLE_ANNULUS_2D:
            return np.array(double_annulus_rhs(*y, self.g0))
        model = Model.VITRO if k in (OdeKind.VITRO_1D, OdeKind.VITRO_RADIAL_2D) else Model.VIVO
        speed = front_speed_1d if k in (OdeKind.VITRO_1D, OdeKind.VIVO_1D) else front_speed_radial2d
        return np.array([speed(y[0], model, self.c_b, self.g0)])


class TraceSource(enum.Enum):
    ANALYTIC = "analytic"
    NUMERICAL = "numerical"


@dataclass
class FrontTrace:
    """Front positions over time; ``radii`` has one row per time."""

    times: np.ndarray
    radii: np.ndarray
    source: TraceSource = TraceSource.ANALYTIC
    event: str | None = None
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.radii = np.asarray(self.radii, dtype=float)
        if self.radii.ndim == 1:
            self.radii = self.radii[:, None]
        if len(self.times) != len(self.radii):
            raise ValueError("times and radii differ in length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("trace times must be strictly increasing")

    def at(self, t) -> np.ndarray:
        """Linear interpolation in time, per tracked boundary."""
        t = np.asarray(t, dtype=float)
        return np.stack([np.interp(t, self.times, col) for col in self.radii.T], axis=-1)


def _rk4_step(f, y, h):
    k1_ = f(y)
    k2_ = f(y + 0.5 * h * k1_)
    k3_ = f(y + 0.5 * h * k2_)
    k4_ = f(y + h * k3_)
    return y + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_)


def integrate_front_ode(
    ode: FrontOde,
    y0,
    t_end: float,
    dt_ode: float = 1e-4,
    record_every: int = 1,
) -> FrontTrace:
    """Classical fourth-order Runge-Kutta with a fixed step.

    The step is shrunk slightly so that ``t_end`` is hit exactly.  If the
    state leaves the admissible set the trace stops at the last valid state
    and the reason is stored in ``event``.
    """
    y = np.asarray(y0, dtype=float).copy()
    ode.validate(y)
    if t_end <= 0.0:
        return FrontTrace(np.array([0.0]), y[None, :])
    n_steps = max(1, math.ceil(t_end / dt_ode - 1e-9))
    h = t_end / n_steps
    times = [0.0]
    states = [y.copy()]
    event = None
    for k in range(1, n_steps + 1):
        try:
            y_new = _rk4_step(ode, y, h)
            ode.validate(y_new)
        except DomainError as exc:
            event = f"t = {(k - 1) * h:.6g}: {exc}"
            break
        y = y_new
        if k % record_every == 0 or k == n_steps:
            times.append(k * h)
            states.append(y.copy())
    return FrontTrace(np.array(times), np.array(states), TraceSource.ANALYTIC, event)
