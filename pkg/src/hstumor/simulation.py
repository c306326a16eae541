"""Time loop coupling the nutrient solve and the density step.

Each step first solves the nutrient for the current density, then advances
the density with that nutrient.  Times are ``t_k = k * dt`` exactly (no
accumulated sums).  Observers see the initial state and every new state.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .config import ExperimentSpec
from .core import Field, Geometry, ModelParams, SimState, total_mass
from .density import StepReport, check_dt, step_density
from .front import count_components, extract_front
from .nutrient import solve_nutrient

log = logging.getLogger(__name__)


class InvariantViolation(RuntimeError):
    def __init__(self, message: str, step_index: int):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index


class Observer(Protocol):
    def observe(self, state: SimState, report: StepReport | None) -> None: ...


@dataclass
class SnapshotRecorder:
    """Copies of the state at the steps nearest to the requested times."""

    times: Sequence[float]
    dt: float
    snapshots: list[SimState] = field(default_factory=list)

    def __post_init__(self):
        self._wanted = {int(round(t / self.dt)) for t in self.times}

    def observe(self, state, report):
        if state.step_index in self._wanted:
            self.snapshots.append(SimState(state.time, state.n.copy(), state.c.copy(), state.step_index))


@dataclass
class FrontRecorder:
    """Samples front positions (and the mass) every ``every`` steps.

    On one-axis grids the ``count`` outermost crossings are kept, or just the
    outermost falling one when ``count == 1``.  Rows whose crossing count does
    not match are stored as NaN.  On 2D grids the number of super-threshold
    components is recorded instead.
    """

    every: int
    count: int = 1
    threshold: float = 0.5
    times: list[float] = field(default_factory=list)
    fronts: list[list[float]] = field(default_factory=list)
    masses: list[float] = field(default_factory=list)
    components: list[int] = field(default_factory=list)

    def observe(self, state, report):
        if state.step_index % self.every:
            return
        self.record(state)

    def record(self, state: SimState) -> None:
        if self.times and state.time <= self.times[-1]:
            return
        self.times.append(state.time)
        self.masses.append(total_mass(state.n))
        if state.n.grid.ndim == 2:
            self.components.append(count_components(state.n, self.threshold))
            return
        fs = extract_front(state.n, self.threshold)
        if self.count == 1:
            outer = fs.outer
            self.fronts.append([np.nan if outer is None else outer])
        elif len(fs) == self.count:
            self.fronts.append(list(fs.positions))
        else:
            self.fronts.append([np.nan] * self.count)


@dataclass
class InvariantChecker:
    """Positivity, nutrient bounds and the discrete mass bound.

    ``m^{k+1} <= m^k / (1 - dt G_m)`` holds for every step of the scheme;
    with no-flux boundaries and nonnegative growth also ``m^{k+1} >= m^k``.
    Violations raise :class:`InvariantViolation` when ``strict``; otherwise
    they are collected in ``failures``.
    """

    params: ModelParams
    dt: float
    rtol: float = 1e-8
    strict: bool = True
    failures: list[str] = field(default_factory=list)
    min_density: float = np.inf
    c_min: float = np.inf
    c_max: float = -np.inf
    max_mass_excess: float = 0.0
    mass_decreased: bool = False
    linear_iterations: int = 0
    max_linear_iterations: int = 0
    steps: int = 0

    def _fail(self, msg: str, step: int) -> None:
        if self.strict:
            raise InvariantViolation(msg, step)
        self.failures.append(f"step {step}: {msg}")

    def observe(self, state, report):
        k = state.step_index
        n, c = state.n.values, state.c.values
        nmin = float(n.min())
        self.min_density = min(self.min_density, nmin)
        self.c_min = min(self.c_min, float(c.min()))
        self.c_max = max(self.c_max, float(c.max()))
        if not np.all(np.isfinite(n)):
            self._fail("density is not finite", k)
        if nmin < 0.0:
            self._fail(f"negative density {nmin!r}", k)
        if c.min() < 0.0 or c.max() > self.params.c_b:
            self._fail(f"nutrient outside [0, c_B]: [{c.min()!r}, {c.max()!r}]", k)
        if report is None:
            return
        self.steps += 1
        self.linear_iterations += report.linear_iterations
        self.max_linear_iterations = max(self.max_linear_iterations, report.linear_iterations)
        bound = report.mass_before / (1.0 - self.dt * self.params.g_max)
        excess = (report.mass_after - bound) / max(bound, 1e-300)
        self.max_mass_excess = max(self.max_mass_excess, excess)
        if excess > self.rtol:
            self._fail(f"mass {report.mass_after!r} exceeds the bound {bound!r}", k)
        if report.mass_after < report.mass_before * (1.0 - self.rtol):
            self.mass_decreased = True


def initial_state(spec: ExperimentSpec) -> SimState:
    n0 = Field(spec.grid, spec.initial.evaluate(spec.grid))
    c0 = solve_nutrient(n0, spec.params, eps_d=spec.eps_d, tol=spec.cg_tol)
    return SimState(0.0, n0, c0, 0)


def advance(
    state: SimState,
    params: ModelParams,
    dt: float,
    n_steps: int,
    observers: Sequence[Observer] = (),
    *,
    eps_d: float = 1e-7,
    delta: float = 1e-14,
    tol: float = 1e-10,
) -> SimState:
    """Take ``n_steps`` steps of size ``dt`` from ``state``."""
    check_dt(dt, params)
    k0 = state.step_index
    t0 = state.time - k0 * dt
    for k in range(k0 + 1, k0 + n_steps + 1):
        c = solve_nutrient(state.n, params, eps_d=eps_d, tol=tol)
        n, report = step_density(state, c, dt, params, delta=delta, tol=tol)
        state = SimState(t0 + k * dt, n, c, k)
        for obs in observers:
            obs.observe(state, report)
    return state


class _LastState:
    state: SimState | None = None

    def observe(self, state, report):
        self.state = state


@dataclass
class SimulationResult:
    state: SimState
    snapshots: list[SimState]
    fronts: FrontRecorder
    checker: InvariantChecker
    error: InvariantViolation | None = None


def run_simulation(
    spec: ExperimentSpec,
    observers: Sequence[Observer] = (),
    strict: bool = True,
) -> SimulationResult:
    """Run ``spec`` to ``t_end`` with the standard recorders attached.

    With ``strict=False`` an invariant violation stops the run but is
    returned in ``result.error`` instead of being raised.
    """
    state = initial_state(spec)
    snaps = SnapshotRecorder(spec.snapshot_times, spec.dt)
    fronts = FrontRecorder(spec.front_every, spec.track_count(), spec.threshold)
    checker = InvariantChecker(spec.params, spec.dt)
    last = _LastState()
    chain = [last, checker, snaps, fronts, *observers]
    log.info("%s: %d steps of dt=%g on %s grid %s", spec.name, spec.n_steps, spec.dt,
             spec.grid.geometry.value, spec.grid.shape)
    error = None
    try:
        for obs in chain:
            obs.observe(state, None)
        state = advance(
            state, spec.params, spec.dt, spec.n_steps, chain,
            eps_d=spec.eps_d, delta=spec.delta, tol=spec.cg_tol,
        )
    except InvariantViolation as exc:
        if strict:
            raise
        error = exc
        state = last.state
    fronts.record(state)
    return SimulationResult(state, snaps.snapshots, fronts, checker, error)


def ball_dimension(geometry: Geometry) -> int:
    return 1 if geometry is Geometry.INTERVAL_1D else 2
