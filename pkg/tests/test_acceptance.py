"""End-to-end acceptance runs on the shipped figure configurations.

Each test records one pass/fail line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""
import dataclasses
import time

import numpy as np
import pytest

from hstumor.core import Field, ModelParams, SimState, build_grid, total_mass
from hstumor.density import step_density
from hstumor.experiment import oracle_trace, paper_spec
from hstumor.front import count_components, extract_front
from hstumor.heleshaw import FrontOde, front_speed_1d, integrate_front_ode, nutrient_profile
from hstumor.nutrient import solve_nutrient
from hstumor.simulation import run_simulation
from hstumor.specfun import i0, i1, k0, k1


def _snapshot_at(result, t):
    return min(result.snapshots, key=lambda s: abs(s.time - t))


def _tol(spec):
    return 2.0 * spec.grid.spacing[0]


def test_expanding_disk(record_criterion):
    spec = paper_spec("fig1_gamma80")
    assert (spec.params.gamma, spec.dt, spec.grid.spacing[0]) == (80, 2.5e-5, pytest.approx(0.05))
    res = run_simulation(spec)
    snap = _snapshot_at(res, 0.4975)
    front = extract_front(snap.n).outer
    exact = 0.8 * np.exp(snap.time / 2)
    err = abs(front - exact)
    record_criterion("1", err <= _tol(spec),
                     f"t={snap.time:.4f} front={front:.4f} exact={exact:.4f} |err|={err:.4f} <= {_tol(spec):.2f}")
    assert err <= _tol(spec)
    # plateau sits just below the initial amplitude
    assert 0.9 < snap.n.values.max() < 0.99 * np.exp(snap.time) + 1e-12


def test_single_annulus(record_criterion):
    spec = dataclasses.replace(paper_spec("fig2_gamma80"), t_end=0.8, snapshot_times=(0.8,))
    res = run_simulation(spec)
    fronts = extract_front(res.state.n).positions
    ode = integrate_front_ode(FrontOde("annulus"), [0.6, 1.0], 0.8, 1e-4)
    assert ode.event is None
    err = np.abs(fronts - ode.radii[-1])
    area = np.pi * (ode.radii[:, 1] ** 2 - ode.radii[:, 0] ** 2)
    rel = np.max(np.abs(area / (0.64 * np.pi * np.exp(ode.times)) - 1.0))
    ok_front = len(fronts) == 2 and np.all(err <= _tol(spec))
    record_criterion("2", ok_front, f"fronts={np.round(fronts, 4).tolist()} ode={np.round(ode.radii[-1], 4).tolist()} "
                     f"max|err|={err.max():.4f} <= {_tol(spec):.2f}")
    record_criterion("2", rel <= 1e-8, f"ODE area identity max rel dev={rel:.2e} <= 1e-8")
    assert ok_front
    assert rel <= 1e-8


def test_double_annulus(record_criterion):
    spec = paper_spec("fig3")
    res = run_simulation(spec)
    fronts = extract_front(res.state.n).positions
    ode = oracle_trace(spec)
    assert ode.event is None
    err = np.abs(fronts - ode.radii[-1]) if len(fronts) == 4 else np.array([np.inf])
    ok = bool(np.all(err <= _tol(spec)))
    record_criterion("3", ok, f"fronts={np.round(fronts, 4).tolist()} ode={np.round(ode.radii[-1], 4).tolist()} "
                     f"max|err|={err.max():.4f} <= {_tol(spec):.3f}")
    assert ok


def _vitro_vivo(names):
    out = {}
    for name in names:
        spec = paper_spec(name)
        res = run_simulation(spec)
        t = np.asarray(res.fronts.times)
        r = np.asarray(res.fronts.fronts)[:, 0]
        out[spec.params.nutrient_kind.value] = (spec, t, r, oracle_trace(spec))
    return out


def _check_pair(criterion, runs, record):
    ok_all = True
    for kind in ("invitro", "invivo"):
        spec, t, r, ode = runs[kind]
        err = abs(r[-1] - ode.at(t[-1])[0])
        ok = t[-1] == pytest.approx(0.5) and err <= _tol(spec)
        ok_all &= ok
        record(criterion, ok, f"{kind}: front={r[-1]:.4f} ode={ode.at(t[-1])[0]:.4f} |err|={err:.4f}")
    (_, t1, r1, _), (_, t2, r2, _) = runs["invitro"], runs["invivo"]
    assert np.array_equal(t1, t2)
    trails = bool(np.all(r2[1:] < r1[1:]))
    record(criterion, trails, f"in vivo trails in vitro at all {len(t1) - 1} sampled times t>0")
    return ok_all and trails


def test_vitro_vivo_1d(record_criterion):
    runs = _vitro_vivo(["fig6_invitro", "fig6_invivo"])
    ok = _check_pair("4", runs, record_criterion)
    ratio = front_speed_1d(6.0, "vitro") / front_speed_1d(6.0, "vivo")
    ok_ratio = abs(ratio - 2.0) <= 0.02
    record_criterion("4", ok_ratio, f"speed ratio at R=6: {ratio:.6f} (2 within 1%)")
    assert ok and ok_ratio


def test_vitro_vivo_radial(record_criterion):
    runs = _vitro_vivo(["fig7_invitro", "fig7_invivo"])
    ok = _check_pair("5", runs, record_criterion)
    dev = max(abs((k0(r) * i1(r) + k1(r) * i0(r)) * r - 1.0) for r in (0.5, 1.0, 2.0, 5.0))
    record_criterion("5", dev <= 1e-8, f"Wronskian denominator * R - 1: max {dev:.1e} <= 1e-8")
    assert ok and dev <= 1e-8


def test_property_suite(record_criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)

    # (a, b) positivity and nutrient bounds over 1000 random steps
    g = build_grid("interval1d", (-2, 2), 24, ("noflux", "dirichlet_zero"))
    min_n, c_lo, c_hi = np.inf, np.inf, -np.inf
    for trial in range(10):
        kind = ("invitro", "invivo", "constant")[trial % 3]
        p = ModelParams(gamma=float(rng.uniform(1, 100)), g0=float(rng.uniform(0.1, 3)),
                        growth_kind="linear", nutrient_kind=kind)
        state = SimState(0.0, Field(g, rng.random(g.shape) * (rng.random(g.shape) < 0.5)), Field.zeros(g))
        for _ in range(100):
            c = solve_nutrient(state.n, p)
            c_lo, c_hi = min(c_lo, c.values.min()), max(c_hi, c.values.max() / p.c_b)
            n, rep = step_density(state, c, float(rng.uniform(0.01, 0.999)) / p.g_max, p)
            min_n = min(min_n, rep.min_density)
            state = SimState(0.0, n, c)
    ok_a, ok_b = min_n >= 0.0, c_lo >= 0.0 and c_hi <= 1.0
    record_criterion("6a", ok_a, f"min n over 1000 steps = {min_n:.3e}")
    record_criterion("6b", ok_b, f"c/c_B in [{c_lo:.3g}, {c_hi:.3g}]")

    # (c) mass identity and conservation without growth
    g = build_grid("radial2d", (0, 2), 40)
    p = ModelParams(gamma=30, g0=1.3)
    r = g.centers()
    state = SimState(0.0, Field(g, np.where(r < 0.7, 0.99, 0.0)), Field.full(g, 1.0))
    dev = 0.0
    for _ in range(50):
        n, rep = step_density(state, state.c, 0.01, p)
        dev = max(dev, abs(rep.mass_after * (1 - 0.01 * p.g0) / rep.mass_before - 1))
        state = SimState(0.0, n, state.c)
    lin = ModelParams(gamma=30, growth_kind="linear")
    zero = Field.zeros(g)
    m0 = total_mass(state.n)
    for _ in range(50):
        n, _ = step_density(state, zero, 0.01, lin)
        state = SimState(0.0, n, zero)
    cons = abs(total_mass(state.n) / m0 - 1)
    record_criterion("6c", dev <= 1e-12 and cons <= 1e-12,
                     f"mass identity rel dev={dev:.1e}, G=0 conservation rel dev={cons:.1e} (<= 1e-12)")

    # (d) symmetry in 1D
    g = build_grid("interval1d", (-5, 5), 200)
    x = g.centers()
    p = ModelParams(gamma=80, growth_kind="linear", nutrient_kind="invitro")
    state = SimState(0.0, Field(g, 0.99 / 2 * (np.tanh(100 * (x + 1)) - np.tanh(100 * (x - 1)))), Field.zeros(g))
    for _ in range(100):
        c = solve_nutrient(state.n, p)
        n, _ = step_density(state, c, 2.5e-5, p)
        state = SimState(0.0, n, c)
    asym = np.max(np.abs(state.n.values - state.n.values[::-1]))
    record_criterion("6d", asym <= 1e-12, f"max |n(x) - n(-x)| = {asym:.1e} <= 1e-12")

    # (e) Bessel identities
    xs = np.linspace(0.1, 20, 40)
    wr = max(abs(x_ * (i0(x_) * k1(x_) + i1(x_) * k0(x_)) - 1) for x_ in xs)
    h = 1e-5
    der = max(
        max(abs((i0(x_ + h) - i0(x_ - h)) / (2 * h) / i1(x_) - 1),
            abs((k0(x_ + h) - k0(x_ - h)) / (2 * h) / -k1(x_) - 1))
        for x_ in xs
    )
    record_criterion("6e", wr <= 1e-8 and der <= 1e-6, f"Wronskian dev={wr:.1e} <= 1e-8, derivative dev={der:.1e} <= 1e-6")
    elapsed = time.perf_counter() - t0

    # (f) second-order convergence of the frozen-density nutrient solve
    ratios = []
    for model in ("vitro", "vivo"):
        for shape in ("1d", "radial2d"):
            half = 4.0 if model == "vitro" else 20.0
            errs = []
            for hh in (0.1, 0.05, 0.025):
                if shape == "1d":
                    gg = build_grid("interval1d", (-half, half), int(round(2 * half / hh)))
                else:
                    gg = build_grid("radial2d", (0, half), int(round(half / hh)), ("noflux", "dirichlet_zero"))
                xc = gg.centers()
                cc = solve_nutrient(Field(gg, np.where(np.abs(xc) < 1.0, 1.0, 0.0)),
                                    ModelParams(growth_kind="linear", nutrient_kind="in" + model), tol=1e-14)
                errs.append(np.abs(cc.values - nutrient_profile(xc, 1.0, model, shape)).max())
            ratios += [errs[0] / errs[1], errs[1] / errs[2]]
    ok_f = all(abs(q - 4.0) <= 0.5 for q in ratios)
    record_criterion("6f", ok_f, f"refinement ratios {np.round(ratios, 2).tolist()} (4 +- 0.5)")
    record_criterion("6", elapsed < 1.0, f"(a)-(e) took {elapsed:.2f} s (< 1 s)")

    assert ok_a and ok_b and dev <= 1e-12 and cons <= 1e-12
    assert asym <= 1e-12 and wr <= 1e-8 and der <= 1e-6 and ok_f
    assert elapsed < 1.0


@pytest.fixture(scope="module")
def rectangles():
    spec = paper_spec("fig8")
    return spec, run_simulation(spec)


def test_rectangles_run_invariants(rectangles, record_criterion):
    spec, res = rectangles
    done = res.state.time == pytest.approx(0.05) and res.state.step_index == spec.n_steps
    masses = np.asarray(res.fronts.masses)
    nondecreasing = bool(np.all(np.diff(masses) >= 0.0)) and not res.checker.mass_decreased
    record_criterion("7", done, f"two-rectangle run reached t={res.state.time:.4f} in {res.state.step_index} steps")
    record_criterion("7", res.checker.min_density >= 0.0, f"min n over the run = {res.checker.min_density:.2e}")
    record_criterion("7", nondecreasing, f"mass {masses[0]:.5f} -> {masses[-1]:.5f}, nondecreasing")
    assert done and res.checker.min_density >= 0.0 and nondecreasing
    assert [round(s.time, 4) for s in res.snapshots] == [0.0, 0.0177, 0.0311, 0.05]


def test_rectangles_merge(rectangles, record_criterion):
    spec, res = rectangles
    comps = count_components(res.state.n, spec.threshold)
    record_criterion("7", comps == 1, f"super-threshold components at t=0.05: {comps} (expected 1, gamma={spec.params.gamma:g})")
    assert comps == 1


def test_flower_run(record_criterion):
    spec = paper_spec("fig9")
    res = run_simulation(spec)
    done = res.state.step_index == spec.n_steps
    record_criterion("7", done and res.error is None,
                     f"flower run completed {res.state.step_index} steps, max CG iterations {res.checker.max_linear_iterations}")
    assert done and res.checker.min_density >= 0.0
