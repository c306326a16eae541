"""Experiment orchestration and plot-ready CSV/JSON output.

A run directory contains

* ``snapshot_XX.csv``: coordinates, then ``n`` and ``c`` (row-major in 2D);
* ``front.csv``: ``t``, the tracked boundary positions (or the number of
  super-threshold components in 2D) and the total mass;
* ``oracle.csv``: the analytic front trace at the same times, when enabled;
* ``summary.json``: masses, bounds, front errors and solver statistics.

Identical specs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence, TextIO

import numpy as np

from .config import ExperimentSpec, load_config, oracle_initial_state, parse_config
from .core import Geometry
from .front import front_error, numerical_trace
from .heleshaw import FrontOde, FrontTrace, integrate_front_ode
from .simulation import SimulationResult, ball_dimension, run_simulation

OUT_ENV = "HELESHAW_OUT"


def emit_csv(table: Mapping[str, Sequence[float]], path: str | Path | TextIO) -> None:
    """Write named columns as CSV with a header and round-trip exact values.

    ``path`` may also be an open text stream.
    """
    names = list(table)
    cols = [np.asarray(table[k], dtype=float).ravel() for k in names]
    lengths = {len(c) for c in cols}
    if len(lengths) > 1:
        raise ValueError(f"columns differ in length: {sorted(lengths)}")
    if hasattr(path, "write"):
        _write_rows(path, names, cols)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_rows(fh, names, cols)


def _write_rows(fh, names, cols) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(names)
    for row in zip(*cols):
        w.writerow(["%.17g" % v for v in row])


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), len(header))
    return {name: data[:, j] for j, name in enumerate(header)}


def boundary_labels(count: int) -> list[str]:
    if count == 1:
        return ["R"]
    if count == 2:
        return ["r_minus", "r_plus"]
    return [f"r{i + 1}" for i in range(count)]


def oracle_trace(spec: ExperimentSpec) -> FrontTrace | None:
    if spec.oracle is None:
        return None
    ode = FrontOde(spec.oracle, spec.params.g0, spec.params.c_b, ball_dimension(spec.grid.geometry))
    return integrate_front_ode(ode, oracle_initial_state(spec.initial), spec.t_end, spec.ode_dt)


def _snapshot_table(state) -> dict[str, np.ndarray]:
    grid = state.n.grid
    if grid.geometry is Geometry.CARTESIAN_2D:
        x, y = grid.mesh()
        coords = {"x": x, "y": y}
    elif grid.geometry is Geometry.RADIAL_2D:
        coords = {"r": grid.centers(0)}
    else:
        coords = {"x": grid.centers(0)}
    return {**coords, "n": state.n.values, "c": state.c.values}


def _clean(obj):
    # JSON has no NaN/inf; map them to null
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class ExperimentOutcome:
    spec: ExperimentSpec
    result: SimulationResult
    out_dir: Path
    summary: dict
    analytic: FrontTrace | None

    @property
    def exit_code(self) -> int:
        return 0 if self.summary["ok"] else 1


def resolve_output_dir(spec: ExperimentSpec, out_dir: str | Path | None = None) -> Path:
    """Explicit argument, then ``$HELESHAW_OUT/<name>``, then the configured directory."""
    if out_dir is not None:
        return Path(out_dir)
    env = os.environ.get(OUT_ENV)
    if env:
        return Path(env) / spec.name
    return Path(spec.output_dir) if spec.output_dir is not None else Path("out") / spec.name


def run_experiment(spec: ExperimentSpec, out_dir: str | Path | None = None) -> ExperimentOutcome:
    """Run ``spec`` and write its artifacts.

    Invariant violations stop the run; what was recorded up to then is still
    written and ``summary["ok"]`` is false.
    """
    out = resolve_output_dir(spec, out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_simulation(spec, strict=False)
    analytic = oracle_trace(spec)
    rec = result.fronts
    times = np.asarray(rec.times)
    labels = boundary_labels(spec.track_count())
    write_csv = "csv" in spec.formats

    snap_info = []
    for i, snap in enumerate(result.snapshots):
        name = f"snapshot_{i:02d}.csv"
        if write_csv:
            emit_csv(_snapshot_table(snap), out / name)
        snap_info.append({"file": name, "time": snap.time, "step": snap.step_index})

    if spec.grid.ndim == 2:
        front_table = {"t": times, "components": rec.components, "mass": rec.masses}
    else:
        fronts = np.asarray(rec.fronts, dtype=float).reshape(len(times), len(labels))
        front_table = {"t": times, **{lab: fronts[:, j] for j, lab in enumerate(labels)}, "mass": rec.masses}
    if write_csv:
        emit_csv(front_table, out / "front.csv")

    errors = None
    oracle_event = None
    if analytic is not None:
        oracle_event = analytic.event
        inside = times <= analytic.times[-1] + 1e-12
        values = np.full((len(times), len(labels)), np.nan)
        values[inside] = analytic.at(times[inside])
        if write_csv:
            emit_csv({"t": times, **{lab: values[:, j] for j, lab in enumerate(labels)}}, out / "oracle.csv")
        finite = np.all(np.isfinite(fronts), axis=1) & inside
        if finite.any():
            err = front_error(numerical_trace(times[finite], fronts[finite], labels), analytic)
            errors = {
                "labels": labels,
                "max_abs": err.max_abs.tolist(),
                "final_abs": err.final_abs.tolist(),
                "final_time": float(times[finite][-1]),
            }

    chk = result.checker
    c_ok = chk.c_min >= 0.0 and chk.c_max <= spec.params.c_b
    n_ok = chk.min_density >= 0.0
    ok = result.error is None and not chk.failures and n_ok and c_ok
    summary = {
        "name": spec.name,
        "geometry": spec.grid.geometry.value,
        "cells": list(spec.grid.shape),
        "dt": spec.dt,
        "t_end": spec.t_end,
        "t_reached": result.state.time,
        "steps": result.state.step_index,
        "gamma": spec.params.gamma,
        "mass": {"initial": rec.masses[0] if rec.masses else None, "final": rec.masses[-1] if rec.masses else None},
        "min_density": chk.min_density,
        "c_bounds": [chk.c_min, chk.c_max],
        "checks": {
            "density_nonnegative": n_ok,
            "nutrient_in_bounds": c_ok,
            "mass_bound": chk.max_mass_excess <= chk.rtol,
            "mass_nondecreasing": not chk.mass_decreased,
        },
        "max_mass_excess": chk.max_mass_excess,
        "linear_iterations": {"total": chk.linear_iterations, "max_per_step": chk.max_linear_iterations},
        "front_error": errors,
        "oracle_event": oracle_event,
        "snapshots": snap_info,
        "error": None if result.error is None else str(result.error),
        "ok": ok,
    }
    if spec.grid.ndim == 2 and rec.components:
        summary["final_components"] = rec.components[-1]
    if "json" in spec.formats:
        text = json.dumps(_clean(summary), indent=2, sort_keys=True, allow_nan=False)
        (out / "summary.json").write_text(text + "\n", encoding="utf-8")
    return ExperimentOutcome(spec, result, out, summary, analytic)


# --- shipped figure configs --------------------------------------------------

PAPER_FIGURES: dict[str, tuple[str, ...]] = {
    "fig1": ("fig1_gamma20", "fig1_gamma40", "fig1_gamma80"),
    "fig2": ("fig2_gamma20", "fig2_gamma40", "fig2_gamma80", "fig2_fine"),
    "fig3": ("fig3",),
    "fig4": ("fig4_gamma20", "fig4_gamma40", "fig4_gamma80"),
    "fig5": ("fig5_gamma20", "fig5_gamma40", "fig5_gamma80"),
    "fig6": ("fig6_invitro", "fig6_invivo"),
    "fig7": ("fig7_invitro", "fig7_invivo"),
    "fig8": ("fig8",),
    "fig9": ("fig9",),
}

# figures whose runs are merged into one speed-comparison table
SPEED_TABLES = {"fig6": ("fig6_invitro", "fig6_invivo"), "fig7": ("fig7_invitro", "fig7_invivo")}


def paper_config_text(name: str) -> str:
    return resources.files("hstumor").joinpath("paper", f"{name}.cfg").read_text(encoding="utf-8")


def paper_spec(name: str) -> ExperimentSpec:
    return parse_config(paper_config_text(name))


def paper_specs(figure: str) -> list[ExperimentSpec]:
    if figure not in PAPER_FIGURES:
        raise KeyError(f"unknown figure {figure!r}; choose from {', '.join(PAPER_FIGURES)}")
    return [paper_spec(n) for n in PAPER_FIGURES[figure]]


def speed_table(run_dirs: Mapping[str, str | Path]) -> dict[str, np.ndarray]:
    """Merge the single-front traces of several runs on their shared times.

    ``run_dirs`` maps a column prefix to a run directory holding
    ``front.csv`` (and optionally ``oracle.csv``).
    """
    table: dict[str, np.ndarray] = {}
    for key, d in run_dirs.items():
        d = Path(d)
        front = read_csv(d / "front.csv")
        if "t" not in table:
            table["t"] = front["t"]
        elif front["t"].shape != table["t"].shape or np.any(front["t"] != table["t"]):
            raise ValueError("runs do not share a time grid")
        table[f"R_{key}"] = front["R"]
        if (d / "oracle.csv").exists():
            table[f"R_{key}_ode"] = read_csv(d / "oracle.csv")["R"]
    return table
