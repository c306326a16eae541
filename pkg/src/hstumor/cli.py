"""Command line entry point ``hstumor``.

Subcommands
-----------
simulate <config> [<config> ...]
    Run experiment configs; ``--jobs N`` runs them in parallel processes.
benchmark <ode-kind>
    Integrate an analytic front ODE and print (or write) its trace as CSV.
compare <num.csv> <ana.csv>
    Max and final absolute front differences between two traces, as JSON.
paper <figure-id>
    Run the shipped configs of a figure (``fig1`` ... ``fig9``).

``HELESHAW_OUT`` redirects run directories to ``$HELESHAW_OUT/<name>``.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import load_config
from .core import ConfigurationError
from .experiment import (
    OUT_ENV,
    PAPER_FIGURES,
    SPEED_TABLES,
    boundary_labels,
    emit_csv,
    paper_spec,
    read_csv,
    resolve_output_dir,
    run_experiment,
    speed_table,
)
from .front import front_error, numerical_trace
from .heleshaw import FrontOde, FrontTrace, OdeKind, TraceSource, integrate_front_ode

log = logging.getLogger("hstumor")


def _run_one(spec):
    outcome = run_experiment(spec)
    return spec.name, str(outcome.out_dir), outcome.exit_code, outcome.summary.get("error")


def _run_specs(specs, jobs: int) -> tuple[int, list]:
    if jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, specs))
    else:
        results = [_run_one(s) for s in specs]
    status = 0
    for name, out, code, err in results:
        print(f"{name}: {'ok' if code == 0 else 'FAILED'} -> {out}")
        if err:
            print(f"  {err}", file=sys.stderr)
        status = max(status, code)
    return status, results


def cmd_simulate(args) -> int:
    try:
        specs = [load_config(p) for p in args.configs]
    except (OSError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _run_specs(specs, args.jobs)[0]


def cmd_paper(args) -> int:
    if args.figure not in PAPER_FIGURES:
        print(f"error: unknown figure {args.figure!r}; choose from {', '.join(PAPER_FIGURES)}", file=sys.stderr)
        return 2
    specs = [paper_spec(name) for name in PAPER_FIGURES[args.figure]]
    status, _ = _run_specs(specs, args.jobs)
    if args.figure in SPEED_TABLES and status == 0:
        dirs = {spec.params.nutrient_kind.value: resolve_output_dir(spec) for spec in specs}
        out = resolve_output_dir(specs[0]).parent / f"{args.figure}_speed.csv"
        emit_csv(speed_table(dirs), out)
        print(f"{args.figure}: speed table -> {out}")
    return status


def cmd_benchmark(args) -> int:
    kind = OdeKind(args.kind)
    ode = FrontOde(kind, g0=args.g0, c_b=args.c_b, d=args.d)
    y0 = args.y0 if args.y0 is not None else _default_y0(kind)
    trace = integrate_front_ode(ode, y0, args.t_end, args.dt, args.every)
    labels = boundary_labels(kind.state_dim)
    table = {"t": trace.times, **{lab: trace.radii[:, j] for j, lab in enumerate(labels)}}
    emit_csv(table, args.out if args.out else sys.stdout)
    if trace.event:
        print(f"stopped early: {trace.event}", file=sys.stderr)
    return 0


def _default_y0(kind: OdeKind) -> list[float]:
    return {
        OdeKind.BALL: [0.8],
        OdeKind.ANNULUS_2D: [0.6, 1.0],
        OdeKind.DOUBLE_ANNULUS_2D: [0.6, 0.9, 1.5, 1.8],
        OdeKind.VITRO_1D: [1.0],
        OdeKind.VIVO_1D: [1.0],
        OdeKind.VITRO_RADIAL_2D: [0.8],
        OdeKind.VIVO_RADIAL_2D: [0.8],
    }[kind]


def _trace_from_csv(path, source) -> FrontTrace:
    data = read_csv(path)
    if "t" not in data:
        raise ValueError(f"{path}: no 't' column")
    labels = [k for k in data if k not in ("t", "mass", "components")]
    radii = np.column_stack([data[k] for k in labels]) if labels else np.empty((len(data["t"]), 0))
    return FrontTrace(data["t"], radii, source, labels=tuple(labels))


def cmd_compare(args) -> int:
    try:
        num = _trace_from_csv(args.numerical, TraceSource.NUMERICAL)
        ana = _trace_from_csv(args.analytic, TraceSource.ANALYTIC)
        keep = np.all(np.isfinite(num.radii), axis=1)
        num = numerical_trace(num.times[keep], num.radii[keep], num.labels)
        ok_ana = np.all(np.isfinite(ana.radii), axis=1)
        ana = FrontTrace(ana.times[ok_ana], ana.radii[ok_ana], TraceSource.ANALYTIC, labels=ana.labels)
        err = front_error(num, ana)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "labels": list(num.labels),
        "max_abs": err.max_abs.tolist(),
        "final_abs": err.final_abs.tolist(),
    }
    if args.tol is not None:
        report["within_tol"] = bool(np.all(err.final_abs <= args.tol))
    print(json.dumps(report, indent=2))
    return 0 if report.get("within_tol", True) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hstumor", description="Tumour growth density model experiments.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run experiment config files")
    s.add_argument("configs", nargs="+", type=Path)
    s.add_argument("--jobs", type=int, default=1, help="parallel processes (default 1)")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("benchmark", help="integrate an analytic front ODE")
    b.add_argument("kind", choices=[k.value for k in OdeKind])
    b.add_argument("--y0", type=float, nargs="+", help="initial radii (default: the shipped examples)")
    b.add_argument("--t-end", type=float, default=0.5)
    b.add_argument("--dt", type=float, default=1e-4)
    b.add_argument("--every", type=int, default=100, help="record every N RK4 steps")
    b.add_argument("--g0", type=float, default=1.0)
    b.add_argument("--c-b", type=float, default=1.0)
    b.add_argument("--d", type=int, default=2, help="dimension for the ball ODE")
    b.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    b.set_defaults(func=cmd_benchmark)

    c = sub.add_parser("compare", help="compare a numerical and an analytic front trace")
    c.add_argument("numerical", type=Path)
    c.add_argument("analytic", type=Path)
    c.add_argument("--tol", type=float, help="exit 1 unless every final error is within tol")
    c.set_defaults(func=cmd_compare)

    f = sub.add_parser("paper", help="run the shipped configs of one figure")
    f.add_argument("figure", help=", ".join(PAPER_FIGURES))
    f.add_argument("--jobs", type=int, default=1)
    f.set_defaults(func=cmd_paper)

    p.epilog = f"Set {OUT_ENV} to redirect outputs to $${OUT_ENV}/<name>."
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
