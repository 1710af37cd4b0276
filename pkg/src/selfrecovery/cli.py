"""Command-line entry point.

Exit codes: 0 success, 1 configuration or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import analytic, experiments
from .analytic import EigenSearchError
from .energy_audit import _cumulative
from .model_core import ConfigurationError, DomainError, IntegrationError
from .rigid_sim import detect_boundedness, detect_recovery


def _simulate(args) -> int:
    config = experiments.load_config(args.config)
    trace = experiments.run_experiment(config)
    out = args.out or config.trace_out
    if out:
        experiments.emit_trace_csv(trace, out)
    bounded = detect_boundedness(trace, config.rate_tolerance, config.hold_window)
    recovery = detect_recovery(trace, config.settle_band)
    print(f"model: {config.model}  samples: {len(trace)}")
    if bounded.settled:
        print(f"boundedness angle: {bounded.angle!r} rad at t = {bounded.time!r} s")
    else:
        print("boundedness angle: not reached")
    print(f"final stool angle: {float(trace.stool_angle[-1])!r} rad")
    print(f"stool zero crossings after stop: {recovery.zero_crossing_count}")
    return 0


def _validate(args) -> int:
    config = experiments.load_config(args.config)
    pairs = experiments.read_pairs_csv(args.pairs)
    rows = experiments.run_validation_table(config, pairs, args.jobs)
    experiments.emit_table_csv(rows, args.out)
    for r in rows:
        pde = f"{r.angle_pde:.2f}" if r.settled else "unsettled"
        err = f"{r.percent_error:.2f}" if r.settled else "-"
        print(f"{r.inner_cm:g} {r.outer_cm:g}  gap {r.gap_percent:.2f}%  "
              f"pde {pde}  keff {r.angle_keff:.2f}  err {err}%")
    return 0


def _eigenvalues(args) -> int:
    config = experiments.load_config(args.config)
    modes = analytic.eigenvalues(config.fluid(), args.count)
    print("n,kappa,lambda,mixing_ratio,m,l")
    for m in modes:
        a, b = m.forcing_coefficients
        print(f"{m.index},{m.wavenumber!r},{m.decay_rate!r},{m.mixing_ratio!r},{a!r},{b!r}")
    return 0


def _energy_audit(args) -> int:
    cols = experiments.read_trace_csv(args.trace)
    for name in ("time", "torque_u", "wheel_rate", "ke", "le"):
        if name not in cols:
            raise ConfigurationError(f"{args.trace}: missing column {name!r}")
    t = cols["time"]
    ie = _cumulative(cols["torque_u"] * cols["wheel_rate"], t) if len(t) else t
    residual = ie - cols["ke"] - cols["le"]
    header = ["time", "ie", "ke", "le"]
    columns = [t, ie, cols["ke"], cols["le"]]
    if "fluid_ke" in cols:
        residual = residual - cols["fluid_ke"] - cols["fluid_diss"]
        header += ["fluid_ke", "fluid_diss"]
        columns += [cols["fluid_ke"], cols["fluid_diss"]]
    header.append("residual")
    columns.append(residual)
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in zip(*columns):
                writer.writerow([repr(float(x)) for x in row])
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {args.out!r}: {exc.strerror}") from None
    if len(t):
        peak = float(np.max(np.abs(ie))) or 1.0
        worst = float(np.max(np.abs(residual)))
        print(f"max |residual| = {worst!r} J ({worst / peak:.3e} of peak input energy)")
    return 0


def _plot(args) -> int:
    cols = experiments.read_trace_csv(args.trace)
    names = [c.strip() for c in args.columns.split(",") if c.strip()]
    for name in names:
        if name not in cols:
            raise ConfigurationError(f"{args.trace}: no column {name!r}")
    series = [experiments.PlotSeries(n, cols["time"], cols[n]) for n in names]
    experiments.emit_plot_svg(series, args.out, title=args.title or args.trace)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfrecovery",
                                     description="Stool-wheel self-recovery simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="trace CSV")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("validate-keff", help="PDE vs k_eff boundedness angles")
    p.add_argument("--config", required=True)
    p.add_argument("--pairs", required=True, help="CSV of R_i_cm,R_o_cm")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_validate)

    p = sub.add_parser("eigenvalues", help="decay modes of the annulus")
    p.add_argument("--config", required=True)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=_eigenvalues)

    p = sub.add_parser("energy-audit", help="recompute the energy balance of a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_energy_audit)

    p = sub.add_parser("plot", help="SVG line plot of trace columns against time")
    p.add_argument("--trace", required=True)
    p.add_argument("--columns", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--title", default="")
    p.set_defaults(func=_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, EigenSearchError, DomainError, FloatingPointError) as exc:
        where = getattr(exc, "time", None)
        suffix = f" (t = {where!r})" if where is not None else ""
        print(f"numerical failure: {exc}{suffix}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
