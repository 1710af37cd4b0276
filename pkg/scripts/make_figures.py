"""Rigid-model figures: wheel and stool responses for c1 = 3 and c1 = 1, and the
stool angle under the three damping laws.

    python3 scripts/make_figures.py --outdir results
"""

import argparse
import os

from selfrecovery.experiments import (PlotSeries, emit_plot_svg, emit_trace_csv, fig13_series,
                                      preset_config, run_experiment)
from selfrecovery.rigid_sim import detect_recovery


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    wheel, stool = [], []
    for name in ("overshoot", "oscillation"):
        cfg = preset_config(f"fig-10-{name}")
        trace = run_experiment(cfg)
        emit_trace_csv(trace, os.path.join(args.outdir, f"fig10_{name}.csv"))
        label = f"c1 = {cfg.derivative_gain:g}"
        wheel.append(PlotSeries(label, trace.time, trace.desired_angle - trace.wheel_angle))
        stool.append(PlotSeries(label, trace.time, trace.stool_angle))
        crossings = detect_recovery(trace, signal="wheel_error").zero_crossing_count
        print(f"{label}: wheel-error sign changes after the stop = {crossings}")
    emit_plot_svg(wheel, os.path.join(args.outdir, "fig10_wheel_error.svg"),
                  title="wheel tracking error", ylabel="theta_d - theta_w (rad)")
    emit_plot_svg(stool, os.path.join(args.outdir, "fig11_stool_angle.svg"),
                  title="stool angle", ylabel="phi_s (rad)")
    emit_plot_svg(fig13_series(), os.path.join(args.outdir, "fig13_damping_laws.svg"),
                  title="stool angle for three damping laws", ylabel="phi_s (rad)")
    print(f"figures written to {args.outdir}/")


if __name__ == "__main__":
    main()
