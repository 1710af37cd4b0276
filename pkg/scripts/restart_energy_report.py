"""Minimum average fluid speed that could restart the stool, and a check that the
finite damping laws never restart the stool from full rest.

    python3 scripts/restart_energy_report.py
"""

import math

from selfrecovery.energy_audit import min_average_fluid_speed, restart_episodes
from selfrecovery.experiments import FIG13_PRESETS, preset_config, run_experiment


def main():
    cfg = preset_config("table-1")
    geometry, inertias = cfg.bearing(), cfg.inertias()
    print(f"I_w + I_s = {inertias.total:g} kg m^2, R_i = {geometry.inner_radius:g} m, "
          f"thickness = {geometry.thickness:g} m, height = {geometry.height:g} m, "
          f"rho = {cfg.density:g} kg/m^3")
    for rpm in (1.0, 5.0, 11.0):
        rate = rpm * 2 * math.pi / 60
        v = min_average_fluid_speed(geometry, inertias, rate, cfg.density)
        print(f"stool at {rpm:4g} rpm -> average fluid speed {v:.4f} m/s")
    for name in FIG13_PRESETS:
        trace = run_experiment(preset_config(name))
        print(f"{name}: restart episodes after full rest = {restart_episodes(trace)}")


if __name__ == "__main__":
    main()
