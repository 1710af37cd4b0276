"""Energy bookkeeping for both models and the oscillation-energy bound.

Finite model: input energy = kinetic energy + energy lost in damping.
Fluid model: input energy = rigid kinetic energy + fluid kinetic energy +
cumulative viscous dissipation (per unit depth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

from .model_core import (BearingGeometry, DampingLaw, InertiaParams, RigidState,
                         SimulationTrace, damping_coefficient)

if TYPE_CHECKING:
    from .fluid_sim import FluidState, RadialGrid
    from .model_core import AnnulusFluid


@dataclass
class EnergyLedger:
    time: np.ndarray
    kinetic_rigid: np.ndarray
    input_energy_cum: np.ndarray
    lost_energy_cum: np.ndarray
    balance_residual: np.ndarray
    fluid_kinetic: Optional[np.ndarray] = None
    fluid_dissipation_cum: Optional[np.ndarray] = None


def kinetic_energy_rigid(state: RigidState, inertias: InertiaParams) -> float:
    return _kinetic(state.wheel_rate, state.stool_rate, inertias)


def _kinetic(wheel_rate, stool_rate, inertias: InertiaParams):
    return (0.5 * inertias.wheel_inertia * (wheel_rate + stool_rate) ** 2
            + 0.5 * inertias.stool_inertia * stool_rate ** 2)


def _cumulative(values: np.ndarray, time: np.ndarray) -> np.ndarray:
    """Running integral, fourth order inside each smooth segment.

    Segments are separated by repeated sample times (breakpoints where the
    integrand jumps); the zero-width step contributes nothing.
    """
    values = np.asarray(values, dtype=float)
    out = np.zeros(len(time))
    if len(time) < 2:
        return out
    cuts = np.nonzero(np.diff(time) == 0)[0] + 1
    offset = 0.0
    for seg in np.split(np.arange(len(time)), cuts):
        t, f = time[seg], values[seg]
        if len(seg) >= 3:
            part = cumulative_simpson(f, x=t, initial=0.0)
        elif len(seg) == 2:
            part = cumulative_trapezoid(f, t, initial=0.0)
        else:
            part = np.zeros(1)
        out[seg] = offset + part
        offset = out[seg[-1]]
    return out


def input_energy(trace: SimulationTrace) -> np.ndarray:
    """Cumulative motor work: integral of u * (relative wheel rate)."""
    return _cumulative(trace.torque_u * trace.wheel_rate, trace.time)


def lost_energy(trace: SimulationTrace, law: DampingLaw) -> np.ndarray:
    power = np.asarray(damping_coefficient(law, trace.stool_angle)) * trace.stool_rate ** 2
    return _cumulative(power, trace.time)


def fluid_kinetic_energy_field(velocity: np.ndarray, radii: np.ndarray, density: float) -> float:
    # (1/2) rho * integral of v^2 over the annulus, per unit depth
    return float(np.pi * density * np.trapezoid(velocity ** 2 * radii, radii))


def fluid_dissipation_rate_field(velocity: np.ndarray, radii: np.ndarray,
                                 density: float, viscosity: float) -> float:
    # only strain component of an azimuthal flow: e_r_theta = (r/2) d/dr (v/r)
    shear = radii * np.gradient(velocity / radii, radii, edge_order=2)
    return float(2 * np.pi * density * viscosity * np.trapezoid(shear ** 2 * radii, radii))


def fluid_kinetic_energy(state: "FluidState", fluid: "AnnulusFluid", grid: "RadialGrid") -> float:
    return fluid_kinetic_energy_field(np.asarray(state.velocity), grid.radii, fluid.density)


def fluid_dissipation_rate(state: "FluidState", fluid: "AnnulusFluid", grid: "RadialGrid") -> float:
    return fluid_dissipation_rate_field(np.asarray(state.velocity), grid.radii,
                                        fluid.density, fluid.kinematic_viscosity)


def attach_ledger(trace: SimulationTrace, dissipation_rate: Optional[np.ndarray] = None) -> EnergyLedger:
    """Fill the ledger columns of ``trace`` in place and return them.

    Fluid traces must already carry ``fluid_ke``; ``dissipation_rate`` is the
    sampled viscous power, integrated here into ``fluid_diss``.
    """
    ke = _kinetic(trace.wheel_rate, trace.stool_rate, trace.inertias)
    ie = input_energy(trace)
    if trace.law is not None:
        le = lost_energy(trace, trace.law)
    else:
        le = np.zeros_like(ie)
    trace.ke, trace.ie, trace.le = ke, ie, le
    residual = ie - ke - le
    if trace.model == "fluid":
        if dissipation_rate is not None:
            trace.fluid_diss = _cumulative(np.asarray(dissipation_rate), trace.time)
        residual = residual - trace.fluid_ke - trace.fluid_diss
    return EnergyLedger(trace.time, ke, ie, le, residual,
                        trace.fluid_ke, trace.fluid_diss)


def energy_balance_residual(trace: SimulationTrace) -> tuple[float, float]:
    """Worst |I.E. - K.E. - L.E. (- fluid terms)| over the samples, and when it occurs."""
    if len(trace) == 0:
        return 0.0, 0.0
    if trace.ke is None or trace.ie is None:
        attach_ledger(trace)
    residual = trace.ie - trace.ke - trace.le
    if trace.model == "fluid":
        residual = residual - trace.fluid_ke - trace.fluid_diss
    i = int(np.argmax(np.abs(residual)))
    return float(abs(residual[i])), float(trace.time[i])


def min_average_fluid_speed(geometry: BearingGeometry, inertias: InertiaParams,
                            stool_rate: float, density: float) -> float:
    """Smallest thickness-averaged fluid speed whose kinetic energy could restart
    the whole wheel-stool system at ``stool_rate``."""
    ring_area = math.pi * ((geometry.inner_radius + geometry.thickness) ** 2
                           - geometry.inner_radius ** 2)
    fluid_mass = density * ring_area * geometry.height
    return abs(stool_rate) * math.sqrt(inertias.total / fluid_mass)


def restart_episodes(trace: SimulationTrace, rest_tolerance: float = 1e-3,
                     angle_band: float = 1e-2) -> int:
    """Count full-rest moments away from the origin that are followed by renewed stool motion.

    An episode is a sample after the wheel stop where both rates are below
    ``rest_tolerance`` while ``|phi| > angle_band``, after which the stool rate
    again exceeds ``rest_tolerance``.  The recorded large-amplitude oscillations
    would show up as such episodes.
    """
    t_stop = trace.profile.stop_time if trace.profile is not None else 0.0
    after = trace.time >= t_stop
    rest = (after & (np.abs(trace.wheel_rate) < rest_tolerance)
            & (np.abs(trace.stool_rate) < rest_tolerance))
    away = np.abs(trace.stool_angle) > angle_band
    moving = np.abs(trace.stool_rate) >= rest_tolerance
    count = 0
    i, n = 0, len(trace)
    while i < n:
        if rest[i] and away[i]:
            j = i + 1
            while j < n and not moving[j]:
                j += 1
            if j < n:
                count += 1
            i = j
        i += 1
    return count
