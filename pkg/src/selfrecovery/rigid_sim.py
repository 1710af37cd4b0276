"""Finite-dimensional stool-wheel simulation under feedback-linearized PD control."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import energy_audit
from .model_core import (ConfigurationError, DampingLaw, InertiaParams, IntegrationError,
                         PDGains, RampProfile, RigidState, SimulationTrace,
                         damping_coefficient, damping_potential, ramp_position, ramp_rate)


@dataclass(frozen=True)
class RigidRunConfig:
    inertias: InertiaParams
    law: DampingLaw
    gains: PDGains
    profile: RampProfile
    end_time: float
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = math.inf
    samples_per_second: float = 200.0

    def __post_init__(self):
        if not self.end_time > self.profile.stop_time:
            raise ConfigurationError("end_time must be > stop_time")
        if not 0 < self.rtol <= 1e-2:
            raise ConfigurationError("integrator tolerance must lie in (0, 1e-2]")
        if not self.atol > 0:
            raise ConfigurationError("absolute tolerance must be > 0")
        if not self.max_step > 0:
            raise ConfigurationError("max_step must be > 0")
        if not self.samples_per_second > 0:
            raise ConfigurationError("samples_per_second must be > 0")


@dataclass(frozen=True)
class RecoveryReport:
    final_angle_residual: float
    peak_overshoot: float
    zero_crossing_count: int
    settle_time: Optional[float]

    @property
    def settled(self) -> bool:
        return self.settle_time is not None


@dataclass(frozen=True)
class BoundednessReport:
    angle: Optional[float]
    time: Optional[float]

    @property
    def settled(self) -> bool:
        return self.angle is not None


def pd_command(time: float, wheel_angle: float, wheel_rate: float,
               gains: PDGains, profile: RampProfile) -> float:
    """Linearized wheel input tau; the ramp's impulsive acceleration is not fed forward."""
    return (gains.derivative * (ramp_rate(profile, time) - wheel_rate)
            + gains.proportional * (ramp_position(profile, time) - wheel_angle))


def feedback_torque(tau: float, stool_torque: float, inertias: InertiaParams) -> float:
    """Motor torque u that makes the wheel obey theta_ddot = tau.

    ``stool_torque`` is the external torque on the stool: -k(phi) phi_dot in the
    finite model, the fluid wall stress torque in the fluid model.
    """
    iw, is_ = inertias.wheel_inertia, inertias.stool_inertia
    return iw / (iw + is_) * (is_ * tau + stool_torque)


def control_torque_rigid(state: RigidState, gains: PDGains, profile: RampProfile,
                         inertias: InertiaParams, law: DampingLaw) -> float:
    tau = pd_command(state.time, state.wheel_angle, state.wheel_rate, gains, profile)
    damping = -damping_coefficient(law, state.stool_angle) * state.stool_rate
    return feedback_torque(tau, damping, inertias)


def rigid_derivatives(state: RigidState, torque: float, inertias: InertiaParams,
                      law: DampingLaw) -> tuple[float, float]:
    """Accelerations (theta_ddot, phi_ddot) from the two Euler-Lagrange equations."""
    damping = damping_coefficient(law, state.stool_angle) * state.stool_rate
    stool_acc = (-damping - torque) / inertias.stool_inertia
    wheel_acc = torque / inertias.wheel_inertia - stool_acc
    return wheel_acc, stool_acc


def graded_samples(start: float, stop: float, first: float, largest: float,
                   growth: float = 1.02) -> np.ndarray:
    """Sample times that start ``first`` apart and grow geometrically to ``largest``.

    Resolves the fast transient right after each restart without sampling a
    long run uniformly at that resolution.
    """
    first = min(first, largest)
    times = [start]
    step = first
    while times[-1] + step < stop and step < largest:
        times.append(times[-1] + step)
        step *= growth
    head = times[-1]
    n = max(int(math.ceil((stop - head) / largest)), 1)
    return np.concatenate((times[:-1], np.linspace(head, stop, n + 1)))


def _sample_times(start: float, stop: float, rate: float) -> np.ndarray:
    # fine samples right after each restart keep the ledger quadrature accurate
    # through the fast closed-loop transient of high-gain runs
    return graded_samples(start, stop, min(1e-4, 1.0 / rate), 1.0 / rate)


def _rhs(config: RigidRunConfig):
    inertias, law, gains, profile = config.inertias, config.law, config.gains, config.profile

    def f(t, y):
        state = RigidState(t, y[0], y[1], y[2], y[3])
        u = control_torque_rigid(state, gains, profile, inertias, law)
        wheel_acc, stool_acc = rigid_derivatives(state, u, inertias, law)
        return [y[1], wheel_acc, y[3], stool_acc]

    return f


def simulate_rigid(config: RigidRunConfig) -> SimulationTrace:
    """Integrate the finite model from rest with DOP853.

    The integrator is restarted exactly at the wheel stop so the jump of the
    desired rate never falls inside a step; that instant is sampled twice
    (left and right limits of u and tau).
    """
    f = _rhs(config)
    t_stop = config.profile.stop_time
    phases = [(0.0, t_stop), (t_stop, config.end_time)]
    y0 = np.zeros(4)
    times, states, steps = [], [], 0
    for start, stop in phases:
        t_eval = _sample_times(start, stop, config.samples_per_second)
        sol = solve_ivp(f, (start, stop), y0, method="DOP853", t_eval=t_eval,
                        rtol=config.rtol, atol=config.atol, max_step=config.max_step)
        if sol.status != 0:
            bad = sol.t[-1] if len(sol.t) else start
            raise IntegrationError(f"rigid integration failed: {sol.message}", bad)
        if not np.all(np.isfinite(sol.y)):
            bad = sol.t[np.argmax(~np.all(np.isfinite(sol.y), axis=0))]
            raise IntegrationError("rigid integration produced a non-finite state", bad)
        steps += sol.nfev // 12
        times.append(sol.t)
        states.append(sol.y)
        y0 = sol.y[:, -1]
    t = np.concatenate(times)
    y = np.concatenate(states, axis=1)

    n_first = len(times[0])
    u = np.empty_like(t)
    tau = np.empty_like(t)
    desired = np.empty_like(t)
    for i, ti in enumerate(t):
        # the last sample of the spin phase carries the left limit at t_stop
        t_ctrl = np.nextafter(ti, -np.inf) if i == n_first - 1 else ti
        t_ctrl = max(t_ctrl, 0.0)
        tau[i] = pd_command(t_ctrl, y[0, i], y[1, i], config.gains, config.profile)
        damping = -damping_coefficient(config.law, y[2, i]) * y[3, i]
        u[i] = feedback_torque(tau[i], damping, config.inertias)
        desired[i] = ramp_position(config.profile, ti)

    trace = SimulationTrace(
        model="rigid", time=t, wheel_angle=y[0], wheel_rate=y[1], stool_angle=y[2],
        stool_rate=y[3], torque_u=u, tau=tau, desired_angle=desired,
        inertias=config.inertias, law=config.law, profile=config.profile,
        metadata={
            "integrator": "DOP853 (explicit adaptive Runge-Kutta 8(5,3)), restarted at t_stop",
            "rtol": config.rtol, "atol": config.atol, "steps": steps,
            # crude global bound: every step may contribute one local tolerance
            "angle_error_estimate": steps * (config.atol + config.rtol * float(np.max(np.abs(y[2])))),
        },
    )
    energy_audit.attach_ledger(trace)
    return trace


def trace_momentum(trace: SimulationTrace) -> np.ndarray:
    """Damping-induced momentum at every sample of a rigid trace."""
    law = trace.law
    return (trace.inertias.total * trace.stool_rate
            + trace.inertias.wheel_inertia * trace.wheel_rate
            + np.asarray(damping_potential(law, trace.stool_angle)))


def _held_runs(mask: np.ndarray, time: np.ndarray, window: float):
    """Yield start indices of maximal True runs lasting at least ``window`` seconds."""
    n = len(mask)
    i = 0
    while i < n:
        if mask[i]:
            j = i
            while j + 1 < n and mask[j + 1]:
                j += 1
            if time[j] - time[i] >= window:
                yield i
            i = j + 1
        else:
            i += 1


def detect_boundedness(trace: SimulationTrace, rate_tolerance: float = 1e-4,
                       hold_window: float = 1.0) -> BoundednessReport:
    """Stool angle once the stool has stopped while the wheel spins at its set rate.

    Looks for the first stretch, lasting ``hold_window``, where
    ``|phi_dot| < rate_tolerance`` and the wheel rate is within 1% of the
    steady rate.  Returns an unsettled report when no such stretch exists.
    """
    if len(trace) < 2 or trace.profile is None:
        return BoundednessReport(None, None)
    steady = trace.profile.steady_rate
    spinning = np.abs(trace.wheel_rate - steady) <= 0.01 * abs(steady)
    if steady == 0:
        spinning = np.ones(len(trace), dtype=bool)
    mask = spinning & (np.abs(trace.stool_rate) < rate_tolerance)
    for i in _held_runs(mask, trace.time, hold_window):
        return BoundednessReport(float(trace.stool_angle[i]), float(trace.time[i]))
    return BoundednessReport(None, None)


def count_crossings(signal: np.ndarray, band: float) -> tuple[int, Optional[int]]:
    """Sign changes of ``signal`` with hysteresis ``band``.

    A crossing is counted when the signal moves from below ``-band`` to above
    ``band`` or back.  Returns the count and the index of the first crossing.
    """
    count, first = 0, None
    side = 0
    for i, s in enumerate(signal):
        new = 1 if s > band else (-1 if s < -band else 0)
        if new == 0:
            continue
        if side != 0 and new != side:
            count += 1
            if first is None:
                first = i
        side = new
    return count, first


def detect_recovery(trace: SimulationTrace, settle_band: float = 1e-3,
                    signal: str = "stool") -> RecoveryReport:
    """Recovery statistics after the wheel stop.

    ``signal`` selects the stool angle (default) or the wheel tracking error
    ``"wheel_error"`` (desired minus actual wheel angle).
    """
    if signal == "stool":
        values = trace.stool_angle
    elif signal == "wheel_error":
        values = trace.desired_angle - trace.wheel_angle
    else:
        raise ValueError(f"unknown signal {signal!r}")
    t_stop = trace.profile.stop_time if trace.profile is not None else 0.0
    after = trace.time >= t_stop
    t, x = trace.time[after], values[after]
    if len(x) == 0:
        return RecoveryReport(math.nan, 0.0, 0, None)
    residual = float(abs(x[-1]))
    count, first = count_crossings(x, settle_band)
    overshoot = 0.0
    if first is not None:
        direction = np.sign(x[first])
        overshoot = float(max(0.0, np.max(direction * x[first:])))
    outside = np.nonzero(np.abs(x) > settle_band)[0]
    if len(outside) == 0:
        settle_time = float(t[0])
    elif outside[-1] == len(x) - 1:
        settle_time = None
    else:
        settle_time = float(t[outside[-1] + 1])
    return RecoveryReport(residual, overshoot, count, settle_time)


def overshoot_peak_time(time: np.ndarray, signal: np.ndarray, after: float,
                        band: float = 1e-3) -> Optional[float]:
    """Time of the first peak of ``signal`` past zero, counted from ``after``.

    The peak is the largest excursion between the first hysteresis crossing
    after ``after`` and the next one (or the end of the record).
    """
    idx = np.nonzero(time >= after)[0]
    x = signal[idx]
    count, first = count_crossings(x, band)
    if first is None:
        return None
    rest = x[first:]
    _, second = count_crossings(rest, band)
    window = rest if second is None else rest[:second]
    j = int(np.argmax(np.sign(x[first]) * window))
    return float(time[idx[first + j]])
