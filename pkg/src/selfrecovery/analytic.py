"""Spectral and closed-form results for the annular fluid coupling.

The transient part of the fluid field expands in the eigenfunctions

    W_n(r) = J1(kappa_n r) + k_n Y1(kappa_n r),   W_n(R_i) = W_n(R_o) = 0,

with decay rates lambda_n = nu kappa_n^2.  Once the transient dies out the
field is the linear profile between the walls and the fluid acts on the stool
like a viscous damper with coefficient ``effective_damping``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special
from scipy.integrate import quad, simpson
from scipy.optimize import brentq

from .model_core import AnnulusFluid, DomainError, InertiaParams


def bessel_j1(x):
    x = np.asarray(x, dtype=float)
    out = special.j1(x)
    return float(out) if out.ndim == 0 else out


def bessel_y1(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("Y1 is only defined for x > 0")
    out = special.y1(x)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EigenMode:
    index: int
    wavenumber: float
    decay_rate: float
    mixing_ratio: float
    forcing_coefficients: tuple[float, float]
    # Y1(kappa R_i) and J1(kappa R_i); the shape is evaluated in the
    # cross-product form, which stays finite when Y1(kappa R_i) is tiny
    inner_values: tuple[float, float] = (0.0, 0.0)

    def shape(self, r):
        """W_n(r) = J1(kappa r) + mixing_ratio * Y1(kappa r)."""
        y_in, j_in = self.inner_values
        kr = self.wavenumber * np.asarray(r, dtype=float)
        if y_in == 0.0:
            out = special.j1(kr) + self.mixing_ratio * special.y1(kr)
        else:
            out = (y_in * special.j1(kr) - j_in * special.y1(kr)) / y_in
        return float(out) if np.ndim(out) == 0 else out


class EigenSearchError(RuntimeError):
    pass


def cross_product(kappa: float, fluid: AnnulusFluid) -> float:
    a, b = fluid.inner_radius, fluid.outer_radius
    return (special.j1(kappa * a) * special.y1(kappa * b)
            - special.j1(kappa * b) * special.y1(kappa * a))


def _forcing_coefficients(kappa: float, y_in: float, j_in: float,
                          fluid: AnnulusFluid) -> tuple[float, float]:
    # weight r makes the radial operator self-adjoint on [R_i, R_o]
    a, b, nu = fluid.inner_radius, fluid.outer_radius, fluid.kinematic_viscosity
    gap = b - a

    def w(r):
        return (y_in * special.j1(kappa * r) - j_in * special.y1(kappa * r)) / y_in

    n_osc = max(50, int(kappa * gap / math.pi) * 10)
    norm = quad(lambda r: w(r) ** 2 * r, a, b, limit=n_osc, epsabs=0.0, epsrel=1e-11)[0]
    # absolute floor relative to the size of each integrand, for near-zero projections
    w_scale = math.sqrt(norm / (0.5 * (b * b - a * a)))
    area = 0.5 * (b * b - a * a)
    accel = quad(lambda r: -a * (b - r) / gap * w(r) * r, a, b, limit=n_osc,
                 epsabs=1e-12 * a * w_scale * area, epsrel=1e-11)[0]
    rate = quad(lambda r: -nu * a * b / (r ** 2 * gap) * w(r) * r, a, b, limit=n_osc,
                epsabs=1e-12 * nu * b / (a * gap) * w_scale * area, epsrel=1e-11)[0]
    return accel / norm, rate / norm


def eigenvalues(fluid: AnnulusFluid, count: int) -> list[EigenMode]:
    """First ``count`` decay modes of the annulus with both walls at rest.

    Roots of the cross product are bracketed on a grid of step
    0.45 pi / (R_o - R_i), finer than the asymptotic root spacing, and refined
    to 1e-13 relative.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    gap = fluid.gap
    step = 0.45 * math.pi / gap
    lo = 0.5 * math.pi / gap
    f_lo = cross_product(lo, fluid)
    modes: list[EigenMode] = []
    scanned = 0
    max_scan = 10 * count + 100
    while len(modes) < count:
        hi = lo + step
        f_hi = cross_product(hi, fluid)
        if f_lo == 0.0:
            kappa = lo
        elif f_lo * f_hi < 0:
            kappa = brentq(cross_product, lo, hi, args=(fluid,), xtol=1e-300, rtol=1e-13, maxiter=500)
        else:
            kappa = None
        if kappa is not None:
            y_in = float(special.y1(kappa * fluid.inner_radius))
            j_in = float(special.j1(kappa * fluid.inner_radius))
            m, l = _forcing_coefficients(kappa, y_in, j_in, fluid)
            modes.append(EigenMode(len(modes) + 1, kappa, fluid.kinematic_viscosity * kappa ** 2,
                                   -j_in / y_in, (m, l), (y_in, j_in)))
        lo, f_lo = hi, f_hi
        scanned += 1
        if scanned > max_scan:
            raise EigenSearchError(
                f"found {len(modes)} of {count} roots while scanning kappa in "
                f"[{0.5 * math.pi / gap!r}, {hi!r}] 1/m")
    return modes


def transient_mode_amplitude(mode: EigenMode, times: Sequence[float],
                             stool_rates: Sequence[float], time: float) -> float:
    """Modal amplitude T_n(time) driven by a sampled stool-rate history.

    T_n(t) = int_0^t exp(-lambda_n (t - s)) (m phi_ddot(s) + l phi_dot(s)) ds,
    with phi_ddot from second-order differences of the samples.  The history
    must start at s = 0 and cover ``time``.
    """
    t = np.asarray(times, dtype=float)
    rates = np.asarray(stool_rates, dtype=float)
    if len(t) == 0:
        raise DomainError("stool-rate history is empty")
    if time < t[0] or time > t[-1]:
        raise DomainError("requested time lies outside the sampled history")
    if len(t) < 3:
        return 0.0
    acc = np.gradient(rates, t, edge_order=2)
    keep = t <= time
    ts, rs, acs = t[keep], rates[keep], acc[keep]
    if ts[-1] < time:
        ts = np.append(ts, time)
        rs = np.append(rs, np.interp(time, t, rates))
        acs = np.append(acs, np.interp(time, t, acc))
    if len(ts) < 2:
        return 0.0
    m, l = mode.forcing_coefficients
    integrand = np.exp(-mode.decay_rate * (time - ts)) * (m * acs + l * rs)
    return float(simpson(integrand, x=ts))


def linear_limit_profile(fluid: AnnulusFluid, stool_rate: float, r):
    """Limit field R_i phi_dot (R_o - r)/(R_o - R_i) reached once transients decay."""
    rr = np.asarray(r, dtype=float)
    tol = 1e-12 * fluid.outer_radius
    if np.any(rr < fluid.inner_radius - tol) or np.any(rr > fluid.outer_radius + tol):
        raise DomainError("r lies outside the annulus")
    out = fluid.inner_radius * stool_rate * (fluid.outer_radius - rr) / fluid.gap
    return float(out) if out.ndim == 0 else out


def effective_damping(fluid: AnnulusFluid) -> float:
    a, b = fluid.inner_radius, fluid.outer_radius
    return 2 * math.pi * fluid.density * fluid.kinematic_viscosity * b * a ** 2 / (b - a)


def exact_annular_damping(fluid: AnnulusFluid) -> float:
    """Torque per unit stool rate of the steady Couette flow between the walls."""
    a, b = fluid.inner_radius, fluid.outer_radius
    return 4 * math.pi * fluid.density * fluid.kinematic_viscosity * a ** 2 * b ** 2 / (b ** 2 - a ** 2)


def boundedness_angle(inertias: InertiaParams, wheel_rate: float, fluid: AnnulusFluid) -> float:
    """Stool angle at which the spinning wheel and the effective damper balance."""
    return -inertias.wheel_inertia * wheel_rate / effective_damping(fluid)


def exact_boundedness_angle(inertias: InertiaParams, wheel_rate: float, fluid: AnnulusFluid) -> float:
    return -inertias.wheel_inertia * wheel_rate / exact_annular_damping(fluid)


def predicted_percent_error(fluid: AnnulusFluid) -> float:
    """Relative overshoot of the k_eff angle over the exact-Couette angle, in percent."""
    a, b = fluid.inner_radius, fluid.outer_radius
    return 100.0 * (b - a) / (b + a)
