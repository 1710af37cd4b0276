"""Shared domain types for the stool-wheel and fluid-stool-wheel models.

Angles are in radians, rates in rad/s.  In the fluid model every inertia and
torque is per unit depth of the (infinitely long) annulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np


class ConfigurationError(ValueError):
    """Raised when parameters violate a model invariant."""


class DomainError(ValueError):
    """Raised when a function is evaluated outside its domain."""


class IntegrationError(RuntimeError):
    """Raised when a time integration cannot continue."""

    def __init__(self, message: str, time: Optional[float] = None):
        if time is not None:
            message = f"{message} (t = {time!r} s)"
        super().__init__(message)
        self.time = time


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigurationError(message)


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class InertiaParams:
    wheel_inertia: float
    stool_inertia: float

    def __post_init__(self):
        _require(_finite(self.wheel_inertia, self.stool_inertia),
                 "inertias must be finite")
        _require(self.wheel_inertia > 0, "wheel_inertia must be > 0")
        _require(self.stool_inertia > 0, "stool_inertia must be > 0")

    @property
    def total(self) -> float:
        return self.wheel_inertia + self.stool_inertia

    def matrix(self) -> np.ndarray:
        """Inertia matrix in the (wheel angle, stool angle) coordinates."""
        iw, is_ = self.wheel_inertia, self.stool_inertia
        return np.array([[iw, iw], [iw, iw + is_]])


@dataclass(frozen=True)
class AnnulusFluid:
    density: float
    kinematic_viscosity: float
    inner_radius: float
    outer_radius: float

    def __post_init__(self):
        _require(_finite(self.density, self.kinematic_viscosity,
                         self.inner_radius, self.outer_radius),
                 "fluid parameters must be finite")
        _require(self.density > 0, "density must be > 0")
        _require(self.kinematic_viscosity > 0, "kinematic_viscosity must be > 0")
        _require(self.inner_radius > 0, "inner_radius must be > 0")
        _require(self.inner_radius < self.outer_radius,
                 "inner_radius must be < outer_radius (R_i < R_o)")

    @property
    def gap(self) -> float:
        return self.outer_radius - self.inner_radius

    @property
    def gap_ratio(self) -> float:
        return self.gap / self.inner_radius


class DampingVariant(str, Enum):
    CONSTANT = "constant"
    RAISED_COSINE = "raised-cosine"
    COSINE_SQUARED = "cosine-squared"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class DampingLaw:
    """Stool damping coefficient k(phi).

    The closed-form variants are ``scale/2pi``, ``scale (1 + cos phi)/2pi`` and
    ``2 scale cos^2 phi / pi``; the first two average ``scale/2pi`` over a
    revolution, the third twice that.  A raw constant coefficient ``c`` is therefore
    ``DampingLaw.raw_constant(c)``.  Tabulated laws interpolate linearly between
    ``(angles, values)`` and clamp outside the sampled range.
    """

    variant: DampingVariant = DampingVariant.CONSTANT
    scale: float = 0.0
    angles: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variant", DampingVariant(self.variant))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        _require(math.isfinite(self.scale), "damping scale must be finite")
        if self.variant is DampingVariant.TABULATED:
            _require(len(self.angles) > 0, "tabulated damping law needs a non-empty table")
            _require(len(self.angles) == len(self.values),
                     "tabulated damping law needs as many values as angles")
            _require(all(b > a for a, b in zip(self.angles, self.angles[1:])),
                     "tabulated damping angles must be strictly increasing")
            _require(all(math.isfinite(v) and v >= 0 for v in self.values),
                     "tabulated damping values must be finite and >= 0")
        else:
            _require(self.scale >= 0, "damping scale must be >= 0")

    @classmethod
    def raw_constant(cls, coefficient: float) -> "DampingLaw":
        return cls(DampingVariant.CONSTANT, 2.0 * math.pi * coefficient)

    @classmethod
    def tabulated(cls, angles: Sequence[float], values: Sequence[float]) -> "DampingLaw":
        return cls(DampingVariant.TABULATED, 0.0, tuple(angles), tuple(values))

    @property
    def is_zero(self) -> bool:
        if self.variant is DampingVariant.TABULATED:
            return all(v == 0 for v in self.values)
        return self.scale == 0


@dataclass(frozen=True)
class RampProfile:
    steady_rate: float
    stop_time: float

    def __post_init__(self):
        _require(_finite(self.steady_rate, self.stop_time), "ramp parameters must be finite")
        _require(self.stop_time > 0, "stop_time must be > 0")


@dataclass(frozen=True)
class PDGains:
    proportional: float
    derivative: float

    def __post_init__(self):
        _require(_finite(self.proportional, self.derivative), "gains must be finite")
        _require(self.proportional >= 0 and self.derivative >= 0, "gains must be >= 0")
        _require(self.proportional > 0 or self.derivative > 0, "gains must not both be zero")


@dataclass(frozen=True)
class RigidState:
    time: float
    wheel_angle: float
    wheel_rate: float
    stool_angle: float
    stool_rate: float

    @classmethod
    def rest(cls, time: float = 0.0) -> "RigidState":
        return cls(time, 0.0, 0.0, 0.0, 0.0)

    def is_finite(self) -> bool:
        return _finite(self.time, self.wheel_angle, self.wheel_rate,
                       self.stool_angle, self.stool_rate)


@dataclass(frozen=True)
class BearingGeometry:
    inner_radius: float
    thickness: float
    height: float

    def __post_init__(self):
        _require(_finite(self.inner_radius, self.thickness, self.height),
                 "bearing geometry must be finite")
        _require(self.inner_radius > 0 and self.thickness > 0 and self.height > 0,
                 "bearing radius, thickness and height must be > 0")


@dataclass
class SimulationTrace:
    """Time-ordered samples of one run.

    A breakpoint (the wheel stop) may appear twice in ``time``: once with the
    left limits and once with the right limits of the discontinuous control
    signals.  Ledger columns (``ke``, ``ie``, ``le`` and the fluid terms) are
    filled in by :mod:`selfrecovery.energy_audit`.
    """

    model: str
    time: np.ndarray
    wheel_angle: np.ndarray
    wheel_rate: np.ndarray
    stool_angle: np.ndarray
    stool_rate: np.ndarray
    torque_u: np.ndarray
    tau: np.ndarray
    desired_angle: np.ndarray
    inertias: Optional[InertiaParams] = None
    law: Optional[DampingLaw] = None
    profile: Optional[RampProfile] = None
    fluid: Optional[AnnulusFluid] = None
    radii: Optional[np.ndarray] = None
    velocity: Optional[np.ndarray] = None
    ke: Optional[np.ndarray] = None
    ie: Optional[np.ndarray] = None
    le: Optional[np.ndarray] = None
    fluid_ke: Optional[np.ndarray] = None
    fluid_diss: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.time)

    def state(self, index: int) -> RigidState:
        return RigidState(float(self.time[index]), float(self.wheel_angle[index]),
                          float(self.wheel_rate[index]), float(self.stool_angle[index]),
                          float(self.stool_rate[index]))

    @classmethod
    def empty(cls, model: str = "rigid") -> "SimulationTrace":
        z = np.zeros(0)
        return cls(model, z, z, z, z, z, z, z, z)


def damping_coefficient(law: DampingLaw, angle):
    """k(phi) for ``law``; accepts scalars or arrays."""
    phi = np.asarray(angle, dtype=float)
    k = law.scale
    if law.variant is DampingVariant.CONSTANT:
        out = np.full_like(phi, k / (2 * np.pi))
    elif law.variant is DampingVariant.RAISED_COSINE:
        out = k * (1.0 + np.cos(phi)) / (2 * np.pi)
    elif law.variant is DampingVariant.COSINE_SQUARED:
        out = 2.0 * k * np.cos(phi) ** 2 / np.pi
    else:
        if not law.angles:
            raise ConfigurationError("tabulated damping law has an empty table")
        out = np.interp(phi, law.angles, law.values)
    return float(out) if out.ndim == 0 else out


def _tabulated_potential(law: DampingLaw, phi: float) -> float:
    # exact integral of the clamped piecewise-linear table (trapezoid per segment)
    a = np.asarray(law.angles)
    v = np.asarray(law.values)
    lo, hi = (0.0, phi) if phi >= 0 else (phi, 0.0)
    knots = np.concatenate(([lo], a[(a > lo) & (a < hi)], [hi]))
    vals = np.interp(knots, a, v)
    total = float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(knots)))
    return total if phi >= 0 else -total


def damping_potential(law: DampingLaw, angle):
    """Antiderivative of k from 0 to ``angle``."""
    phi = np.asarray(angle, dtype=float)
    k = law.scale
    if law.variant is DampingVariant.CONSTANT:
        out = k * phi / (2 * np.pi)
    elif law.variant is DampingVariant.RAISED_COSINE:
        out = k * (phi + np.sin(phi)) / (2 * np.pi)
    elif law.variant is DampingVariant.COSINE_SQUARED:
        out = 2.0 * k / np.pi * (phi / 2 + np.sin(2 * phi) / 4)
    else:
        if not law.angles:
            raise ConfigurationError("tabulated damping law has an empty table")
        out = np.vectorize(lambda p: _tabulated_potential(law, float(p)), otypes=[float])(phi)
    return float(out) if np.ndim(out) == 0 else out


def ramp_position(profile: RampProfile, time):
    t = np.asarray(time, dtype=float)
    if np.any(t < 0):
        raise DomainError("ramp trajectory is defined for t >= 0")
    out = profile.steady_rate * np.minimum(t, profile.stop_time)
    return float(out) if out.ndim == 0 else out


def ramp_rate(profile: RampProfile, time):
    t = np.asarray(time, dtype=float)
    if np.any(t < 0):
        raise DomainError("ramp trajectory is defined for t >= 0")
    out = np.where(t < profile.stop_time, profile.steady_rate, 0.0)
    return float(out) if out.ndim == 0 else out


def damping_induced_momentum(state: RigidState, inertias: InertiaParams, law: DampingLaw) -> float:
    """(I_w + I_s) phi_dot + I_w theta_dot + integral of k over [0, phi].

    Conserved (and equal to zero from rest) along every trajectory of the
    stool-wheel equations, whatever the motor torque.
    """
    return (inertias.total * state.stool_rate
            + inertias.wheel_inertia * state.wheel_rate
            + damping_potential(law, state.stool_angle))
