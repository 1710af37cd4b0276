"""Self-recovery of a stool-wheel system under damping: rigid and fluid-coupled models."""

from .model_core import (AnnulusFluid, BearingGeometry, ConfigurationError, DampingLaw,
                         DampingVariant, DomainError, InertiaParams, IntegrationError, PDGains,
                         RampProfile, RigidState, SimulationTrace)

__version__ = "0.1.0"

__all__ = ["AnnulusFluid", "BearingGeometry", "ConfigurationError", "DampingLaw", "DampingVariant",
           "DomainError", "InertiaParams", "IntegrationError", "PDGains", "RampProfile",
           "RigidState", "SimulationTrace"]
