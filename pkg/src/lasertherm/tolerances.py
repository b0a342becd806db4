"""Global numerical tolerances.

Every validation threshold in the package reads from the module-level
``TOLERANCES`` instance, so callers who need looser or tighter checks can
mutate it (or swap in their own instance) in one place.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Tolerances:
    """Numerical thresholds used by validators across the package.

    Attributes
    ----------
    herm:
        Maximum absolute deviation from Hermiticity accepted by state and
        operator validators.
    psd:
        How far below zero a density-matrix eigenvalue may dip.
    trace:
        Maximum absolute deviation of a density-matrix trace from one.
    evolving:
        Relaxed bound applied to states sampled mid-integration, where
        fourth-order stepping error accumulates before renormalization.
    leakage:
        Tail mass above which state constructors refuse to truncate.
    trace_drift:
        Per-step trace drift above which the integrator aborts.
    occupancy:
        Top-level occupancy above which a trajectory is declared truncated.
    boundary_flux:
        Probability flux through the reflecting top level of a classical
        chain above which the cutoff is declared too small.
    tail_mass:
        Stationary tail mass beyond the cutoff that a product-form solution
        may leave unaccounted.
    """

    herm: float = 1e-10
    psd: float = 1e-10
    trace: float = 1e-10
    evolving: float = 1e-8
    leakage: float = 1e-10
    trace_drift: float = 1e-6
    occupancy: float = 1e-6
    boundary_flux: float = 1e-10
    tail_mass: float = 1e-12


TOLERANCES = Tolerances()
