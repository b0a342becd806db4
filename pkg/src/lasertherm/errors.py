"""Exception and warning types shared across the package."""

from __future__ import annotations


class LaserthermError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LaserthermError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DimensionMismatch(LaserthermError, ValueError):
    """Operands live on spaces of different dimension."""


class VariantMismatch(LaserthermError, TypeError):
    """A generator variant was applied where it does not make sense."""


class TruncationError(LaserthermError, ArithmeticError):
    """Too much weight falls outside the retained Fock levels."""


class StabilityError(LaserthermError, ArithmeticError):
    """The fixed-step integrator lost the trace beyond tolerance."""


class BoundaryLeak(LaserthermError, ArithmeticError):
    """Probability flux through the reflecting top level exceeded tolerance."""


class CutoffTooSmall(LaserthermError, ValueError):
    """A requested cutoff leaves more than the allowed tail mass outside."""


class NoStationaryState(LaserthermError, ArithmeticError):
    """The model admits no normalizable stationary state."""


class DegenerateKernel(LaserthermError, ArithmeticError):
    """The generator has more than one stationary state; selection refused."""


class DegenerateSpectrum(LaserthermError, ValueError):
    """Bohr frequencies collide; the secular construction is ambiguous."""


class UnknownPreset(LaserthermError, KeyError):
    """No scenario is registered under the requested name."""


class InsufficientSamples(LaserthermError, ValueError):
    """An operation needs more time samples than the trajectory provides."""


class ConfigError(LaserthermError, ValueError):
    """A run configuration file is missing, malformed, or invalid."""


class StabilityWarning(UserWarning):
    """The chosen step size is close to the stability limit."""
