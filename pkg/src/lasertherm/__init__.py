"""Open-quantum-system laser models and their thermodynamic ledger.

The package is organized in six modules:

- :mod:`lasertherm.fock` — truncated Fock-space primitives,
- :mod:`lasertherm.lindblad` — GKLS generators, evolution, stationary states,
- :mod:`lasertherm.birthdeath` — classical photon-number birth-death chains,
- :mod:`lasertherm.thermo` — entropies, currents, power, law balances,
- :mod:`lasertherm.scenarios` — named presets and analytic references,
- :mod:`lasertherm.cli` — the ``lasertherm`` command-line runner.
"""

from . import birthdeath, cli, fock, lindblad, scenarios, thermo
from .errors import (
    BoundaryLeak,
    ConfigError,
    CutoffTooSmall,
    DegenerateKernel,
    DegenerateSpectrum,
    DimensionMismatch,
    DomainError,
    InsufficientSamples,
    LaserthermError,
    NoStationaryState,
    StabilityError,
    StabilityWarning,
    TruncationError,
    UnknownPreset,
    VariantMismatch,
)
from .tolerances import TOLERANCES, Tolerances

__version__ = "0.1.0"

__all__ = [
    "birthdeath",
    "cli",
    "fock",
    "lindblad",
    "scenarios",
    "thermo",
    "TOLERANCES",
    "Tolerances",
    "LaserthermError",
    "DomainError",
    "DimensionMismatch",
    "VariantMismatch",
    "TruncationError",
    "StabilityError",
    "StabilityWarning",
    "BoundaryLeak",
    "CutoffTooSmall",
    "NoStationaryState",
    "DegenerateKernel",
    "DegenerateSpectrum",
    "UnknownPreset",
    "InsufficientSamples",
    "ConfigError",
    "__version__",
]
