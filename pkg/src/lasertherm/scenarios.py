"""Named model presets and closed-form oracles.

Every preset bundles a generator, its birth-death twin, the chemical
potentials that produced the rates (when the scenario has a chemistry), a
Fock dimension sized so Poissonian tails fit (dim >= n_mean + 8*sqrt(n_mean)),
and integrator defaults chosen inside the integrator's stability region.

All numeric parameter values here are package choices, made so that each
regime (sub-threshold thermal, amplifying transient, gain-saturated,
loaded, two-bath) is well inside its asymptotic territory at desk-scale
dimensions; none are canonical constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import birthdeath
from .errors import DomainError, UnknownPreset
from .fock import DensityMatrix, FockSpace, Operator, coherent_state
from .lindblad import (
    DaviesNLevel,
    GeneratorSpec,
    LinearLaser,
    LoadedLaser,
    NonlinearLaser,
    davies_generator,
    stationary_state,
)
from .thermo import (
    REGULARIZATION_EPS,
    ChemicalPotentials,
    log_reference_chemical,
)

__all__ = [
    "ChemicalEngineParams",
    "ScenarioBundle",
    "chemical_engine",
    "analytic_energy",
    "generator_for_model",
    "preset",
    "stationary_log_reference",
    "PRESET_NAMES",
]


def generator_for_model(
    model: birthdeath.BirthDeathModel, omega: float
) -> GeneratorSpec:
    """The ladder generator whose diagonal sector is exactly ``model``.

    Up jumps carry amplitude sqrt(n+1)*g_up(n) and down jumps sqrt(n)*
    g_down(n), so the shape functions are the rates divided by their linear
    ladder factors: up(n)/(n+1) and down(n)/n.
    """
    if isinstance(model, birthdeath.Linear):
        return LinearLaser(omega, model.gamma_up, model.gamma_down)
    if isinstance(model, birthdeath.Loaded):
        return LoadedLaser(omega, model.gamma_up, model.gamma_down, model.delta)
    if isinstance(model, birthdeath.SaturatedPump):
        a, b, c = model.A, model.B, model.C
        return NonlinearLaser(
            omega,
            g_up=lambda n: math.sqrt(a / (1.0 + c * (n + 1))),
            g_down=lambda n: math.sqrt(b),
        )
    if isinstance(model, birthdeath.SaturatedDamp):
        a, b, c = model.A, model.B, model.C
        return NonlinearLaser(
            omega,
            g_up=lambda n: math.sqrt(a),
            g_down=lambda n: math.sqrt(b * (1.0 + c * n)),
        )
    up_fn, down_fn = model.up, model.down
    return NonlinearLaser(
        omega,
        g_up=lambda n: math.sqrt(float(up_fn(n)) / (n + 1)),
        g_down=lambda n: math.sqrt(float(down_fn(n)) / n) if n > 0 else 0.0,
    )


@dataclass(frozen=True)
class ChemicalEngineParams:
    """Rates of a single-mode engine pinned to its chemical environment.

    The detailed-balance tie gamma_up = gamma_down * exp(-beta * delta_g)
    is an invariant: amplification (gamma_up > gamma_down) happens exactly
    when the reaction releases free energy per quantum (delta_g < 0).
    """

    pot: ChemicalPotentials
    gamma_down: float
    gamma_up: float
    delta_g: float
    amplifying: bool

    def __post_init__(self) -> None:
        if not self.gamma_down > 0:
            raise DomainError(f"gamma_down must be > 0, got {self.gamma_down!r}")
        expected = self.gamma_down * math.exp(-self.pot.beta * self.delta_g)
        if abs(self.gamma_up - expected) > 1e-12 * max(1.0, expected):
            raise DomainError(
                "gamma_up violates detailed balance with the environment"
            )


def chemical_engine(pot: ChemicalPotentials, gamma_down: float) -> ChemicalEngineParams:
    """Derive the pump rate from detailed balance against the environment."""
    if not gamma_down > 0:
        raise DomainError(f"gamma_down must be > 0, got {gamma_down!r}")
    delta_g = pot.delta_g
    gamma_up = gamma_down * math.exp(-pot.beta * delta_g)
    return ChemicalEngineParams(
        pot=pot,
        gamma_down=gamma_down,
        gamma_up=gamma_up,
        delta_g=delta_g,
        amplifying=delta_g < 0,
    )


def analytic_energy(params: ChemicalEngineParams, e0: float, t: float) -> float:
    """Closed-form mean energy of the linear engine at time t.

    E(t) = e^{(gu-gd)t} E0 + (e^{(gu-gd)t} - 1) * omega*gu/(gu-gd); the
    degenerate gu = gd case is the limit E0 + omega*gu*t.
    """
    gu, gd = params.gamma_up, params.gamma_down
    omega = params.pot.omega
    if gu == gd:
        return e0 + omega * gu * t
    g = gu - gd
    return e0 * math.exp(g * t) + omega * gu / g * math.expm1(g * t)


# ---------------------------------------------------------------------------
# presets


@dataclass(frozen=True, eq=False)
class ScenarioBundle:
    """A validated, ready-to-run scenario.

    ``generator`` drives lindblad.evolve; ``model`` is the diagonal-sector
    birth-death twin (None for the qubit scenario); ``pot`` is the chemical
    environment when the scenario has one.  ``initial_state`` builds the
    default starting state and ``log_sigma`` the stationary log-reference
    used in entropy-production checks.
    """

    name: str
    description: str
    generator: GeneratorSpec
    model: birthdeath.BirthDeathModel | None
    pot: ChemicalPotentials | None
    dim: int
    t_final: float
    dt: float
    sample_every: int
    initial_kind: str
    initial_value: object

    def space(self) -> FockSpace:
        return FockSpace(self.dim)

    def initial_state(self) -> DensityMatrix:
        space = self.space()
        if self.initial_kind == "coherent":
            return coherent_state(complex(self.initial_value), space)
        if self.initial_kind == "poisson":
            p = birthdeath.poisson_pmf(float(self.initial_value), self.dim - 1)
            p = p / p.sum()
            return DensityMatrix(Operator(space, np.diag(p.astype(np.complex128))))
        if self.initial_kind == "diag":
            p = np.asarray(self.initial_value, dtype=np.float64)
            if p.size != self.dim:
                raise DomainError("diagonal initial state has wrong length")
            return DensityMatrix(Operator(space, np.diag(p.astype(np.complex128))))
        raise DomainError(f"unknown initial kind {self.initial_kind!r}")

    def log_sigma(self) -> Operator:
        """Logarithm of a stationary reference of the full generator.

        Linear-chemistry presets use the detailed-balance weight
        exp(-beta*DeltaG*n) through its logarithm (exactly stationary on the
        truncated ladder, normalizable or not); number-dependent presets use
        the truncated flow-balance stationary distribution; the qubit preset
        takes the matrix logarithm of its computed stationary state.
        """
        space = self.space()
        if isinstance(self.generator, DaviesNLevel):
            rho = stationary_state(self.generator)
            w, vecs = np.linalg.eigh(rho.entries)
            w = np.clip(w, 0.0, None)
            w = (1.0 - REGULARIZATION_EPS) * w + REGULARIZATION_EPS / w.size
            return Operator(space, (vecs * np.log(w)) @ vecs.conj().T)
        if isinstance(self.generator, LinearLaser):
            return log_reference_chemical(self.pot, space)
        return stationary_log_reference(self.model, space)


def stationary_log_reference(
    model: birthdeath.BirthDeathModel, space: FockSpace
) -> Operator:
    """ln of the truncated flow-balance distribution over the whole space.

    The reflecting-top ladder satisfies detailed balance bond by bond, so
    the renormalized product of rate ratios is exactly stationary for the
    truncated generator at this dimension (regardless of how much tail the
    truncation cuts), which is what an entropy-production reference needs.
    Zero up-rates are allowed (the weight above them is zero); zero down
    rates above level 0 are not.
    """
    up, down = birthdeath.rate_arrays(model, space.dim)
    if np.any(down[1:] <= 0):
        raise DomainError("down rate vanishes above level 0; no flow balance")
    with np.errstate(divide="ignore"):
        log_ratio = np.log(up[:-1]) - np.log(down[1:])
    logw = np.concatenate(([0.0], np.cumsum(log_ratio)))
    peak = logw.max()
    lognorm = peak + math.log(np.exp(logw - peak).sum())
    return Operator(space, np.diag((logw - lognorm).astype(np.complex128)))


def _below_threshold() -> ScenarioBundle:
    pot = ChemicalPotentials(beta=math.log(2.0), mu_a=0.0, mu_b=0.0, omega=1.0)
    engine = chemical_engine(pot, gamma_down=1.0)  # gamma_up = 0.5
    model = birthdeath.Linear(engine.gamma_up, engine.gamma_down)
    return ScenarioBundle(
        name="below_threshold",
        description=(
            "Absorbing chemistry (delta_g > 0): the mode relaxes to the "
            "thermal state with occupation ratio gamma_up/gamma_down = 1/2."
        ),
        generator=generator_for_model(model, pot.omega),
        model=model,
        pot=pot,
        dim=48,
        t_final=12.0,
        dt=0.005,
        sample_every=8,
        initial_kind="coherent",
        initial_value=1.0 + 0.0j,
    )


def _above_threshold_transient() -> ScenarioBundle:
    pot = ChemicalPotentials(
        beta=1.0, mu_a=1.0 + math.log(3.0), mu_b=0.0, omega=1.0
    )
    engine = chemical_engine(pot, gamma_down=0.05)  # gamma_up = 0.15
    model = birthdeath.Linear(engine.gamma_up, engine.gamma_down)
    # Horizon: the mean stays well inside dim = 256, but amplified noise
    # grows a fast exponential tail; top-level occupancy is ~2.4e-7 at
    # t = 19 and would cross the 1e-6 abort gate just before t = 20.
    return ScenarioBundle(
        name="above_threshold_transient",
        description=(
            "Amplifying chemistry (delta_g < 0) run as a transient: energy "
            "grows exponentially and the horizon is capped so the truncated "
            "ladder stays faithful."
        ),
        generator=generator_for_model(model, pot.omega),
        model=model,
        pot=pot,
        dim=256,
        t_final=19.0,
        dt=0.0025,
        sample_every=38,
        initial_kind="coherent",
        initial_value=2.0 + 0.0j,
    )


_SAT_A, _SAT_B, _SAT_C = 2.0, 0.1, 0.095  # mean (A/B - 1)/C = 200


def _saturated_pump() -> ScenarioBundle:
    a, b, c = _SAT_A, _SAT_B, _SAT_C
    model = birthdeath.SaturatedPump(a, b, c)
    return ScenarioBundle(
        name="saturated_pump",
        description=(
            "Gain saturation in the pump rate A(n+1)/(1+C(n+1)) against "
            "linear damping: stationary photon statistics are near-Poisson "
            "with mean (A/B-1)/C = 200."
        ),
        generator=generator_for_model(model, omega=0.2),
        model=model,
        pot=None,
        dim=320,
        t_final=40.0,
        dt=0.006,
        sample_every=32,
        initial_kind="poisson",
        initial_value=150.0,
    )


def _saturated_damp() -> ScenarioBundle:
    a, b, c = _SAT_A, _SAT_B, _SAT_C
    model = birthdeath.SaturatedDamp(a, b, c)
    return ScenarioBundle(
        name="saturated_damp",
        description=(
            "Linear gain A(n+1) against superlinear damping Bn(1+Cn): the "
            "rate ratio matches saturated_pump bond by bond, so the "
            "stationary distribution is identical."
        ),
        generator=generator_for_model(model, omega=0.2),
        model=model,
        pot=None,
        dim=320,
        t_final=4.0,
        dt=0.0004,
        sample_every=48,
        initial_kind="poisson",
        initial_value=150.0,
    )


def _loaded_laser() -> ScenarioBundle:
    pot = ChemicalPotentials(
        beta=1.0, mu_a=1.0 + math.log(2.0), mu_b=0.0, omega=1.0
    )
    engine = chemical_engine(pot, gamma_down=1.0)  # gamma_up = 2
    delta = 0.01  # delta/gamma_down = 0.01, n_mean = gamma_up/delta = 200
    model = birthdeath.Loaded(engine.gamma_up, engine.gamma_down, delta)
    return ScenarioBundle(
        name="loaded_laser",
        description=(
            "Amplifying chemistry with a quadratic-friction load "
            "(delta << gamma): pumped quanta flow through the mode into "
            "extracted work; stationary mean (gamma_up-gamma_down)/delta = 100."
        ),
        generator=generator_for_model(model, pot.omega),
        model=model,
        pot=pot,
        dim=208,
        t_final=8.0,
        dt=0.0005,
        sample_every=76,
        initial_kind="coherent",
        # |alpha|^2 = 120 starts above the stationary mean of 100 while its
        # Poissonian tail past dim = 208 stays ~1e-12, far under the gate
        initial_value=math.sqrt(120.0) + 0.0j,
    )


def _two_bath_qubit() -> ScenarioBundle:
    space = FockSpace(2)
    h = Operator(space, np.diag(np.array([0.0, 1.0], dtype=np.complex128)))
    sx = Operator(space, np.array([[0, 1], [1, 0]], dtype=np.complex128))
    gen = davies_generator(
        h,
        [(0, sx, lambda w: 0.4), (1, sx, lambda w: 0.6)],
        bath_temps=[0.5, 2.0],
    )
    return ScenarioBundle(
        name="two_bath_qubit",
        description=(
            "A two-level system between a hot (beta=0.5) and a cold "
            "(beta=2.0) bath: steady heat flows hot-to-cold and the "
            "per-bath entropy balance stays nonnegative."
        ),
        generator=gen,
        model=None,
        pot=None,
        dim=2,
        t_final=8.0,
        dt=0.004,
        sample_every=10,
        initial_kind="diag",
        initial_value=(0.2, 0.8),
    )


_PRESETS = {
    "below_threshold": _below_threshold,
    "above_threshold_transient": _above_threshold_transient,
    "saturated_pump": _saturated_pump,
    "saturated_damp": _saturated_damp,
    "loaded_laser": _loaded_laser,
    "two_bath_qubit": _two_bath_qubit,
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str) -> ScenarioBundle:
    """Look up a named scenario; raises UnknownPreset for anything else."""
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}"
        ) from None
    return factory()
