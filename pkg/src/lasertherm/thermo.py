"""Entropies, currents, power, and the first/second-law ledgers.

Sign conventions
----------------
``photon_flux`` is the rate the bath feeds quanta into the mode,
j = Tr[N L_bath(rho)].  Molecular currents are j_A = -j (fuel consumed) and
j_B = +j (product released), so the chemical heat current J = DeltaG * j and
the oscillator energy balance dE/dt = omega*j - P are two spellings of the
same first law.  ``load_power`` P >= 0 is work delivered to the load.

Matrix logarithms are taken only through eigendecompositions of Hermitian
matrices.  Rank-deficient states in entropy-production formulas are mixed
with ``REGULARIZATION_EPS`` of the maximally mixed state (logged at debug
level) so ln(rho) stays finite; full-rank states are used as-is.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    InsufficientSamples,
    VariantMismatch,
)
from .fock import DensityMatrix, FockSpace, Operator, annihilation_matrix
from .lindblad import (
    DaviesNLevel,
    GeneratorSpec,
    LinearLaser,
    LoadedLaser,
    NonlinearLaser,
    Trajectory,
    generator_apply,
)

__all__ = [
    "ChemicalPotentials",
    "ThermoReport",
    "REGULARIZATION_EPS",
    "von_neumann_entropy",
    "relative_entropy",
    "log_reference_chemical",
    "spohn_production",
    "heat_current_additive",
    "photon_flux",
    "heat_current_chemical",
    "load_power",
    "residual_entropy_production",
    "passive_state",
    "ergotropy",
    "semiclassical_work",
    "trajectory_report",
    "first_law_report",
    "second_law_report",
]

logger = logging.getLogger(__name__)

REGULARIZATION_EPS = 1e-12
_EIG_FLOOR = 1e-14
_LADDER = (LinearLaser, NonlinearLaser, LoadedLaser)


@dataclass(frozen=True)
class ChemicalPotentials:
    """Isothermal chemical environment: inverse temperature and potentials.

    ``delta_g`` = omega + mu_b - mu_a is the free energy released per
    emitted quantum; negative delta_g is the amplifying (pumping) regime.
    """

    beta: float
    mu_a: float
    mu_b: float
    omega: float

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta!r}")
        if not self.omega > 0:
            raise DomainError(f"omega must be > 0, got {self.omega!r}")

    @property
    def delta_g(self) -> float:
        return self.omega + self.mu_b - self.mu_a


@dataclass(frozen=True)
class ThermoReport:
    """One time sample of the thermodynamic ledger.

    ``first_law_residual`` is dE/dt - (J - mu_A j_A - mu_B j_B - P), which
    algebraically equals dE/dt - (omega*j - P); ``second_law_lhs`` is
    dS/dt - beta*J + ds_res (or the per-bath form for multi-bath
    generators).  Entries that need data the scenario lacks (chemical
    potentials, a number ladder) are NaN.
    """

    time: float
    energy: float
    entropy: float
    photon_flux: float
    heat_current: float
    j_a: float
    j_b: float
    load_power: float
    ds_res: float
    first_law_residual: float
    second_law_lhs: float


# ---------------------------------------------------------------------------
# low-level helpers


def _diag_or_none(mat: np.ndarray) -> np.ndarray | None:
    """The real diagonal when the matrix is numerically diagonal, else None."""
    off = mat.copy()
    np.fill_diagonal(off, 0.0)
    if off.size == 0 or np.max(np.abs(off)) < 1e-14:
        return np.diagonal(mat).real.copy()
    return None


def _check_dims(a_dim: int, b_dim: int, what: str) -> None:
    if a_dim != b_dim:
        raise DimensionMismatch(f"{what}: dims {a_dim} and {b_dim} differ")


def _regularize_probs(p: np.ndarray) -> np.ndarray:
    """Mix with the flat distribution when any weight sits below the floor."""
    if p.min() < _EIG_FLOOR:
        logger.debug(
            "regularizing rank-deficient state (min weight %.3e) with eps=%g",
            p.min(), REGULARIZATION_EPS,
        )
        return (1.0 - REGULARIZATION_EPS) * p + REGULARIZATION_EPS / p.size
    return p


def _split_load(gen: GeneratorSpec) -> GeneratorSpec:
    """A LoadedLaser handed to a load-only functional means its load part."""
    if isinstance(gen, LoadedLaser):
        return gen.load_generator()
    return gen


def _split_bath(gen: GeneratorSpec) -> GeneratorSpec:
    """A LoadedLaser handed to a bath-only functional means its bath part."""
    if isinstance(gen, LoadedLaser):
        return gen.bath_generator()
    return gen


# ---------------------------------------------------------------------------
# entropies


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -Tr[rho ln rho]; weights below 1e-14 contribute zero."""
    diag = _diag_or_none(rho.entries)
    w = diag if diag is not None else np.linalg.eigvalsh(rho.entries)
    w = np.clip(w, 0.0, 1.0)
    w = w[w >= _EIG_FLOOR]
    if w.size == 0:
        return 0.0
    return float(-(w * np.log(w)).sum())


def relative_entropy(rho1: DensityMatrix, rho2: DensityMatrix) -> float:
    """S(rho1|rho2) = Tr[rho1 (ln rho1 - ln rho2)], +inf off rho2's support.

    Support failure is declared when eigenvalues of rho2 below 1e-12 carry
    more than 1e-10 of rho1's weight.
    """
    _check_dims(rho1.space.dim, rho2.space.dim, "relative_entropy")
    d1 = _diag_or_none(rho1.entries)
    d2 = _diag_or_none(rho2.entries)
    if d1 is not None and d2 is not None:
        w1 = np.clip(d1, 0.0, 1.0)
        w2 = np.clip(d2, 0.0, 1.0)
        overlap = w1
    else:
        w1 = np.clip(np.linalg.eigvalsh(rho1.entries), 0.0, 1.0)
        vals2, vecs2 = np.linalg.eigh(rho2.entries)
        w2 = np.clip(vals2, 0.0, 1.0)
        overlap = np.einsum(
            "ki,kl,li->i", vecs2.conj(), rho1.entries, vecs2
        ).real
    support = w2 >= 1e-12
    stray = float(np.clip(overlap, 0.0, None)[~support].sum())
    if stray > 1e-10:
        return math.inf
    mask1 = w1 >= _EIG_FLOOR
    term1 = float((w1[mask1] * np.log(w1[mask1])).sum())
    ov = np.clip(overlap[support], 0.0, None)
    term2 = float((ov * np.log(w2[support])).sum())
    return term1 - term2


def log_reference_chemical(pot: ChemicalPotentials, space: FockSpace) -> Operator:
    """ln(sigma) = -beta*DeltaG*(a'a) as a diagonal operator.

    The reference weight exp(-beta*DeltaG*n) may be unnormalizable (DeltaG
    < 0 grows with n); only its logarithm is ever represented, and the
    missing additive normalization constant drops out of every trace
    against a traceless operator.
    """
    ns = np.arange(space.dim, dtype=np.float64)
    return Operator(
        space, np.diag((-pot.beta * pot.delta_g * ns).astype(np.complex128))
    )


# ---------------------------------------------------------------------------
# production functionals


def spohn_production(
    gen: GeneratorSpec, rho: DensityMatrix, log_sigma: Operator
) -> float:
    """Entropy production -Tr[L(rho)(ln rho - ln sigma)] against a reference.

    Any stationary reference of ``gen`` makes this nonnegative, including
    unnormalized references supplied through their logarithm only.
    Rank-deficient states are mixed with 1e-12 of the maximally mixed state
    first (same eigenvectors, shifted weights).
    """
    _check_dims(rho.space.dim, log_sigma.space.dim, "spohn_production")
    dim = rho.space.dim
    diag = _diag_or_none(rho.entries)
    ls_diag = _diag_or_none(log_sigma.entries)
    if diag is not None and ls_diag is not None:
        p = _regularize_probs(np.clip(diag, 0.0, None))
        flow = generator_apply(
            gen, Operator(rho.space, np.diag(p.astype(np.complex128)))
        )
        fdiag = np.diagonal(flow.entries).real
        return float(-(fdiag * (np.log(p) - ls_diag)).sum())
    w, vecs = np.linalg.eigh(rho.entries)
    w = np.clip(w, 0.0, None)
    w_reg = _regularize_probs(w / w.sum())
    reg_entries = (vecs * w_reg) @ vecs.conj().T
    flow = generator_apply(gen, Operator(rho.space, reg_entries)).entries
    ln_rho = (vecs * np.log(w_reg)) @ vecs.conj().T
    diff = ln_rho - log_sigma.entries
    return float(-np.sum(flow.T * diff).real)


def residual_entropy_production(rho: DensityMatrix, gen_load: GeneratorSpec) -> float:
    """Load-channel production dS_res = -Tr[L_load(rho) ln rho].

    For a diagonal state under the quadratic-friction load this equals
    delta * sum_k [k^2 p_k - (k+1)^2 p_{k+1}] ln p_k.  A full ``LoadedLaser``
    is interpreted as its load part.  States are regularized exactly as in
    :func:`spohn_production`.
    """
    gen_load = _split_load(gen_load)
    diag = _diag_or_none(rho.entries)
    if diag is not None:
        p = _regularize_probs(np.clip(diag, 0.0, None))
        flow = generator_apply(
            gen_load, Operator(rho.space, np.diag(p.astype(np.complex128)))
        )
        fdiag = np.diagonal(flow.entries).real
        return float(-(fdiag * np.log(p)).sum())
    w, vecs = np.linalg.eigh(rho.entries)
    w = np.clip(w, 0.0, None)
    w_reg = _regularize_probs(w / w.sum())
    reg_entries = (vecs * w_reg) @ vecs.conj().T
    flow = generator_apply(gen_load, Operator(rho.space, reg_entries)).entries
    ln_rho = (vecs * np.log(w_reg)) @ vecs.conj().T
    return float(-np.sum(flow.T * ln_rho).real)


# ---------------------------------------------------------------------------
# currents and power


def heat_current_additive(rho: DensityMatrix, gen_k: GeneratorSpec, h: Operator) -> float:
    """Heat current from one bath: J_k = Tr[H L_k(rho)].

    Pass the bath's dissipative sub-generator (for a Davies model,
    ``gen.bath_generator(k)``); the Hamiltonian drift contributes nothing
    to Tr[H L(rho)] and may be included or not.
    """
    _check_dims(rho.space.dim, h.space.dim, "heat_current_additive")
    flow = generator_apply(gen_k, rho).entries
    return float(np.sum(flow.T * h.entries).real)


def photon_flux(rho: DensityMatrix, gen_bath: GeneratorSpec) -> float:
    """Quanta per unit time fed to the mode by the bath: Tr[N L_bath(rho)].

    A full ``LoadedLaser`` is interpreted as its bath part; pass
    ``load_generator()`` explicitly to get the (negative) load drain.
    """
    gen_bath = _split_bath(gen_bath)
    if isinstance(gen_bath, DaviesNLevel):
        raise VariantMismatch(
            "photon_flux needs a number-ladder generator, not DaviesNLevel"
        )
    flow = generator_apply(gen_bath, rho).entries
    ns = np.arange(rho.space.dim, dtype=np.float64)
    return float((np.diagonal(flow).real * ns).sum())


def heat_current_chemical(j: float, pot: ChemicalPotentials) -> float:
    """J = DeltaG * j: heat drawn from the isothermal chemical environment."""
    return pot.delta_g * j


def load_power(rho: DensityMatrix, omega: float, delta: float) -> float:
    """Work flow to the load: P = omega * delta * <(a'a)^2> >= 0."""
    if delta < 0:
        raise DomainError(f"delta must be >= 0, got {delta!r}")
    ns = np.arange(rho.space.dim, dtype=np.float64)
    n2 = float((rho.diagonal() * ns**2).sum())
    return omega * delta * n2


# ---------------------------------------------------------------------------
# work storage


def passive_state(rho: DensityMatrix, h: Operator) -> DensityMatrix:
    """The zero-ergotropy rearrangement of rho's spectrum along H.

    Eigenvalues of rho, sorted descending, are attached to the energy levels
    of H sorted ascending.  Ties in either spectrum are broken by the stable
    ascending order of the underlying eigendecomposition; ergotropy is
    invariant under the tie choice.
    """
    _check_dims(rho.space.dim, h.space.dim, "passive_state")
    if not h.is_hermitian():
        raise DomainError("H must be Hermitian")
    _, evecs = np.linalg.eigh(h.entries)
    w = np.sort(np.clip(np.linalg.eigvalsh(rho.entries), 0.0, None))[::-1]
    w = w / w.sum()
    entries = (evecs * w) @ evecs.conj().T
    return DensityMatrix(Operator(rho.space, entries))


def ergotropy(rho: DensityMatrix, h: Operator) -> float:
    """Unitarily extractable work: Tr[rho H] - Tr[passive(rho) H] >= 0."""
    _check_dims(rho.space.dim, h.space.dim, "ergotropy")
    if not h.is_hermitian():
        raise DomainError("H must be Hermitian")
    evals = np.linalg.eigvalsh(h.entries)
    w = np.sort(np.clip(np.linalg.eigvalsh(rho.entries), 0.0, None))[::-1]
    energy = float(np.sum(rho.entries.T * h.entries).real)
    passive_energy = float((w * evals).sum())
    return energy - passive_energy


def semiclassical_work(rho: DensityMatrix, omega: float) -> float:
    """Coherent (amplitude) part of the stored energy: omega * |<a>|^2."""
    a = annihilation_matrix(rho.space)
    amp = complex(np.sum(rho.entries.T * a.entries))
    return omega * abs(amp) ** 2


# ---------------------------------------------------------------------------
# law reports


def _ladder_report(
    trajectory: Trajectory,
    gen_bath: GeneratorSpec,
    gen_load: GeneratorSpec | None,
    pot: ChemicalPotentials | None,
    log_sigma: Operator | None,
) -> list[ThermoReport]:
    space = trajectory.states[0].space
    ns = np.arange(space.dim, dtype=np.float64)
    omega = gen_bath.omega

    times = trajectory.times
    count = len(trajectory.states)
    energy = np.empty(count)
    entropy = np.empty(count)
    flux = np.empty(count)
    power = np.zeros(count)
    ds_res = np.zeros(count)
    ref_trace = np.zeros(count)

    ls_diag = (
        np.diagonal(log_sigma.entries).real if log_sigma is not None else None
    )
    for i, state in enumerate(trajectory.states):
        p = state.diagonal()
        energy[i] = omega * float((p * ns).sum())
        entropy[i] = von_neumann_entropy(state)
        bath_flow = generator_apply(gen_bath, state).entries
        flux[i] = float((np.diagonal(bath_flow).real * ns).sum())
        total_diag = np.diagonal(bath_flow).real.copy()
        if gen_load is not None:
            load_flow = generator_apply(gen_load, state).entries
            load_diag = np.diagonal(load_flow).real
            total_diag = total_diag + load_diag
            power[i] = -omega * float((load_diag * ns).sum())
            ds_res[i] = residual_entropy_production(state, gen_load)
        if ls_diag is not None:
            ref_trace[i] = float((total_diag * ls_diag).sum())

    de_dt = np.gradient(energy, times)
    ds_dt = np.gradient(entropy, times)
    if pot is not None:
        heat = pot.delta_g * flux
        lhs = ds_dt - pot.beta * heat + ds_res
    elif log_sigma is not None:
        heat = np.full(count, math.nan)
        lhs = ds_dt + ref_trace
    else:
        heat = np.full(count, math.nan)
        lhs = np.full(count, math.nan)
    residual = de_dt - (omega * flux - power)
    return [
        ThermoReport(
            time=float(times[i]),
            energy=float(energy[i]),
            entropy=float(entropy[i]),
            photon_flux=float(flux[i]),
            heat_current=float(heat[i]),
            j_a=float(-flux[i]),
            j_b=float(flux[i]),
            load_power=float(power[i]),
            ds_res=float(ds_res[i]),
            first_law_residual=float(residual[i]),
            second_law_lhs=float(lhs[i]),
        )
        for i in range(count)
    ]


def _davies_report(
    trajectory: Trajectory, gen: DaviesNLevel
) -> list[ThermoReport]:
    times = trajectory.times
    count = len(trajectory.states)
    energy = np.empty(count)
    entropy = np.empty(count)
    heat = np.empty(count)
    weighted = np.empty(count)
    for i, state in enumerate(trajectory.states):
        energy[i] = float(np.sum(state.entries.T * gen.h.entries).real)
        entropy[i] = von_neumann_entropy(state)
        total = 0.0
        total_weighted = 0.0
        for k, beta in enumerate(gen.bath_temps):
            jk = heat_current_additive(state, gen.bath_generator(k), gen.h)
            total += jk
            total_weighted += beta * jk
        heat[i] = total
        weighted[i] = total_weighted
    de_dt = np.gradient(energy, times)
    ds_dt = np.gradient(entropy, times)
    return [
        ThermoReport(
            time=float(times[i]),
            energy=float(energy[i]),
            entropy=float(entropy[i]),
            photon_flux=math.nan,
            heat_current=float(heat[i]),
            j_a=math.nan,
            j_b=math.nan,
            load_power=0.0,
            ds_res=0.0,
            first_law_residual=float(de_dt[i] - heat[i]),
            second_law_lhs=float(ds_dt[i] - weighted[i]),
        )
        for i in range(count)
    ]


def trajectory_report(
    trajectory: Trajectory,
    gen_bath: GeneratorSpec,
    gen_load: GeneratorSpec | None = None,
    pot: ChemicalPotentials | None = None,
    log_sigma: Operator | None = None,
) -> list[ThermoReport]:
    """Full thermodynamic ledger along a trajectory, one report per sample.

    Ladder generators: energy and flux come from the number ladder;
    ``second_law_lhs`` is dS/dt - beta*J + dS_res when ``pot`` is given,
    and dS/dt + Tr[L(rho) ln sigma] against a stationary reference
    ``log_sigma`` otherwise (one of the two is required).  A ``LoadedLaser``
    passed as ``gen_bath`` is split into its bath and load parts
    automatically.  ``DaviesNLevel`` generators report the per-bath forms
    instead: J = sum_k J_k, lhs = dS/dt - sum_k beta_k J_k; ladder-only
    entries are NaN.

    Derivatives use centered differences on the sample grid (one-sided at
    the ends), so law residuals carry an O(dt^2) differencing error on
    non-stationary stretches.
    """
    if len(trajectory.states) < 3:
        raise InsufficientSamples(
            f"need >= 3 samples for finite differences, got {len(trajectory.states)}"
        )
    if isinstance(gen_bath, DaviesNLevel):
        return _davies_report(trajectory, gen_bath)
    if isinstance(gen_bath, LoadedLaser) and gen_load is None:
        gen_load = gen_bath.load_generator()
        gen_bath = gen_bath.bath_generator()
    if not isinstance(gen_bath, _LADDER):
        raise DomainError("trajectory_report needs a ladder or Davies generator")
    return _ladder_report(trajectory, gen_bath, gen_load, pot, log_sigma)


def first_law_report(
    trajectory: Trajectory,
    gen_bath: GeneratorSpec,
    gen_load: GeneratorSpec | None = None,
    pot: ChemicalPotentials | None = None,
    *,
    log_sigma: Operator | None = None,
) -> list[ThermoReport]:
    """Energy-balance ledger: see :func:`trajectory_report`."""
    return trajectory_report(trajectory, gen_bath, gen_load, pot, log_sigma)


def second_law_report(
    trajectory: Trajectory,
    gen_bath: GeneratorSpec,
    gen_load: GeneratorSpec | None = None,
    pot: ChemicalPotentials | None = None,
    *,
    log_sigma: Operator | None = None,
) -> list[ThermoReport]:
    """Entropy-balance ledger: see :func:`trajectory_report`.

    Unlike the first-law view, the entropy balance needs a temperature or a
    stationary reference: for ladder generators one of ``pot``/``log_sigma``
    is required.
    """
    if (
        not isinstance(gen_bath, DaviesNLevel)
        and pot is None
        and log_sigma is None
    ):
        raise DomainError(
            "second-law accounting needs chemical potentials or a "
            "stationary log-reference"
        )
    return trajectory_report(trajectory, gen_bath, gen_load, pot, log_sigma)
