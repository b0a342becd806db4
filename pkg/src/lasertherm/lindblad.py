"""GKLS generators, time evolution, and stationary states.

Generator families
------------------
``GeneralGKLS``
    Explicit Hamiltonian plus arbitrary jump operators.
``LinearLaser``
    H = omega*N with jumps sqrt(gamma_down)*a and sqrt(gamma_up)*a†.
``NonlinearLaser``
    Jumps a*g_down(N) and a†*g_up(N) for caller-supplied rate-shape
    functions, evaluated by functional calculus on the number operator.
``LoadedLaser``
    A linear bath plus the quadratic-friction load jump sqrt(delta)*a*sqrt(N).
``DaviesNLevel``
    Per-bath eigenoperator jumps built by :func:`davies_generator`.

The ladder families (Linear/Nonlinear/Loaded) act on number-diagonal jump
structures, so their right-hand side reduces to three elementwise products
and two shifted adds per evaluation; :func:`evolve` exploits that, keeping
trajectories at dim ~ 300 to milliseconds per step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    DegenerateKernel,
    DegenerateSpectrum,
    DimensionMismatch,
    DomainError,
    NoStationaryState,
    StabilityError,
    StabilityWarning,
    TruncationError,
    VariantMismatch,
)
from .fock import DensityMatrix, FockSpace, Operator, annihilation_matrix
from .tolerances import TOLERANCES

__all__ = [
    "GeneralGKLS",
    "LinearLaser",
    "NonlinearLaser",
    "LoadedLaser",
    "DaviesNLevel",
    "GeneratorSpec",
    "Trajectory",
    "dissipator_apply",
    "generator_apply",
    "adjoint_apply",
    "evolve",
    "stationary_state",
    "davies_generator",
    "jump_operators",
]


# ---------------------------------------------------------------------------
# generator variants


@dataclass(frozen=True)
class GeneralGKLS:
    """Explicit GKLS data: optional Hamiltonian and a list of jump operators."""

    h: Operator | None
    jump_ops: tuple[Operator, ...]

    def __post_init__(self) -> None:
        jumps = tuple(self.jump_ops)
        object.__setattr__(self, "jump_ops", jumps)
        dims = {op.space.dim for op in jumps}
        if self.h is not None:
            dims.add(self.h.space.dim)
        if len(dims) > 1:
            raise DimensionMismatch(f"jump/Hamiltonian dims disagree: {sorted(dims)}")
        if self.h is not None and not self.h.is_hermitian():
            raise DomainError("Hamiltonian must be Hermitian")


@dataclass(frozen=True)
class LinearLaser:
    """Linear amplification/damping at rates gamma_up, gamma_down."""

    omega: float
    gamma_up: float
    gamma_down: float

    def __post_init__(self) -> None:
        if self.gamma_up < 0 or self.gamma_down < 0:
            raise DomainError("rates must be >= 0")


@dataclass(frozen=True)
class NonlinearLaser:
    """Number-dependent pump/damp shapes g_up(n), g_down(n) >= 0."""

    omega: float
    g_up: Callable[[int], float]
    g_down: Callable[[int], float]


@dataclass(frozen=True)
class LoadedLaser:
    """Linear bath plus a quadratic-friction load of strength delta."""

    omega: float
    gamma_up: float
    gamma_down: float
    delta: float

    def __post_init__(self) -> None:
        if self.gamma_up < 0 or self.gamma_down < 0 or self.delta < 0:
            raise DomainError("rates must be >= 0")

    def bath_generator(self) -> LinearLaser:
        """The chemical-bath part alone (no load)."""
        return LinearLaser(self.omega, self.gamma_up, self.gamma_down)

    def load_generator(self) -> "NonlinearLaser":
        """The load dissipator alone: jump sqrt(delta)*a*sqrt(N), no drift."""
        delta = self.delta
        return NonlinearLaser(
            0.0, lambda n: 0.0, lambda n, _d=delta: math.sqrt(_d * n)
        )


@dataclass(frozen=True)
class DaviesNLevel:
    """Secular (eigenoperator) jumps grouped per bath.

    Build instances through :func:`davies_generator`, which performs the
    spectral analysis and enforces the detailed-balance pairing of rates;
    direct construction only checks shapes.
    """

    h: Operator
    baths: tuple[tuple[Operator, ...], ...]
    bath_temps: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "baths", tuple(tuple(ops) for ops in self.baths)
        )
        object.__setattr__(self, "bath_temps", tuple(self.bath_temps))
        if len(self.baths) != len(self.bath_temps):
            raise DomainError("one temperature per bath required")
        dim = self.h.space.dim
        for ops in self.baths:
            for op in ops:
                if op.space.dim != dim:
                    raise DimensionMismatch("bath jump dim differs from H")

    @property
    def n_baths(self) -> int:
        return len(self.baths)

    def bath_generator(self, k: int) -> GeneralGKLS:
        """Dissipative part of bath k alone (no Hamiltonian drift)."""
        return GeneralGKLS(None, self.baths[k])


GeneratorSpec = GeneralGKLS | LinearLaser | NonlinearLaser | LoadedLaser | DaviesNLevel

_LADDER = (LinearLaser, NonlinearLaser, LoadedLaser)


# ---------------------------------------------------------------------------
# jump materialization


def _ladder_channels(
    gen: LinearLaser | NonlinearLaser | LoadedLaser, dim: int
) -> tuple[float, list[tuple[str, np.ndarray]]]:
    """(omega, [(direction, g values over n=0..dim-1), ...]) for a ladder family.

    ``g[n]`` multiplies the jump out of source level n: a down channel jumps
    n -> n-1 with amplitude sqrt(n)*g[n], an up channel jumps n -> n+1 with
    amplitude sqrt(n+1)*g[n] (suppressed out of the top level by truncation).
    """
    ns = np.arange(dim)
    if isinstance(gen, LinearLaser):
        chans = [
            ("down", np.full(dim, math.sqrt(gen.gamma_down))),
            ("up", np.full(dim, math.sqrt(gen.gamma_up))),
        ]
        return gen.omega, chans
    if isinstance(gen, LoadedLaser):
        chans = [
            ("down", np.full(dim, math.sqrt(gen.gamma_down))),
            ("down", np.sqrt(gen.delta * ns.astype(np.float64))),
            ("up", np.full(dim, math.sqrt(gen.gamma_up))),
        ]
        return gen.omega, chans
    g_dn = np.array([float(gen.g_down(int(n))) for n in ns])
    g_up = np.array([float(gen.g_up(int(n))) for n in ns])
    if g_dn.min() < 0 or g_up.min() < 0:
        raise DomainError("g_up/g_down must be >= 0 everywhere")
    return gen.omega, [("down", g_dn), ("up", g_up)]


def jump_operators(
    gen: GeneratorSpec, space: FockSpace | None = None
) -> tuple[Operator | None, tuple[Operator, ...]]:
    """Materialize (H, jump operators) as dense matrices.

    Ladder families need an explicit ``space``; matrix-backed variants carry
    their own and reject a conflicting one.
    """
    if isinstance(gen, _LADDER):
        if space is None:
            raise DomainError("ladder generators need an explicit space")
        dim = space.dim
        omega, chans = _ladder_channels(gen, dim)
        a = annihilation_matrix(space).entries
        ham = Operator(
            space, np.diag(omega * np.arange(dim, dtype=np.complex128))
        )
        jumps = []
        for direction, g in chans:
            if not np.any(g > 0):
                continue
            mat = a * g[None, :] if direction == "down" else a.conj().T * g[None, :]
            jumps.append(Operator(space, mat))
        return ham, tuple(jumps)
    if isinstance(gen, GeneralGKLS):
        owned = gen.h.space if gen.h is not None else (
            gen.jump_ops[0].space if gen.jump_ops else space
        )
        if owned is None:
            raise DomainError("empty GeneralGKLS has no space")
        if space is not None and space.dim != owned.dim:
            raise DimensionMismatch(
                f"generator lives on dim {owned.dim}, not {space.dim}"
            )
        return gen.h, gen.jump_ops
    if isinstance(gen, DaviesNLevel):
        if space is not None and space.dim != gen.h.space.dim:
            raise DimensionMismatch(
                f"generator lives on dim {gen.h.space.dim}, not {space.dim}"
            )
        return gen.h, tuple(op for ops in gen.baths for op in ops)
    raise VariantMismatch(f"unknown generator variant {type(gen).__name__}")


# ---------------------------------------------------------------------------
# fast appliers


class _DiagKernel:
    """Precomputed elementwise arrays for a ladder-family right-hand side."""

    def __init__(self, gen: LinearLaser | NonlinearLaser | LoadedLaser, dim: int):
        omega, chans = _ladder_channels(gen, dim)
        n = np.arange(dim, dtype=np.float64)
        gamma_tot = np.zeros(dim)
        a_dn = np.zeros((dim - 1, dim - 1))
        a_up = np.zeros((dim - 1, dim - 1))
        root = np.sqrt(n[1:])  # sqrt(1..dim-1)
        for direction, g in chans:
            if direction == "down":
                gamma_tot += n * g**2
                amp = root * g[1:]
                a_dn += np.outer(amp, amp)
            else:
                rate_up = (n + 1) * g**2
                rate_up[-1] = 0.0  # no up-jump out of the top level
                gamma_tot += rate_up
                amp = root * g[:-1]
                a_up += np.outer(amp, amp)
        self.c = (
            -1j * omega * (n[:, None] - n[None, :])
            - 0.5 * (gamma_tot[:, None] + gamma_tot[None, :])
        ).astype(np.complex128)
        self.a_dn = a_dn
        self.a_up = a_up
        self.bound = float(gamma_tot.max()) + abs(omega) * (dim - 1)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = self.c * rho
        out[:-1, :-1] += self.a_dn * rho[1:, 1:]
        out[1:, 1:] += self.a_up * rho[:-1, :-1]
        return out


class _MatrixKernel:
    """Generic GKLS right-hand side via an effective non-Hermitian drift."""

    def __init__(self, gen: GeneratorSpec, space: FockSpace | None):
        ham, jumps = jump_operators(gen, space)
        if ham is not None:
            dim = ham.space.dim
        elif jumps:
            dim = jumps[0].space.dim
        elif space is not None:
            dim = space.dim
        else:
            raise DomainError("generator has no operators and no space")
        h_eff = np.zeros((dim, dim), dtype=np.complex128)
        if ham is not None:
            h_eff += ham.entries
        self.jumps = [op.entries for op in jumps]
        norm_sq = 0.0
        for v in self.jumps:
            h_eff -= 0.5j * (v.conj().T @ v)
            norm_sq += float(np.linalg.norm(v) ** 2)
        self.h_eff = h_eff
        h_norm = float(np.linalg.norm(ham.entries)) if ham is not None else 0.0
        self.bound = 2.0 * h_norm + 2.0 * norm_sq

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = -1j * (self.h_eff @ rho - rho @ self.h_eff.conj().T)
        for v in self.jumps:
            out += v @ rho @ v.conj().T
        return out


def _kernel_for(gen: GeneratorSpec, space: FockSpace):
    if isinstance(gen, _LADDER):
        return _DiagKernel(gen, space.dim)
    return _MatrixKernel(gen, space)


# ---------------------------------------------------------------------------
# public appliers


def dissipator_apply(v: Operator, rho: Operator) -> Operator:
    """D[V]rho = V rho V† - (V†V rho + rho V†V)/2; traceless, Hermiticity-preserving."""
    if v.space.dim != rho.space.dim:
        raise DimensionMismatch(
            f"jump on dim {v.space.dim}, state on dim {rho.space.dim}"
        )
    vm, rm = v.entries, rho.entries
    vdv = vm.conj().T @ vm
    out = vm @ rm @ vm.conj().T - 0.5 * (vdv @ rm + rm @ vdv)
    return Operator(rho.space, out)


def generator_apply(gen: GeneratorSpec, rho: DensityMatrix | Operator) -> Operator:
    """L(rho): commutator drift plus every dissipator of the variant.

    Accepts any operator; density matrices are the intended input. The result
    is traceless and Hermiticity-preserving on Hermitian input.
    """
    kernel = _kernel_for(gen, rho.space)
    return Operator(rho.space, kernel.apply(rho.entries))


def adjoint_apply(gen: GeneratorSpec, a: Operator) -> Operator:
    """Heisenberg-picture image L*(A); satisfies Tr(A L(rho)) = Tr(L*(A) rho)."""
    ham, jumps = jump_operators(gen, a.space)
    am = a.entries
    out = np.zeros_like(am)
    if ham is not None:
        out += 1j * (ham.entries @ am - am @ ham.entries)
    for op in jumps:
        v = op.entries
        vdv = v.conj().T @ v
        out += v.conj().T @ am @ v - 0.5 * (vdv @ am + am @ vdv)
    return Operator(a.space, out)


# ---------------------------------------------------------------------------
# evolution


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of a GKLS master equation.

    ``leakage`` holds the top-level occupancy at each sample for ladder
    generators (zero for matrix-backed generators, whose space is exact);
    ``herm_corrections``/``trace_corrections`` log the magnitude of the
    re-Hermitization and trace renormalization applied at that sample, so
    integrator drift is visible rather than silent.
    """

    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    leakage: np.ndarray
    herm_corrections: np.ndarray
    trace_corrections: np.ndarray

    def __post_init__(self) -> None:
        for name in ("times", "leakage", "herm_corrections", "trace_corrections"):
            arr = np.asarray(getattr(self, name), dtype=np.float64).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        lengths = {
            self.times.size,
            len(self.states),
            self.leakage.size,
            self.herm_corrections.size,
            self.trace_corrections.size,
        }
        if len(lengths) != 1:
            raise DimensionMismatch("trajectory fields must have equal length")
        if self.times.size and np.any(np.diff(self.times) <= 0):
            raise DomainError("time stamps must increase strictly")

    def __len__(self) -> int:
        return len(self.states)


def evolve(
    gen: GeneratorSpec,
    rho0: DensityMatrix,
    t_final: float,
    dt: float,
    sample_every: int = 1,
) -> Trajectory:
    """Integrate d(rho)/dt = L(rho) with classic fixed-step RK4.

    The step count is round(t_final/dt) so the grid lands the horizon
    exactly; ``t_final = 0`` returns the one-point trajectory. Samples are
    taken at step 0, every ``sample_every`` steps, and at the final step.
    Each sampled state is re-Hermitized ((rho+rho†)/2) and trace-renormalized
    with the applied correction magnitudes logged on the trajectory, and the
    integration continues from the corrected matrix.

    Raises
    ------
    StabilityError
        When the trace drifts by more than ``TOLERANCES.trace_drift`` in a
        single step (the step size is unstable for the model's rates).
    TruncationError
        For ladder-family generators, when the top-level occupancy of a
        sample exceeds ``TOLERANCES.occupancy``; matrix-backed variants
        (``GeneralGKLS``/``DaviesNLevel``) treat their space as exact, so
        their recorded leakage is identically zero and never fatal.

    Warns
    -----
    StabilityWarning
        When dt times a crude generator-norm bound reaches 1.
    """
    if t_final < 0:
        raise DomainError(f"t_final must be >= 0, got {t_final!r}")
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if sample_every < 1:
        raise DomainError("sample_every must be >= 1")

    space = rho0.space
    kernel = _kernel_for(gen, space)
    if dt * kernel.bound >= 1.0:
        warnings.warn(
            f"dt={dt:g} times generator bound {kernel.bound:.3g} is "
            f"{dt * kernel.bound:.2f} >= 1; expect instability",
            StabilityWarning,
            stacklevel=2,
        )

    # Ladder families are truncations of an infinite ladder, so top-level
    # occupancy measures truncation leakage and is fatal past the tolerance.
    # Matrix-backed generators define their finite space as exact: nothing
    # can leak, and the top level is ordinary population.
    truncation_fatal = isinstance(gen, _LADDER)
    top = space.dim - 1
    rho = rho0.entries.astype(np.complex128).copy()

    times = [0.0]
    states = [rho0]
    leak0 = float(rho[top, top].real) if truncation_fatal else 0.0
    leakage = [leak0]
    herm_log = [0.0]
    trace_log = [0.0]
    if truncation_fatal and leak0 > TOLERANCES.occupancy:
        raise TruncationError(
            f"initial top-level occupancy {leak0:.3e} exceeds "
            f"{TOLERANCES.occupancy:.1e}"
        )
    if t_final == 0:
        return Trajectory(
            np.array(times), tuple(states), np.array(leakage),
            np.array(herm_log), np.array(trace_log),
        )

    n_steps = max(1, round(t_final / dt))
    h = t_final / n_steps
    trace_prev = float(np.trace(rho).real)
    for step in range(1, n_steps + 1):
        k1 = kernel.apply(rho)
        k2 = kernel.apply(rho + (0.5 * h) * k1)
        k3 = kernel.apply(rho + (0.5 * h) * k2)
        k4 = kernel.apply(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        trace_now = float(np.trace(rho).real)
        drift = abs(trace_now - trace_prev)
        if drift > TOLERANCES.trace_drift or not math.isfinite(trace_now):
            raise StabilityError(
                f"trace drifted by {drift:.3e} in one step at t={step * h:.6g}; "
                "reduce dt"
            )
        trace_prev = trace_now
        if step % sample_every == 0 or step == n_steps:
            # every entry of a density matrix satisfies |rho_mn| <= 1, so a
            # runaway entry is integrator blowup, not truncation pressure
            mx = float(np.max(np.abs(rho)))
            if not math.isfinite(mx) or mx > 2.0:
                raise StabilityError(
                    f"state entries reached {mx:.3e} at t={step * h:.6g}; "
                    "reduce dt"
                )
            herm_gap = 0.5 * float(np.max(np.abs(rho - rho.conj().T)))
            rho = 0.5 * (rho + rho.conj().T)
            tr = float(np.trace(rho).real)
            rho = rho / tr
            trace_prev = 1.0
            t = step * h
            occ = float(rho[top, top].real) if truncation_fatal else 0.0
            if truncation_fatal and occ > TOLERANCES.occupancy:
                raise TruncationError(
                    f"top-level occupancy {occ:.3e} at t={t:.6g} exceeds "
                    f"{TOLERANCES.occupancy:.1e}; enlarge the space"
                )
            times.append(t)
            states.append(
                DensityMatrix(Operator(space, rho), tol=TOLERANCES.evolving)
            )
            leakage.append(occ)
            herm_log.append(herm_gap)
            trace_log.append(abs(tr - 1.0))
    return Trajectory(
        np.array(times), tuple(states), np.array(leakage),
        np.array(herm_log), np.array(trace_log),
    )


# ---------------------------------------------------------------------------
# stationary states


def _ladder_existence_check(gen: GeneratorSpec, dim: int) -> None:
    if isinstance(gen, LinearLaser) or (
        isinstance(gen, LoadedLaser) and gen.delta == 0
    ):
        if not gen.gamma_up < gen.gamma_down:
            raise NoStationaryState(
                f"linear laser needs gamma_up < gamma_down, got "
                f"{gen.gamma_up} >= {gen.gamma_down}"
            )
        return
    if isinstance(gen, (NonlinearLaser, LoadedLaser)):
        _, chans = _ladder_channels(gen, dim)
        up = sum(
            (dim - 1) * g[dim - 2] ** 2 for d, g in chans if d == "up"
        )  # rate out of dim-2 upward: (n+1) g(n)^2 at n = dim-2
        down = sum(
            (dim - 1) * g[dim - 1] ** 2 for d, g in chans if d == "down"
        )
        if down <= 0 or not up / down < 1.0:
            raise NoStationaryState(
                "rate ratio has not dropped below one at the top level; "
                "no normalizable stationary state at this dimension"
            )


def stationary_state(
    gen: GeneratorSpec, space: FockSpace | None = None
) -> DensityMatrix:
    """Stationary state from the null space of the vectorized generator.

    The generator is flattened to a dim^2 x dim^2 matrix (row-major
    vectorization), its smallest singular vector is reshaped, Hermitized and
    renormalized, and the residual ||L(rho)|| is verified below 1e-8. The
    dense SVD costs O(dim^6): practical up to dim of a few tens. Large
    diagonal-ladder models should use
    :func:`lasertherm.birthdeath.stationary_distribution` instead.

    Ladder families need ``space``; their infinite-ladder existence
    conditions are checked first (a linear laser requires
    gamma_up < gamma_down; number-dependent families must have their rate
    ratio below one at the top level).

    Raises
    ------
    NoStationaryState
        When existence fails, the smallest singular value exceeds 1e-6, or
        the residual check fails.
    DegenerateKernel
        When the kernel is more than one-dimensional.
    """
    ham, jumps = jump_operators(gen, space)
    some = ham if ham is not None else (jumps[0] if jumps else None)
    if some is None:
        raise DomainError("generator has no operators at all")
    dim = some.space.dim
    wspace = some.space
    _ladder_existence_check(gen, dim)

    eye = np.eye(dim, dtype=np.complex128)
    lmat = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    if ham is not None:
        hm = ham.entries
        lmat += -1j * (np.kron(hm, eye) - np.kron(eye, hm.T))
    for op in jumps:
        v = op.entries
        vdv = v.conj().T @ v
        lmat += np.kron(v, v.conj())
        lmat -= 0.5 * (np.kron(vdv, eye) + np.kron(eye, vdv.T))

    _, svals, vh = np.linalg.svd(lmat)
    if svals[-1] > 1e-6:
        raise NoStationaryState(
            f"smallest singular value {svals[-1]:.3e} exceeds 1e-6"
        )
    if svals.size > 1 and svals[-2] < 1e-6:
        raise DegenerateKernel(
            f"kernel dimension > 1 (next singular value {svals[-2]:.3e})"
        )
    cand = vh[-1].conj().reshape(dim, dim)
    cand = 0.5 * (cand + cand.conj().T)
    tr = np.trace(cand).real
    if abs(tr) < 1e-10 * np.linalg.norm(cand):
        raise NoStationaryState("kernel vector is traceless; not a state")
    cand = cand / tr
    vals, vecs = np.linalg.eigh(cand)
    vals = np.clip(vals, 0.0, None)
    cand = (vecs * vals) @ vecs.conj().T
    cand = cand / np.trace(cand).real
    rho = DensityMatrix(Operator(wspace, cand))
    residual = float(np.linalg.norm(generator_apply(gen, rho).entries))
    if residual > 1e-8:
        raise NoStationaryState(f"residual ||L(rho)|| = {residual:.3e} > 1e-8")
    return rho


# ---------------------------------------------------------------------------
# Davies construction


def davies_generator(
    h: Operator,
    couplings: list[tuple[int, Operator, Callable[[float], float]]],
    bath_temps: list[float],
) -> DaviesNLevel:
    """Secular thermal generator for a static Hamiltonian.

    Parameters
    ----------
    h:
        Hermitian Hamiltonian with nondegenerate Bohr frequencies.
    couplings:
        Tuples (bath_index, coupling operator, rate function). Each coupling
        operator must be Hermitian; the rate function gives the downward rate
        gamma(omega) >= 0 at each Bohr frequency omega >= 0 that the coupling
        opens (omega = 0 drives pure dephasing through the coupling's
        diagonal part).
    bath_temps:
        Inverse temperature beta_k per bath.

    The upward partner of every downward jump gets the rate
    gamma(omega) * exp(-beta_k * omega), so each bath's sub-generator
    annihilates its own Gibbs state by construction.

    Raises
    ------
    DegenerateSpectrum
        When two energies or two Bohr gaps collide within 1e-9.
    DomainError
        For non-Hermitian inputs, bad bath indices, or negative rates.
    """
    if not h.is_hermitian():
        raise DomainError("Hamiltonian must be Hermitian")
    energies, basis = np.linalg.eigh(h.entries)
    dim = h.space.dim

    gaps: dict[tuple[int, int], float] = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            gaps[(i, j)] = float(energies[j] - energies[i])
    flat = sorted(gaps.values())
    for a, b in zip(flat, flat[1:]):
        if b - a < 1e-9:
            raise DegenerateSpectrum(
                f"Bohr frequencies {a:.9g} and {b:.9g} collide within 1e-9"
            )
    if flat and flat[0] < 1e-9:
        raise DegenerateSpectrum("degenerate energy levels (gap below 1e-9)")

    n_baths = len(bath_temps)
    per_bath: list[list[Operator]] = [[] for _ in range(n_baths)]
    for bath_index, coupling, gamma_fn in couplings:
        if not 0 <= bath_index < n_baths:
            raise DomainError(f"bath index {bath_index} out of range")
        if coupling.space.dim != dim:
            raise DimensionMismatch("coupling dim differs from H")
        if not coupling.is_hermitian():
            raise DomainError("coupling operators must be Hermitian")
        beta = float(bath_temps[bath_index])
        tilde = basis.conj().T @ coupling.entries @ basis
        for (i, j), omega in gaps.items():
            amp = tilde[i, j]
            if abs(amp) == 0.0:
                continue
            rate = float(gamma_fn(omega))
            if rate < 0:
                raise DomainError(f"gamma({omega:.6g}) = {rate} < 0")
            if rate == 0:
                continue
            lower = math.sqrt(rate) * amp * np.outer(basis[:, i], basis[:, j].conj())
            per_bath[bath_index].append(Operator(h.space, lower))
            up_rate = rate * math.exp(-beta * omega)
            if up_rate > 0:
                raise_ = (
                    math.sqrt(up_rate)
                    * np.conj(amp)
                    * np.outer(basis[:, j], basis[:, i].conj())
                )
                per_bath[bath_index].append(Operator(h.space, raise_))
        diag = np.diag(tilde).copy()
        rate0 = float(gamma_fn(0.0))
        if rate0 < 0:
            raise DomainError(f"gamma(0) = {rate0} < 0")
        if rate0 > 0 and np.any(np.abs(diag) > 0):
            dephase = math.sqrt(rate0) * (basis * diag[None, :]) @ basis.conj().T
            per_bath[bath_index].append(Operator(h.space, dephase))
    return DaviesNLevel(h, tuple(tuple(ops) for ops in per_bath), tuple(bath_temps))
