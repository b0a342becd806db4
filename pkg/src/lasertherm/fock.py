"""Truncated Fock-space primitives.

Operators live on the first ``dim`` number states |0>..|dim-1| as dense
complex matrices. Truncation is caller-chosen; every state constructor
measures the tail mass it throws away and refuses (``TruncationError``) when
that leakage exceeds ``TOLERANCES.leakage``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DomainError, TruncationError
from .tolerances import TOLERANCES

__all__ = [
    "FockSpace",
    "Operator",
    "DensityMatrix",
    "annihilation_matrix",
    "number_matrix",
    "identity_matrix",
    "coherent_state",
    "thermal_state",
    "expectation",
    "husimi_grid",
]


@dataclass(frozen=True)
class FockSpace:
    """A truncated single-mode Fock space keeping levels 0..dim-1."""

    dim: int

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or self.dim < 2:
            raise DomainError(f"Fock dimension must be an integer >= 2, got {self.dim!r}")


def _as_matrix(entries: object, dim: int) -> np.ndarray:
    mat = np.asarray(entries, dtype=np.complex128)
    if mat.shape != (dim, dim):
        raise DimensionMismatch(
            f"expected a {dim}x{dim} matrix, got shape {mat.shape}"
        )
    mat = mat.copy()
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense complex matrix attached to its Fock space.

    Instances are immutable: ``entries`` is copied on construction and the
    copy is marked read-only. Arithmetic (`+`, `-`, scalar `*`, `@`) returns
    new operators on the same space and raises ``DimensionMismatch`` when
    spaces differ.
    """

    space: FockSpace
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _as_matrix(self.entries, self.space.dim))

    # -- light algebra -----------------------------------------------------
    def dagger(self) -> "Operator":
        return Operator(self.space, self.entries.conj().T)

    def is_hermitian(self, tol: float | None = None) -> bool:
        tol = TOLERANCES.herm if tol is None else tol
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def _check_space(self, other: "Operator") -> None:
        if self.space.dim != other.space.dim:
            raise DimensionMismatch(
                f"operators on dim {self.space.dim} and {other.space.dim}"
            )

    def __add__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.entries + other.entries)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.entries - other.entries)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.space, self.entries * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.entries @ other.entries)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, positive-semidefinite, unit-trace operator.

    Parameters
    ----------
    op:
        The candidate state.
    tol:
        Optional override for all three validation thresholds (Hermiticity,
        eigenvalue floor, trace). The integrator passes its relaxed
        mid-evolution tolerance here; plain constructions use the strict
        defaults from ``TOLERANCES``.
    """

    op: Operator
    tol: float | None = None

    def __post_init__(self) -> None:
        mat = self.op.entries
        herm_tol = TOLERANCES.herm if self.tol is None else self.tol
        psd_tol = TOLERANCES.psd if self.tol is None else self.tol
        trace_tol = TOLERANCES.trace if self.tol is None else self.tol
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > herm_tol:
            raise DomainError(f"state is not Hermitian: max deviation {herm_dev:.3e}")
        tr_dev = abs(np.trace(mat) - 1.0)
        if tr_dev > trace_tol:
            raise DomainError(f"state trace deviates from 1 by {tr_dev:.3e}")
        lo = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)).min())
        if lo < -psd_tol:
            raise DomainError(f"state has eigenvalue {lo:.3e} below -{psd_tol:.1e}")

    @property
    def space(self) -> FockSpace:
        return self.op.space

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    def diagonal(self) -> np.ndarray:
        """Real diagonal (populations) as a fresh writable array."""
        return self.entries.diagonal().real.copy()


# ---------------------------------------------------------------------------
# operator constructors


def annihilation_matrix(space: FockSpace) -> Operator:
    """Truncated lowering operator: entries[n-1, n] = sqrt(n)."""
    dim = space.dim
    mat = np.zeros((dim, dim), dtype=np.complex128)
    ns = np.arange(1, dim)
    mat[ns - 1, ns] = np.sqrt(ns)
    return Operator(space, mat)


def number_matrix(space: FockSpace) -> Operator:
    """Photon-number operator diag(0, 1, ..., dim-1)."""
    return Operator(space, np.diag(np.arange(space.dim, dtype=np.complex128)))


def identity_matrix(space: FockSpace) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=np.complex128))


# ---------------------------------------------------------------------------
# state constructors


def _coherent_amplitudes(alpha: complex, dim: int) -> tuple[np.ndarray, float]:
    """Truncated coherent amplitudes and the tail mass they leave out."""
    vec = np.zeros(dim, dtype=np.complex128)
    vec[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        vec[n] = vec[n - 1] * alpha / math.sqrt(n)
    kept = float(np.sum(np.abs(vec) ** 2))
    return vec, 1.0 - kept


def coherent_state(alpha: complex, space: FockSpace) -> DensityMatrix:
    """Truncated, renormalized coherent state |alpha><alpha|.

    Raises
    ------
    TruncationError
        If the Poissonian tail beyond the retained levels carries more than
        ``TOLERANCES.leakage`` probability.
    """
    vec, leak = _coherent_amplitudes(complex(alpha), space.dim)
    if leak > TOLERANCES.leakage:
        raise TruncationError(
            f"coherent state |alpha|^2={abs(alpha)**2:.3g} leaks {leak:.3e} "
            f"past dim={space.dim}"
        )
    vec = vec / math.sqrt(float(np.sum(np.abs(vec) ** 2)))
    return DensityMatrix(Operator(space, np.outer(vec, vec.conj())))


def thermal_state(beta_omega: float, space: FockSpace) -> DensityMatrix:
    """Geometric thermal state with p_n proportional to exp(-beta_omega*n)."""
    if not beta_omega > 0:
        raise DomainError(f"beta_omega must be > 0, got {beta_omega!r}")
    with np.errstate(under="ignore"):
        weights = np.exp(-beta_omega * np.arange(space.dim, dtype=np.float64))
    weights /= weights.sum()
    return DensityMatrix(Operator(space, np.diag(weights.astype(np.complex128))))


# ---------------------------------------------------------------------------
# functionals


def expectation(rho: DensityMatrix, a: Operator) -> complex:
    """Tr(rho A). Real within 1e-12 when A is Hermitian."""
    if rho.space.dim != a.space.dim:
        raise DimensionMismatch(
            f"state on dim {rho.space.dim}, observable on dim {a.space.dim}"
        )
    return complex(np.sum(rho.entries.T * a.entries))


def _coherent_grid_vectors(
    alphas: np.ndarray, dim: int
) -> tuple[np.ndarray, np.ndarray]:
    """Renormalized coherent amplitudes for many alphas, plus leakages.

    Log-space evaluation keeps the row-wise products stable for |alpha|^2 up
    to several hundred.
    """
    n = np.arange(dim, dtype=np.float64)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.maximum(n[1:], 1.0)))))
    absa = np.abs(alphas)
    # log |c_n| = n log|alpha| - log(n!)/2 - |alpha|^2/2; the 1e-300 floor
    # underflows exp() to the exact alpha -> 0 limit without inf*0 noise
    log_absa = np.log(np.maximum(absa, 1e-300))
    log_mod = (
        np.outer(log_absa, n) - 0.5 * log_fact[None, :] - 0.5 * (absa**2)[:, None]
    )
    with np.errstate(under="ignore"):
        mods = np.exp(log_mod)
    phases = np.exp(1j * np.outer(np.angle(alphas), n))
    vecs = mods * phases
    kept = np.sum(mods**2, axis=1)
    leak = 1.0 - kept
    vecs = vecs / np.sqrt(kept)[:, None]
    return vecs, leak


def husimi_grid(
    rho: DensityMatrix,
    re_range: tuple[float, float],
    im_range: tuple[float, float],
    resolution: int,
) -> np.ndarray:
    """Husimi function Q(alpha) = <alpha|rho|alpha> / pi on a square grid.

    Parameters
    ----------
    rho:
        State to scan.
    re_range, im_range:
        Inclusive (min, max) bounds for Re(alpha) and Im(alpha).
    resolution:
        Number of grid points per axis (>= 2).

    Returns
    -------
    numpy.ndarray
        Real array of shape (resolution, resolution); rows run over
        Im(alpha) ascending, columns over Re(alpha) ascending. Values lie in
        [0, 1/pi].

    Raises
    ------
    TruncationError
        When any grid point needs more coherent-state tail than the space
        retains (same 1e-10 gate as ``coherent_state``).
    DomainError
        For a malformed grid.
    """
    if resolution < 2:
        raise DomainError("resolution must be >= 2")
    re_lo, re_hi = float(re_range[0]), float(re_range[1])
    im_lo, im_hi = float(im_range[0]), float(im_range[1])
    if not (re_hi > re_lo and im_hi > im_lo):
        raise DomainError("grid ranges must satisfy max > min")
    res = np.linspace(re_lo, re_hi, resolution)
    ims = np.linspace(im_lo, im_hi, resolution)
    alphas = (res[None, :] + 1j * ims[:, None]).ravel()
    vecs, leak = _coherent_grid_vectors(alphas, rho.space.dim)
    worst = float(leak.max())
    if worst > TOLERANCES.leakage:
        raise TruncationError(
            f"husimi grid corner leaks {worst:.3e} past dim={rho.space.dim}; "
            "shrink the grid or enlarge the space"
        )
    q = np.einsum("pi,ij,pj->p", vecs.conj(), rho.entries, vecs).real / math.pi
    return q.reshape(resolution, resolution)
