"""Classical birth-death dynamics of the photon-number distribution.

Four rate families plus a custom escape hatch, a fixed-step master-equation
integrator with a reflecting (and monitored) top level, product-form
stationary distributions accumulated in log space, and an event-driven
stochastic sampler that serves as an independent oracle for everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    BoundaryLeak,
    CutoffTooSmall,
    DomainError,
    NoStationaryState,
)
from .tolerances import TOLERANCES

__all__ = [
    "Linear",
    "SaturatedPump",
    "SaturatedDamp",
    "Loaded",
    "Custom",
    "BirthDeathModel",
    "PhotonDistribution",
    "DistributionSeries",
    "GillespieTrajectory",
    "rates",
    "rate_arrays",
    "evolve_distribution",
    "stationary_distribution",
    "gillespie_sample",
    "gillespie_endpoints",
    "moments",
    "poisson_pmf",
    "total_variation",
]


def _require_nonneg(**params: float) -> None:
    for name, value in params.items():
        if not value >= 0:
            raise DomainError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class Linear:
    """Up rate (n+1)*gamma_up, down rate n*gamma_down."""

    gamma_up: float
    gamma_down: float

    def __post_init__(self) -> None:
        _require_nonneg(gamma_up=self.gamma_up, gamma_down=self.gamma_down)


@dataclass(frozen=True)
class SaturatedPump:
    """Pumping saturates: up rate A(n+1)/(1+C(n+1)), down rate Bn."""

    A: float
    B: float
    C: float

    def __post_init__(self) -> None:
        _require_nonneg(A=self.A, B=self.B)
        if not self.C > 0:
            raise DomainError(f"C must be > 0, got {self.C!r}")


@dataclass(frozen=True)
class SaturatedDamp:
    """Damping saturates the gain: up rate A(n+1), down rate Bn(1+Cn)."""

    A: float
    B: float
    C: float

    def __post_init__(self) -> None:
        _require_nonneg(A=self.A, B=self.B)
        if not self.C > 0:
            raise DomainError(f"C must be > 0, got {self.C!r}")


@dataclass(frozen=True)
class Loaded:
    """Linear pump/damp plus a quadratic load: down rate gamma_down*n + delta*n^2."""

    gamma_up: float
    gamma_down: float
    delta: float

    def __post_init__(self) -> None:
        _require_nonneg(
            gamma_up=self.gamma_up, gamma_down=self.gamma_down, delta=self.delta
        )


@dataclass(frozen=True)
class Custom:
    """Arbitrary nonnegative rate functions; down(0) must vanish."""

    up: Callable[[int], float]
    down: Callable[[int], float]

    def __post_init__(self) -> None:
        if self.down(0) != 0:
            raise DomainError("down(0) must be 0")


BirthDeathModel = Linear | SaturatedPump | SaturatedDamp | Loaded | Custom


def rates(model: BirthDeathModel, n: int) -> tuple[float, float]:
    """Up/down jump rates out of level n.

    The down rate at n = 0 is zero for every family.
    """
    if n < 0:
        raise DomainError(f"level must be >= 0, got {n}")
    if isinstance(model, Linear):
        return model.gamma_up * (n + 1), model.gamma_down * n
    if isinstance(model, SaturatedPump):
        return model.A * (n + 1) / (1.0 + model.C * (n + 1)), model.B * n
    if isinstance(model, SaturatedDamp):
        return model.A * (n + 1), model.B * n * (1.0 + model.C * n)
    if isinstance(model, Loaded):
        return model.gamma_up * (n + 1), model.gamma_down * n + model.delta * n * n
    up, down = float(model.up(n)), float(model.down(n))
    if up < 0 or down < 0:
        raise DomainError(f"custom rates must be >= 0, got ({up}, {down}) at n={n}")
    return up, down


def rate_arrays(model: BirthDeathModel, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized rate tables (up[n], down[n]) for n = 0..count-1."""
    n = np.arange(count, dtype=np.float64)
    if isinstance(model, Linear):
        return model.gamma_up * (n + 1), model.gamma_down * n
    if isinstance(model, SaturatedPump):
        return model.A * (n + 1) / (1.0 + model.C * (n + 1)), model.B * n
    if isinstance(model, SaturatedDamp):
        return model.A * (n + 1), model.B * n * (1.0 + model.C * n)
    if isinstance(model, Loaded):
        return model.gamma_up * (n + 1), model.gamma_down * n + model.delta * n * n
    pairs = [rates(model, k) for k in range(count)]
    ups = np.array([p[0] for p in pairs])
    downs = np.array([p[1] for p in pairs])
    return ups, downs


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True, eq=False)
class PhotonDistribution:
    """Probabilities p_n over n = 0..cutoff (inclusive), immutable."""

    p: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.p, dtype=np.float64).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise DomainError("p must be a one-dimensional array")
        if float(arr.min()) < -1e-12:
            raise DomainError(f"negative probability {arr.min():.3e}")
        total = float(arr.sum())
        if abs(total - 1.0) > TOLERANCES.trace:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    @property
    def cutoff(self) -> int:
        return self.p.size - 1

    @classmethod
    def delta(cls, n: int, cutoff: int) -> "PhotonDistribution":
        if not 0 <= n <= cutoff:
            raise DomainError(f"delta level {n} outside 0..{cutoff}")
        arr = np.zeros(cutoff + 1)
        arr[n] = 1.0
        return cls(arr)

    @classmethod
    def poisson(cls, mean: float, cutoff: int) -> "PhotonDistribution":
        """Poisson(mean) truncated to 0..cutoff and renormalized."""
        pmf = poisson_pmf(mean, cutoff)
        return cls(pmf / pmf.sum())


def poisson_pmf(mean: float, n_max: int) -> np.ndarray:
    """Exact Poisson probabilities for n = 0..n_max (not renormalized)."""
    if mean < 0:
        raise DomainError(f"mean must be >= 0, got {mean!r}")
    if mean == 0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    n = np.arange(n_max + 1, dtype=np.float64)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(n[1:]))))
    with np.errstate(under="ignore"):
        return np.exp(n * math.log(mean) - mean - log_fact)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance between two distributions over 0..max(cutoff).

    Shorter arrays are zero-padded; any mass a raw (untruncated) reference
    keeps beyond both arrays is accounted through the normalization gap.
    """
    pa = np.asarray(p, dtype=np.float64)
    qa = np.asarray(q, dtype=np.float64)
    size = max(pa.size, qa.size)
    pa = np.pad(pa, (0, size - pa.size))
    qa = np.pad(qa, (0, size - qa.size))
    core = 0.5 * float(np.abs(pa - qa).sum())
    return core + 0.5 * abs(float(pa.sum()) - float(qa.sum()))


def moments(p: PhotonDistribution | np.ndarray) -> tuple[float, float, float]:
    """(mean, variance, Fano factor); Fano is NaN when the mean vanishes."""
    arr = p.p if isinstance(p, PhotonDistribution) else np.asarray(p, dtype=np.float64)
    n = np.arange(arr.size, dtype=np.float64)
    mean = float(n @ arr)
    var = float((n - mean) ** 2 @ arr)
    fano = var / mean if mean != 0.0 else math.nan
    return mean, var, fano


# ---------------------------------------------------------------------------
# master-equation integration


@dataclass(frozen=True, eq=False)
class DistributionSeries:
    """Sampled trajectory of a birth-death master equation."""

    times: np.ndarray
    distributions: tuple[PhotonDistribution, ...]

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=np.float64).copy()
        t.setflags(write=False)
        object.__setattr__(self, "times", t)
        if t.size != len(self.distributions):
            raise DomainError("times and distributions must have equal length")

    def __len__(self) -> int:
        return len(self.distributions)


def evolve_distribution(
    model: BirthDeathModel,
    p0: PhotonDistribution | np.ndarray,
    t_final: float,
    dt: float,
    sample_every: int = 1,
) -> DistributionSeries:
    """Integrate dp_n/dt = gain - loss with classic RK4 on a fixed grid.

    The top level reflects: births out of it are suppressed, and the flux
    they would have carried is monitored; if it ever exceeds
    ``TOLERANCES.boundary_flux`` the cutoff was too small and
    ``BoundaryLeak`` is raised. Samples are taken at t = 0, every
    ``sample_every`` steps, and at the final step.

    The step count is round(t_final/dt), so the effective step lands the
    horizon exactly; ``t_final = 0`` returns the one-point series.
    """
    if t_final < 0:
        raise DomainError(f"t_final must be >= 0, got {t_final!r}")
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if sample_every < 1:
        raise DomainError("sample_every must be >= 1")
    if not isinstance(p0, PhotonDistribution):
        p0 = PhotonDistribution(p0)
    size = p0.p.size
    top = size - 1
    up, down = rate_arrays(model, size)
    up_reflect = up.copy()
    up_reflect[top] = 0.0
    loss = up_reflect + down

    def rhs(p: np.ndarray) -> np.ndarray:
        out = -loss * p
        out[1:] += up_reflect[:-1] * p[:-1]
        out[:-1] += down[1:] * p[1:]
        return out

    def check_flux(p: np.ndarray, t: float) -> None:
        flux = up[top] * p[top]
        if flux > TOLERANCES.boundary_flux:
            raise BoundaryLeak(
                f"boundary flux {flux:.3e} at t={t:.6g} exceeds "
                f"{TOLERANCES.boundary_flux:.1e}; raise the cutoff"
            )

    p = p0.p.copy()
    check_flux(p, 0.0)
    times = [0.0]
    samples = [p0]
    if t_final == 0:
        return DistributionSeries(np.array(times), tuple(samples))

    n_steps = max(1, round(t_final / dt))
    h = t_final / n_steps
    for step in range(1, n_steps + 1):
        k1 = rhs(p)
        k2 = rhs(p + 0.5 * h * k1)
        k3 = rhs(p + 0.5 * h * k2)
        k4 = rhs(p + h * k3)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = step * h
        check_flux(p, t)
        if step % sample_every == 0 or step == n_steps:
            times.append(t)
            samples.append(PhotonDistribution(p))
    return DistributionSeries(np.array(times), tuple(samples))


# ---------------------------------------------------------------------------
# stationary distributions


def _existence_precheck(model: BirthDeathModel) -> None:
    if isinstance(model, Linear):
        if not model.gamma_up < model.gamma_down:
            raise NoStationaryState(
                f"linear chain needs gamma_up < gamma_down, got "
                f"{model.gamma_up} >= {model.gamma_down}"
            )
    elif isinstance(model, Loaded) and model.delta == 0:
        _existence_precheck(Linear(model.gamma_up, model.gamma_down))


def _mean_guess(model: BirthDeathModel) -> float:
    if isinstance(model, Linear):
        q = model.gamma_up / model.gamma_down if model.gamma_down > 0 else math.inf
        return q / (1.0 - q) if q < 1 else math.inf
    if isinstance(model, (SaturatedPump, SaturatedDamp)):
        if model.B == 0:
            return math.inf
        ratio = model.A / model.B
        if ratio > 1:
            return (ratio - 1.0) / model.C
        return ratio / (1.0 - ratio) if ratio < 1 else 1.0 / model.C
    if isinstance(model, Loaded):
        if model.delta == 0:
            return _mean_guess(Linear(model.gamma_up, model.gamma_down))
        drift = max(model.gamma_up - model.gamma_down, 0.0) / model.delta
        spread = math.sqrt(model.gamma_up / model.delta) if model.gamma_up > 0 else 1.0
        return drift + spread
    return 50.0


def _product_form(
    model: BirthDeathModel, cutoff: int
) -> tuple[np.ndarray, float] | None:
    """Normalized product-form weights over 0..cutoff plus a tail bound.

    Returns None when the ratio at the top has not dropped below one (the
    numerical stand-in for the infinite-ladder existence condition).
    """
    up, down = rate_arrays(model, cutoff + 2)
    if np.any(down[1:] <= 0):
        raise DomainError("down rate vanishes above level 0; no flow balance")
    log_ratio = np.log(np.maximum(up[:-2], 1e-300)) - np.log(down[1:-1])
    log_ratio[up[:-2] == 0] = -np.inf
    logw = np.concatenate(([0.0], np.cumsum(log_ratio)))
    top_ratio = up[cutoff] / down[cutoff + 1]
    if not top_ratio < 1.0:
        return None
    shift = logw.max()
    with np.errstate(under="ignore"):
        w = np.exp(logw - shift)
    total = float(w.sum())
    p = w / total
    tail = p[cutoff] * top_ratio / (1.0 - top_ratio)
    return p, float(tail)


def stationary_distribution(
    model: BirthDeathModel, cutoff: int | None = None
) -> PhotonDistribution:
    """Product-form stationary distribution p_n over 0..cutoff.

    With ``cutoff=None`` the cutoff starts at max(50, 10x a family-specific
    mean guess) and doubles until the geometric tail bound drops below
    ``TOLERANCES.tail_mass``.

    Raises
    ------
    NoStationaryState
        When the family's existence condition fails (a linear chain at or
        above threshold) or the rate ratio has not dropped below one at the
        cutoff.
    CutoffTooSmall
        When an explicit cutoff leaves more than the allowed tail mass, or
        auto-selection gives up.
    """
    _existence_precheck(model)
    if cutoff is not None:
        if cutoff < 1:
            raise DomainError("cutoff must be >= 1")
        result = _product_form(model, cutoff)
        if result is None:
            raise NoStationaryState(
                f"rate ratio at cutoff {cutoff} has not dropped below one"
            )
        p, tail = result
        if tail > TOLERANCES.tail_mass:
            raise CutoffTooSmall(
                f"tail bound {tail:.3e} at cutoff {cutoff} exceeds "
                f"{TOLERANCES.tail_mass:.1e}"
            )
        return PhotonDistribution(p)

    guess = _mean_guess(model)
    if not math.isfinite(guess):
        raise NoStationaryState("mean estimate diverges; no stationary state")
    size = max(50, int(math.ceil(10 * guess)))
    for _ in range(24):
        result = _product_form(model, size)
        if result is not None:
            p, tail = result
            if tail <= TOLERANCES.tail_mass:
                return PhotonDistribution(p)
        size *= 2
        if size > (1 << 22):
            break
    raise CutoffTooSmall("auto-selected cutoff grew past 2^22 without converging")


# ---------------------------------------------------------------------------
# stochastic sampling


@dataclass(frozen=True, eq=False)
class GillespieTrajectory:
    """Piecewise-constant sample path: levels[i] holds on [times[i], times[i+1])."""

    times: np.ndarray
    levels: np.ndarray
    t_final: float

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=np.float64).copy()
        lv = np.asarray(self.levels, dtype=np.int64).copy()
        if t.shape != lv.shape:
            raise DomainError("times and levels must have equal length")
        t.setflags(write=False)
        lv.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "levels", lv)

    @property
    def final_level(self) -> int:
        return int(self.levels[-1])


def gillespie_sample(
    model: BirthDeathModel, n0: int, t_final: float, seed: int
) -> GillespieTrajectory:
    """One exact stochastic-simulation trajectory, reproducible per seed.

    Waiting times are exponential with the total rate at the current level;
    the jump goes up or down with probability proportional to the respective
    rate. A level with zero total rate is absorbing and ends the trajectory.
    """
    if n0 < 0:
        raise DomainError(f"n0 must be >= 0, got {n0}")
    if t_final < 0:
        raise DomainError(f"t_final must be >= 0, got {t_final!r}")
    rng = np.random.default_rng(seed)
    t, n = 0.0, int(n0)
    times, levels = [0.0], [n]
    while True:
        up, down = rates(model, n)
        total = up + down
        if total <= 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t > t_final:
            break
        n = n + 1 if rng.random() * total < up else n - 1
        times.append(t)
        levels.append(n)
    return GillespieTrajectory(np.array(times), np.array(levels), float(t_final))


def _rates_vectorized(
    model: BirthDeathModel, n: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    nf = n.astype(np.float64)
    if isinstance(model, Linear):
        return model.gamma_up * (nf + 1), model.gamma_down * nf
    if isinstance(model, SaturatedPump):
        return model.A * (nf + 1) / (1.0 + model.C * (nf + 1)), model.B * nf
    if isinstance(model, SaturatedDamp):
        return model.A * (nf + 1), model.B * nf * (1.0 + model.C * nf)
    if isinstance(model, Loaded):
        return model.gamma_up * (nf + 1), model.gamma_down * nf + model.delta * nf * nf
    ups = np.array([rates(model, int(k))[0] for k in n])
    downs = np.array([rates(model, int(k))[1] for k in n])
    return ups, downs


def gillespie_endpoints(
    model: BirthDeathModel,
    n0: int,
    t_final: float,
    n_samples: int,
    seed: int,
) -> np.ndarray:
    """Levels at t_final for ``n_samples`` independent walkers (one seed).

    A vectorized ensemble version of :func:`gillespie_sample`: every walker
    follows the exact event-driven chain, all driven by one seeded generator,
    so the returned array is deterministic per (arguments, seed).
    """
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    if n0 < 0 or t_final < 0:
        raise DomainError("n0 and t_final must be >= 0")
    rng = np.random.default_rng(seed)
    level = np.full(n_samples, n0, dtype=np.int64)
    clock = np.zeros(n_samples)
    active = np.arange(n_samples)
    while active.size:
        up, down = _rates_vectorized(model, level[active])
        total = up + down
        alive = total > 0.0
        active = active[alive]
        if not active.size:
            break
        up, total = up[alive], total[alive]
        clock[active] += rng.standard_exponential(active.size) / total
        in_time = clock[active] <= t_final
        jumpers = active[in_time]
        if jumpers.size:
            u = rng.random(jumpers.size)
            step = np.where(u * total[in_time] < up[in_time], 1, -1)
            level[jumpers] += step
        active = jumpers
    return level
