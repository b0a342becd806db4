"""Config-driven scenario runner.

Subcommands
-----------
``lasertherm run --config cfg.json [--out DIR] [--seed N] [--quiet]``
    Evolve a scenario and write the requested outputs.
``lasertherm sweep --config cfg.json [--seed N] [--quiet]``
    Stationary summary rows over a parameter grid.

Config schema (JSON, ``schema_version: 1``)
-------------------------------------------
::

    {
      "schema_version": 1,
      "scenario": "loaded_laser",          // preset name, or inline object:
      //  {"family": "linear",         "omega":, "gamma_up":, "gamma_down":,
      //   "potentials": {"beta":, "mu_a":, "mu_b":}}   (potentials optional;
      //   gamma_up may be omitted when potentials fix it by detailed balance)
      //  {"family": "loaded",         ... + "delta":}
      //  {"family": "saturated_pump", "omega":, "A":, "B":, "C":}
      //  {"family": "saturated_damp", "omega":, "A":, "B":, "C":}
      "dim": 208,                          // required inline, optional override for presets
      "t_final": 8.0, "dt": 5e-4, "sample_every": 76,   // preset overrides
      "seed": 0,                           // reserved for stochastic outputs; sweeps
                                           // derive per-point seeds from it
      "outputs": ["timeseries", "stationary", "husimi"],
      "out_dir": "results",
      "initial": {"kind": "coherent", "alpha": [11.8, 0.0]},
      //  kinds: coherent {alpha: x or [re, im]}, thermal {beta_omega},
      //         number {n}, poisson {mean}, stationary {}
      "husimi": {"re_min": -12, "re_max": 12, "im_min": -12, "im_max": 12,
                 "resolution": 64},
      "sweep": {"parameter": "delta", "values": [0.005, 0.01, 0.02]}
    }

Outputs (written only after the whole computation succeeds)
-----------------------------------------------------------
``timeseries.csv``
    Columns t, E, N, S, j, J, jA, jB, P, dS_res, first_law_residual,
    second_law_lhs, leakage at 12 significant digits; entries the scenario
    cannot define (e.g. J without chemical potentials) are ``nan``.
``stationary.csv``
    Columns n, p: the stationary photon-number distribution (level
    populations for the two-level preset).
``husimi.csv`` + ``husimi_meta.json``
    Phase-space quasi-probability of the final state as a plain matrix
    (rows: imaginary part ascending) plus grid ranges in the sidecar.
``sweep.csv``
    Columns parameter, value, n_mean, fano, P, J, dS_res,
    second_law_lhs_min, one row per grid value in grid order.

Exit codes: 0 success; 1 config/validation error; 2 numerical failure
(instability, truncation overflow, cutoff too small); 3 no stationary state
where a stationary output was requested.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import birthdeath, lindblad, scenarios, thermo
from .errors import (
    BoundaryLeak,
    ConfigError,
    CutoffTooSmall,
    DegenerateKernel,
    DimensionMismatch,
    DomainError,
    LaserthermError,
    NoStationaryState,
    StabilityError,
    TruncationError,
    UnknownPreset,
)
from .fock import DensityMatrix, FockSpace, Operator, coherent_state, husimi_grid, thermal_state

__all__ = ["run", "sweep", "main"]

_OUTPUT_KINDS = ("timeseries", "stationary", "husimi")
_TIMESERIES_HEADER = (
    "t,E,N,S,j,J,jA,jB,P,dS_res,first_law_residual,second_law_lhs,leakage"
)
_SWEEP_HEADER = "parameter,value,n_mean,fano,P,J,dS_res,second_law_lhs_min"


# ---------------------------------------------------------------------------
# config parsing


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved, validated run request."""

    scenario_label: str
    generator: lindblad.GeneratorSpec
    model: birthdeath.BirthDeathModel | None
    pot: thermo.ChemicalPotentials | None
    dim: int
    t_final: float
    dt: float
    sample_every: int
    seed: int
    outputs: tuple[str, ...]
    out_dir: Path
    initial: dict | None
    husimi: dict
    sweep_spec: dict | None


def _require_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _number(obj: dict, key: str, where: str, *, required: bool = True) -> float | None:
    if key not in obj:
        if required:
            raise ConfigError(f"missing {key!r} in {where}")
        return None
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def _integer(obj: dict, key: str, where: str, default: int | None = None) -> int:
    if key not in obj:
        if default is None:
            raise ConfigError(f"missing {key!r} in {where}")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
    return value


def _parse_potentials(obj: dict, omega: float) -> thermo.ChemicalPotentials:
    _require_keys(obj, {"beta", "mu_a", "mu_b"}, "scenario.potentials")
    beta = _number(obj, "beta", "scenario.potentials")
    mu_a = _number(obj, "mu_a", "scenario.potentials")
    mu_b = _number(obj, "mu_b", "scenario.potentials")
    try:
        return thermo.ChemicalPotentials(beta=beta, mu_a=mu_a, mu_b=mu_b, omega=omega)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_inline_scenario(
    obj: dict,
) -> tuple[str, birthdeath.BirthDeathModel, thermo.ChemicalPotentials | None, float]:
    family = obj.get("family")
    if family in ("linear", "loaded"):
        allowed = {"family", "omega", "gamma_up", "gamma_down", "potentials"}
        if family == "loaded":
            allowed.add("delta")
        _require_keys(obj, allowed, "scenario")
        omega = _number(obj, "omega", "scenario")
        gamma_down = _number(obj, "gamma_down", "scenario")
        pot = None
        if "potentials" in obj:
            pot = _parse_potentials(obj["potentials"], omega)
        gamma_up = _number(obj, "gamma_up", "scenario", required=False)
        if gamma_up is None:
            if pot is None:
                raise ConfigError(
                    "scenario.gamma_up is required without potentials"
                )
            gamma_up = gamma_down * math.exp(-pot.beta * pot.delta_g)
        elif pot is not None:
            tied = gamma_down * math.exp(-pot.beta * pot.delta_g)
            if abs(gamma_up - tied) > 1e-9 * max(1.0, tied):
                raise ConfigError(
                    f"gamma_up = {gamma_up:g} breaks detailed balance with the "
                    f"potentials (expected {tied:.12g}); adjust mu_a or drop "
                    "gamma_up to have it derived"
                )
        if family == "linear":
            model: birthdeath.BirthDeathModel = birthdeath.Linear(gamma_up, gamma_down)
        else:
            delta = _number(obj, "delta", "scenario")
            model = birthdeath.Loaded(gamma_up, gamma_down, delta)
        return family, model, pot, omega
    if family in ("saturated_pump", "saturated_damp"):
        _require_keys(obj, {"family", "omega", "A", "B", "C"}, "scenario")
        omega = _number(obj, "omega", "scenario")
        a = _number(obj, "A", "scenario")
        b = _number(obj, "B", "scenario")
        c = _number(obj, "C", "scenario")
        cls = (
            birthdeath.SaturatedPump
            if family == "saturated_pump"
            else birthdeath.SaturatedDamp
        )
        return family, cls(a, b, c), None, omega
    raise ConfigError(
        f"scenario.family must be one of linear, loaded, saturated_pump, "
        f"saturated_damp; got {family!r}"
    )


def _parse_config(path: str | Path) -> RunConfig:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("config root must be an object")
    _require_keys(
        obj,
        {
            "schema_version", "scenario", "dim", "t_final", "dt",
            "sample_every", "seed", "outputs", "out_dir", "initial",
            "husimi", "sweep",
        },
        "config",
    )
    if obj.get("schema_version") != 1:
        raise ConfigError(
            f"schema_version must be 1, got {obj.get('schema_version')!r}"
        )
    scenario = obj.get("scenario")
    if scenario is None:
        raise ConfigError("missing 'scenario'")

    initial = obj.get("initial")
    if isinstance(scenario, str):
        try:
            bundle = scenarios.preset(scenario)
        except UnknownPreset as exc:
            raise ConfigError(str(exc)) from exc
        label = scenario
        generator, model, pot = bundle.generator, bundle.model, bundle.pot
        dim = _integer(obj, "dim", "config", default=bundle.dim)
        t_final = _number(obj, "t_final", "config", required=False)
        t_final = bundle.t_final if t_final is None else t_final
        dt = _number(obj, "dt", "config", required=False)
        dt = bundle.dt if dt is None else dt
        sample_every = _integer(obj, "sample_every", "config", default=bundle.sample_every)
        if initial is None and dim == bundle.dim:
            initial = {
                "kind": "__preset__",
                "bundle": bundle,
            }
        elif initial is None:
            raise ConfigError(
                "an explicit 'initial' is required when overriding a "
                "preset's dimension"
            )
    elif isinstance(scenario, dict):
        label, model, pot, omega = _parse_inline_scenario(scenario)
        generator = scenarios.generator_for_model(model, omega)
        dim = _integer(obj, "dim", "config")
        t_final = _number(obj, "t_final", "config")
        dt = _number(obj, "dt", "config")
        sample_every = _integer(obj, "sample_every", "config", default=1)
        if initial is None and "sweep" not in obj:
            raise ConfigError("an explicit 'initial' is required for inline scenarios")
    else:
        raise ConfigError("scenario must be a preset name or an inline object")

    if dim < 2:
        raise ConfigError(f"dim must be >= 2, got {dim}")
    if not t_final > 0:
        raise ConfigError(f"t_final must be > 0, got {t_final}")
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    if sample_every < 1:
        raise ConfigError(f"sample_every must be >= 1, got {sample_every}")

    outputs = obj.get("outputs", ["timeseries"])
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise ConfigError("outputs must be a list of strings")
    for o in outputs:
        if o == "sweep":
            raise ConfigError(
                "'sweep' is driven by the sweep subcommand, not the outputs list"
            )
        if o not in _OUTPUT_KINDS:
            raise ConfigError(
                f"unknown output {o!r}; known: {', '.join(_OUTPUT_KINDS)}"
            )
    if initial is not None:
        if not isinstance(initial, dict):
            raise ConfigError("initial must be an object")
        if initial.get("kind") != "__preset__":
            _validate_initial_spec(initial, dim)

    husimi = obj.get("husimi", {})
    if not isinstance(husimi, dict):
        raise ConfigError("husimi must be an object")
    _require_keys(
        husimi, {"re_min", "re_max", "im_min", "im_max", "resolution"}, "husimi"
    )

    sweep_spec = obj.get("sweep")
    if sweep_spec is not None:
        if not isinstance(sweep_spec, dict):
            raise ConfigError("sweep must be an object")
        _require_keys(sweep_spec, {"parameter", "values"}, "sweep")
        if not isinstance(sweep_spec.get("parameter"), str):
            raise ConfigError("sweep.parameter must be a string")
        values = sweep_spec.get("values")
        if (
            not isinstance(values, list)
            or not values
            or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool)
                for v in values
            )
        ):
            raise ConfigError("sweep.values must be a non-empty list of numbers")

    seed = _integer(obj, "seed", "config", default=0)
    if seed < 0:
        raise ConfigError(f"seed must be >= 0, got {seed}")
    out_dir = obj.get("out_dir", ".")
    if not isinstance(out_dir, str):
        raise ConfigError("out_dir must be a string path")

    return RunConfig(
        scenario_label=label,
        generator=generator,
        model=model,
        pot=pot,
        dim=dim,
        t_final=float(t_final),
        dt=float(dt),
        sample_every=sample_every,
        seed=seed,
        outputs=tuple(dict.fromkeys(outputs)),
        out_dir=Path(out_dir),
        initial=initial,
        husimi=husimi,
        sweep_spec=sweep_spec,
    )


def _validate_initial_spec(spec: dict, dim: int) -> None:
    kind = spec.get("kind")
    if kind == "coherent":
        _require_keys(spec, {"kind", "alpha"}, "initial")
        alpha = spec.get("alpha")
        ok_scalar = isinstance(alpha, (int, float)) and not isinstance(alpha, bool)
        ok_pair = (
            isinstance(alpha, list)
            and len(alpha) == 2
            and all(
                isinstance(x, (int, float)) and not isinstance(x, bool)
                for x in alpha
            )
        )
        if not (ok_scalar or ok_pair):
            raise ConfigError("initial.alpha must be a number or [re, im]")
    elif kind == "thermal":
        _require_keys(spec, {"kind", "beta_omega"}, "initial")
        if _number(spec, "beta_omega", "initial") <= 0:
            raise ConfigError("initial.beta_omega must be > 0")
    elif kind == "number":
        _require_keys(spec, {"kind", "n"}, "initial")
        n = _integer(spec, "n", "initial")
        if not 0 <= n < dim:
            raise ConfigError(f"initial.n must be in [0, {dim - 1}], got {n}")
    elif kind == "poisson":
        _require_keys(spec, {"kind", "mean"}, "initial")
        if _number(spec, "mean", "initial") < 0:
            raise ConfigError("initial.mean must be >= 0")
    elif kind == "stationary":
        _require_keys(spec, {"kind"}, "initial")
    else:
        raise ConfigError(
            f"initial.kind must be one of coherent, thermal, number, poisson, "
            f"stationary; got {kind!r}"
        )


def _build_initial(cfg: RunConfig) -> DensityMatrix:
    space = FockSpace(cfg.dim)
    spec = cfg.initial
    if spec["kind"] == "__preset__":
        return spec["bundle"].initial_state()
    kind = spec["kind"]
    if kind == "coherent":
        alpha = spec["alpha"]
        value = (
            complex(alpha[0], alpha[1]) if isinstance(alpha, list) else complex(alpha)
        )
        return coherent_state(value, space)
    if kind == "thermal":
        return thermal_state(float(spec["beta_omega"]), space)
    if kind == "number":
        p = np.zeros(cfg.dim, dtype=np.complex128)
        p[int(spec["n"])] = 1.0
        return DensityMatrix(Operator(space, np.diag(p)))
    if kind == "poisson":
        weights = birthdeath.poisson_pmf(float(spec["mean"]), cfg.dim - 1)
        weights = weights / weights.sum()
        return DensityMatrix(Operator(space, np.diag(weights.astype(np.complex128))))
    # stationary: exact fixed point of the truncated generator
    if cfg.model is None:
        return lindblad.stationary_state(cfg.generator)
    log_ref = scenarios.stationary_log_reference(cfg.model, space)
    p = np.exp(np.diagonal(log_ref.entries).real)
    p = p / p.sum()
    return DensityMatrix(Operator(space, np.diag(p.astype(np.complex128))))


# ---------------------------------------------------------------------------
# output computation


def _fmt(value: float) -> str:
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return f"{value:.12g}"


def _compute_timeseries(cfg: RunConfig, trajectory: lindblad.Trajectory) -> str:
    log_sigma = None
    if cfg.pot is None and cfg.model is not None:
        log_sigma = scenarios.stationary_log_reference(cfg.model, FockSpace(cfg.dim))
    reports = thermo.trajectory_report(
        trajectory, cfg.generator, pot=cfg.pot, log_sigma=log_sigma
    )
    ns = np.arange(cfg.dim, dtype=np.float64)
    lines = [_TIMESERIES_HEADER]
    for i, rep in enumerate(reports):
        n_mean = float((trajectory.states[i].diagonal() * ns).sum())
        cells = (
            rep.time, rep.energy, n_mean, rep.entropy, rep.photon_flux,
            rep.heat_current, rep.j_a, rep.j_b, rep.load_power, rep.ds_res,
            rep.first_law_residual, rep.second_law_lhs,
            float(trajectory.leakage[i]),
        )
        lines.append(",".join(_fmt(c) for c in cells))
    return "\n".join(lines) + "\n"


def _compute_stationary(cfg: RunConfig) -> str:
    if cfg.model is None:
        rho = lindblad.stationary_state(cfg.generator)
        p = np.clip(rho.diagonal(), 0.0, None)
    else:
        dist = birthdeath.stationary_distribution(cfg.model)
        p = dist.p
    lines = ["n,p"]
    lines.extend(f"{n},{_fmt(float(p[n]))}" for n in range(p.size))
    return "\n".join(lines) + "\n"


def _default_husimi_range(dim: int) -> float:
    # Keep the grid corner |alpha| inside the truncation-safe disc
    # |alpha|^2 + 8|alpha| <= dim - 1.
    corner = max(1.0, math.sqrt(dim + 15.0) - 4.2)
    return corner / math.sqrt(2.0)


def _compute_husimi(cfg: RunConfig, final_state: DensityMatrix) -> tuple[str, str]:
    r = _default_husimi_range(cfg.dim)
    spec = cfg.husimi
    re_min = _number(spec, "re_min", "husimi", required=False)
    re_max = _number(spec, "re_max", "husimi", required=False)
    im_min = _number(spec, "im_min", "husimi", required=False)
    im_max = _number(spec, "im_max", "husimi", required=False)
    resolution = _integer(spec, "resolution", "husimi", default=64)
    re_range = (re_min if re_min is not None else -r, re_max if re_max is not None else r)
    im_range = (im_min if im_min is not None else -r, im_max if im_max is not None else r)
    grid = husimi_grid(final_state, re_range, im_range, resolution)
    body = "\n".join(",".join(_fmt(v) for v in row) for row in grid) + "\n"
    meta = json.dumps(
        {
            "re_min": re_range[0], "re_max": re_range[1],
            "im_min": im_range[0], "im_max": im_range[1],
            "resolution": resolution, "time": cfg.t_final, "dim": cfg.dim,
            "row_axis": "imaginary part, ascending",
            "col_axis": "real part, ascending",
        },
        indent=2,
        sort_keys=True,
    ) + "\n"
    return body, meta


# ---------------------------------------------------------------------------
# sweep


_SWEEPABLE = {
    birthdeath.Linear: ("gamma_up", "gamma_down"),
    birthdeath.Loaded: ("gamma_up", "gamma_down", "delta"),
    birthdeath.SaturatedPump: ("A", "B", "C"),
    birthdeath.SaturatedDamp: ("A", "B", "C"),
}


def _sweep_point_summary(
    model: birthdeath.BirthDeathModel,
    pot: thermo.ChemicalPotentials | None,
    omega: float,
) -> tuple[float, float, float, float, float, float]:
    dist = birthdeath.stationary_distribution(model)
    mean, _, fano = birthdeath.moments(dist)
    size = dist.p.size
    p = dist.p
    ns = np.arange(size, dtype=np.float64)

    delta = model.delta if isinstance(model, birthdeath.Loaded) else 0.0
    power = omega * delta * float((p * ns**2).sum())

    if isinstance(model, (birthdeath.Linear, birthdeath.Loaded)):
        bath_up = model.gamma_up * (ns + 1)
        bath_down = model.gamma_down * ns
    else:
        bath_up, bath_down = birthdeath.rate_arrays(model, size)
    flux = float((p * (bath_up - bath_down)).sum())

    p_reg = (1.0 - thermo.REGULARIZATION_EPS) * p + thermo.REGULARIZATION_EPS / size
    log_p = np.log(p_reg)
    ds_res = 0.0
    if delta > 0:
        k = ns
        outflow = delta * k**2 * p_reg
        ds_res = float(
            ((outflow - np.append(outflow[1:], 0.0)) * log_p).sum()
        )
    if pot is not None:
        heat = pot.delta_g * flux
        lhs = -pot.beta * heat + ds_res
    else:
        heat = math.nan
        up, down = birthdeath.rate_arrays(model, size)
        up_r = up.copy()
        up_r[-1] = 0.0
        inflow_up = np.concatenate(([0.0], up_r[:-1] * p_reg[:-1]))
        inflow_down = np.append(down[1:] * p_reg[1:], 0.0)
        flow = inflow_up + inflow_down - (up_r + down) * p_reg
        lhs = float(-(flow * log_p).sum())
    return mean, fano, power, heat, ds_res, lhs


def _run_sweep(cfg: RunConfig) -> str:
    if cfg.sweep_spec is None:
        raise ConfigError("sweep subcommand needs a 'sweep' block in the config")
    if cfg.model is None:
        raise ConfigError("sweep supports number-ladder scenarios only")
    parameter = cfg.sweep_spec["parameter"]
    allowed = _SWEEPABLE.get(type(cfg.model), ())
    if parameter not in allowed:
        raise ConfigError(
            f"sweep.parameter {parameter!r} not valid for this scenario; "
            f"allowed: {', '.join(allowed)}"
        )
    omega = cfg.generator.omega
    lines = [_SWEEP_HEADER]
    for value in cfg.sweep_spec["values"]:
        try:
            model = dataclasses.replace(cfg.model, **{parameter: float(value)})
        except (DomainError, ValueError) as exc:
            raise ConfigError(
                f"sweep value {value!r} rejected for {parameter!r}: {exc}"
            ) from exc
        pot = cfg.pot
        if pot is not None and parameter in ("gamma_up", "gamma_down"):
            # Keep the chemistry consistent: re-derive mu_a so detailed
            # balance gamma_up/gamma_down = exp(-beta*DeltaG) still holds.
            ratio = model.gamma_up / model.gamma_down
            mu_a = omega + pot.mu_b + math.log(ratio) / pot.beta
            pot = thermo.ChemicalPotentials(
                beta=pot.beta, mu_a=mu_a, mu_b=pot.mu_b, omega=omega
            )
        mean, fano, power, heat, ds_res, lhs = _sweep_point_summary(
            model, pot, omega
        )
        lines.append(
            ",".join(
                [parameter, _fmt(float(value)), _fmt(mean), _fmt(fano),
                 _fmt(power), _fmt(heat), _fmt(ds_res), _fmt(lhs)]
            )
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry points


def _fail(exc: BaseException) -> int:
    print(f"lasertherm: error: {exc}", file=sys.stderr)
    if isinstance(exc, (ConfigError, UnknownPreset, DomainError, DimensionMismatch)):
        return 1
    if isinstance(exc, (StabilityError, TruncationError, BoundaryLeak, CutoffTooSmall)):
        return 2
    if isinstance(exc, (NoStationaryState, DegenerateKernel)):
        return 3
    return 1


def run(
    config_path: str | Path,
    out_dir: str | Path | None = None,
    seed: int | None = None,
    quiet: bool = False,
) -> int:
    """Execute a run config; returns the process exit code.

    All outputs are computed before anything is written, so a failed run
    leaves no partial files behind.
    """
    try:
        cfg = _parse_config(config_path)
        if seed is not None:
            cfg = dataclasses.replace(cfg, seed=seed)
        if out_dir is not None:
            cfg = dataclasses.replace(cfg, out_dir=Path(out_dir))

        files: dict[str, str] = {}
        if "timeseries" in cfg.outputs or "husimi" in cfg.outputs:
            if cfg.initial is None:
                raise ConfigError(
                    "an explicit 'initial' is required to evolve this scenario"
                )
            rho0 = _build_initial(cfg)
            trajectory = lindblad.evolve(
                cfg.generator, rho0, cfg.t_final, cfg.dt, cfg.sample_every
            )
            if "timeseries" in cfg.outputs:
                files["timeseries.csv"] = _compute_timeseries(cfg, trajectory)
            if "husimi" in cfg.outputs:
                body, meta = _compute_husimi(cfg, trajectory.states[-1])
                files["husimi.csv"] = body
                files["husimi_meta.json"] = meta
        if "stationary" in cfg.outputs:
            files["stationary.csv"] = _compute_stationary(cfg)
    except LaserthermError as exc:
        return _fail(exc)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in files.items():
        path = cfg.out_dir / name
        path.write_text(content)
        if not quiet:
            print(f"wrote {path}")
    return 0


def sweep(
    config_path: str | Path,
    seed: int | None = None,
    quiet: bool = False,
) -> int:
    """Execute a sweep config; returns the process exit code."""
    try:
        cfg = _parse_config(config_path)
        if seed is not None:
            cfg = dataclasses.replace(cfg, seed=seed)
        content = _run_sweep(cfg)
    except LaserthermError as exc:
        return _fail(exc)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "sweep.csv"
    path.write_text(content)
    if not quiet:
        print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lasertherm",
        description=(
            "Run single-mode open-system laser scenarios and write "
            "thermodynamic ledgers."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="evolve a scenario and write outputs")
    run_p.add_argument("--config", required=True, help="path to a JSON run config")
    run_p.add_argument("--out", default=None, help="override the config's out_dir")
    run_p.add_argument("--seed", type=int, default=None, help="override the config's seed")
    run_p.add_argument("--quiet", action="store_true", help="suppress progress lines")
    sweep_p = sub.add_parser("sweep", help="stationary summaries over a parameter grid")
    sweep_p.add_argument("--config", required=True, help="path to a JSON sweep config")
    sweep_p.add_argument("--seed", type=int, default=None, help="override the config's seed")
    sweep_p.add_argument("--quiet", action="store_true", help="suppress progress lines")
    args = parser.parse_args(argv)
    if args.command == "run":
        return run(args.config, out_dir=args.out, seed=args.seed, quiet=args.quiet)
    return sweep(args.config, seed=args.seed, quiet=args.quiet)
