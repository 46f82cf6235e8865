"""Batch front end.

Parses flat ``key = value`` run configurations, builds the benchmark
problem, drives the fully discrete stepper while streaming diagnostics,
and exposes three subcommands::

    swlw run     --config run.cfg [--out DIR] [--override key=value ...]
    swlw certify --config run.cfg ...
    swlw study   --config run.cfg ... H [H ...]

Outputs are plain CSV (snapshots, per-step diagnostics, convergence
studies) plus a ``summary.txt`` invariant report, all written with 17
significant digits so a rerun of the same configuration is byte
identical.

Exit codes: 0 success, 2 configuration error, 3 step failure,
4 invariant or certification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .core import (
    ConfigurationError,
    Grid,
    InvariantViolation,
    ProblemSpec,
    State,
    StepFailure,
    project_initial_data,
)
from .diagnostics import (
    DiagnosticsRecord,
    EntropyFluxCache,
    boundary_monitor,
    discrete_norm,
    energy,
    entropy_residual,
    quadratic_total_variation_increment,
    viscosity_sum,
)
from .exact import (
    convergence_study,
    general_case_data,
    linear_tw_problem,
    nonlinear_tw_problem,
    study_csv,
)
from .fluxes import (
    GodunovFlux,
    LaxFriedrichsFlux,
    auto_lf_parameters,
    certify_flux,
)
from .semidiscrete import forward_difference
from .stepper import Stepper, StepperConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STEP = 3
EXIT_INVARIANT = 4

FIELDS_HEADER = "t,x,re_u,im_u,abs_u,v"
DIAGNOSTICS_HEADER = (
    "t,mass_u,l2_v,linf_v,l4_u,dplus_u_l2,energy,"
    "qtv_cum,visc_cum,entropy_pos,boundary_max_u"
)

_PROBLEMS = ("linear_tw", "nonlinear_tw", "general", "custom")
_FLUXES = ("lax_friedrichs", "godunov")

# figure schedule used when problem = general and no snapshot_times given
GENERAL_SNAPSHOT_SCHEDULE = (0.0, 1.0, 1.5, 2.0, 2.5)

MASS_DRIFT_LIMIT = 1e-6
VISCOSITY_FLOOR = -1e-10
CERTIFY_SAMPLES = 10_000


def _g17(x: float) -> str:
    return format(float(x), ".17g")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything a batch run needs, resolvable from a flat config file.

    ``tau``, ``lambda_lf`` and ``gamma_lf`` accept the literal string
    "auto"; the resolution rules live in resolve_run and are echoed into
    summary.txt.
    """

    problem: str = "general"
    domain: Optional[Tuple[float, float]] = None
    h: float = 0.1
    tau: Union[float, str] = "auto"
    T: float = 1.0
    flux: str = "lax_friedrichs"
    lambda_lf: Union[float, str] = "auto"
    gamma_lf: Union[float, str] = "auto"
    newton_tol: float = 1e-12
    newton_max_iter: int = 25
    cutoff: Tuple[float, float] = (50.0, 60.0)
    snapshot_times: Tuple[float, ...] = ()
    out_dir: str = "out"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.problem not in _PROBLEMS:
            raise ConfigurationError(
                f"problem must be one of {_PROBLEMS}, got {self.problem!r}"
            )
        if self.flux not in _FLUXES:
            raise ConfigurationError(
                f"flux must be one of {_FLUXES}, got {self.flux!r}"
            )
        if not (math.isfinite(self.h) and self.h > 0):
            raise ConfigurationError(f"h must be positive, got {self.h}")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ConfigurationError(f"T must be >= 0, got {self.T}")
        for name in ("tau", "lambda_lf", "gamma_lf"):
            val = getattr(self, name)
            if isinstance(val, str):
                if val != "auto":
                    raise ConfigurationError(
                        f"{name} must be a number or 'auto', got {val!r}"
                    )
            elif not (math.isfinite(val) and val > 0):
                raise ConfigurationError(
                    f"{name} must be positive, got {val}"
                )
        if not (math.isfinite(self.newton_tol) and self.newton_tol > 0):
            raise ConfigurationError(
                f"newton_tol must be positive, got {self.newton_tol}"
            )
        if self.newton_max_iter < 1:
            raise ConfigurationError(
                f"newton_max_iter must be >= 1, got {self.newton_max_iter}"
            )
        m1, m2 = self.cutoff
        if not (0 < m1 < m2):
            raise ConfigurationError(
                f"cutoff must satisfy 0 < M1 < M2, got {self.cutoff}"
            )
        if self.domain is not None:
            xl, xr = self.domain
            if not (math.isfinite(xl) and math.isfinite(xr) and xl < xr):
                raise ConfigurationError(f"invalid domain {self.domain}")
        for s in self.snapshot_times:
            if not (-1e-12 <= s <= self.T + 1e-12):
                raise ConfigurationError(
                    f"snapshot_times entry {s} outside [0, T={self.T}]"
                )


def parse_config_text(text: str) -> Dict[str, str]:
    """Flat UTF-8 ``key = value`` lines with '#' comments, dotted keys."""
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"config line {lineno}: expected 'key = value', got {raw!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigurationError(f"config line {lineno}: empty key")
        if key in out:
            raise ConfigurationError(
                f"config line {lineno}: duplicate key {key!r}"
            )
        out[key] = value.strip()
    return out


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigurationError(f"key {key!r}: expected a number, got {value!r}")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigurationError(
            f"key {key!r}: expected an integer, got {value!r}"
        )


def _parse_auto(key: str, value: str) -> Union[float, str]:
    if value == "auto":
        return "auto"
    return _parse_float(key, value)


def config_from_mapping(
    mapping: Dict[str, str], base: Optional[RunConfig] = None
) -> RunConfig:
    """Apply flat config keys on top of ``base`` (defaults when None)."""
    base = base if base is not None else RunConfig()
    kw = {f.name: getattr(base, f.name) for f in dataclasses.fields(base)}
    domain = dict(zip(("x_left", "x_right"), base.domain or (None, None)))
    cutoff = {"M1": base.cutoff[0], "M2": base.cutoff[1]}
    for key, value in mapping.items():
        if key == "problem" or key == "flux" or key == "out_dir":
            kw[key] = value
        elif key in ("h", "T", "newton_tol"):
            kw[key] = _parse_float(key, value)
        elif key in ("tau", "lambda_lf", "gamma_lf"):
            kw[key] = _parse_auto(key, value)
        elif key in ("newton_max_iter", "seed"):
            kw[key] = _parse_int(key, value)
        elif key in ("domain.x_left", "domain.x_right"):
            domain[key.split(".", 1)[1]] = _parse_float(key, value)
        elif key in ("cutoff.M1", "cutoff.M2"):
            cutoff[key.split(".", 1)[1]] = _parse_float(key, value)
        elif key == "snapshot_times":
            if value:
                kw[key] = tuple(
                    _parse_float(key, part) for part in value.split(",")
                )
            else:
                kw[key] = ()
        else:
            raise ConfigurationError(f"unknown config key {key!r}")
    if (domain["x_left"] is None) != (domain["x_right"] is None):
        raise ConfigurationError(
            "domain.x_left and domain.x_right must be given together"
        )
    if domain["x_left"] is not None:
        kw["domain"] = (domain["x_left"], domain["x_right"])
    kw["cutoff"] = (cutoff["M1"], cutoff["M2"])
    return RunConfig(**kw)


def load_config(
    path: Optional[str],
    overrides: Sequence[str] = (),
    out_dir: Optional[str] = None,
) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}")
        cfg = config_from_mapping(parse_config_text(text), cfg)
    pairs: Dict[str, str] = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(
                f"override {item!r}: expected key=value"
            )
        key, _, value = item.partition("=")
        pairs[key.strip()] = value.strip()
    if pairs:
        cfg = config_from_mapping(pairs, cfg)
    if out_dir is not None:
        cfg = dataclasses.replace(cfg, out_dir=out_dir)
    return cfg


@dataclasses.dataclass(frozen=True)
class ResolvedRun:
    """A RunConfig with every 'auto' replaced by its numeric value."""

    config: RunConfig
    problem_spec: ProblemSpec
    grid: Grid
    lambda_lf: float
    gamma_lf: float
    tau: float
    n_steps: int
    auto_fields: Tuple[str, ...]


def _build_problem(
    config: RunConfig, problem: Optional[ProblemSpec]
) -> ProblemSpec:
    if config.problem == "custom":
        if problem is None:
            raise ConfigurationError(
                "problem = custom requires a ProblemSpec passed in code; "
                "the config file cannot express arbitrary fluxes"
            )
        return problem
    if problem is not None:
        raise ConfigurationError(
            "a ProblemSpec argument requires problem = custom"
        )
    m1, m2 = config.cutoff
    if config.problem == "linear_tw":
        return linear_tw_problem(m1=m1, m2=m2)
    if config.problem == "nonlinear_tw":
        return nonlinear_tw_problem(m1=m1, m2=m2)
    return general_case_data(m1=m1, m2=m2)


def resolve_run(
    config: RunConfig, problem: Optional[ProblemSpec] = None
) -> ResolvedRun:
    """Build the problem and grid, resolve all 'auto' fields.

    auto rules: lambda_lf = 0.9 / sup|f'| over [-M, M] with
    M = max(M2, 2*||v0||_inf); gamma_lf analogous for the coupling
    advection speed; tau = 0.5 * lambda_lf * h.  tau is then shrunk to
    the nearest divisor of T so the march lands on T exactly.
    """
    spec = _build_problem(config, problem)
    domain = config.domain if config.domain is not None else spec.domain
    if domain is None:
        raise ConfigurationError(
            "no domain: set domain.x_left / domain.x_right"
        )
    xl, xr = domain
    width = xr - xl
    n = round(width / config.h)
    if n < 3 or abs(n * config.h - width) > 1e-9 * width:
        raise ConfigurationError(
            f"h = {config.h} does not tile the domain [{xl}, {xr}]"
        )
    grid = Grid(xl, xr, n)

    auto_fields = []
    v0_max = float(np.max(np.abs(np.asarray(spec.v0(grid.cell_centers), dtype=float))))
    box = max(config.cutoff[1], 2.0 * v0_max)
    lam_auto, gam_auto = auto_lf_parameters(
        spec.f_prime, spec.coupling.g_prime, (-box, box)
    )
    if config.lambda_lf == "auto":
        lam = lam_auto
        auto_fields.append("lambda_lf")
    else:
        lam = float(config.lambda_lf)
    if config.gamma_lf == "auto":
        gam = gam_auto
        auto_fields.append("gamma_lf")
    else:
        gam = float(config.gamma_lf)
    if config.tau == "auto":
        tau_req = 0.5 * lam * grid.h
        auto_fields.append("tau")
    else:
        tau_req = float(config.tau)
    if config.T > 0:
        n_steps = max(1, math.ceil(config.T / tau_req - 1e-12))
        tau = config.T / n_steps
    else:
        n_steps = 0
        tau = tau_req
    return ResolvedRun(
        config=config,
        problem_spec=spec,
        grid=grid,
        lambda_lf=lam,
        gamma_lf=gam,
        tau=tau,
        n_steps=n_steps,
        auto_fields=tuple(auto_fields),
    )


def _snapshot_steps(resolved: ResolvedRun) -> Dict[int, float]:
    """Map step index -> requested time for every snapshot."""
    config = resolved.config
    times = config.snapshot_times
    if not times:
        if config.problem == "general":
            times = tuple(
                s for s in GENERAL_SNAPSHOT_SCHEDULE if s <= config.T + 1e-12
            )
        else:
            times = (0.0, config.T)
    out: Dict[int, float] = {}
    for s in times:
        idx = int(round(s / resolved.tau)) if resolved.tau > 0 else 0
        idx = min(max(idx, 0), resolved.n_steps)
        out.setdefault(idx, s)
    return out


def _boundary_cells(n: int) -> int:
    k = max(1, n // 50)
    if 2 * k >= n:
        k = max(1, (n - 1) // 2)
    return k


def _record(
    state: State,
    spec: ProblemSpec,
    h: float,
    entropy_pos: float,
) -> DiagnosticsRecord:
    n = state.u.size
    if n >= 4:
        bmax = boundary_monitor(state, _boundary_cells(n))
    else:
        bmax = float(np.max(np.abs(state.u)))
    du = forward_difference(state.u, h)
    return DiagnosticsRecord(
        t=state.t,
        mass_u=discrete_norm(state.u, h, 2) ** 2,
        l2_v=discrete_norm(state.v, h, 2),
        linf_v=discrete_norm(state.v, h, np.inf),
        l4_u=discrete_norm(state.u, h, 4),
        energy=energy(state, spec, h),
        qtv_increment=quadratic_total_variation_increment(state, h),
        viscosity_increment=0.0,
        entropy_pos_residual=entropy_pos,
        boundary_max_u=bmax,
        dplus_u_l2=discrete_norm(du, h, 2),
    )


def _diag_row(rec: DiagnosticsRecord, qtv_cum: float, visc_cum: float) -> str:
    vals = (
        rec.t,
        rec.mass_u,
        rec.l2_v,
        rec.linf_v,
        rec.l4_u,
        rec.dplus_u_l2,
        rec.energy,
        qtv_cum,
        visc_cum,
        rec.entropy_pos_residual,
        rec.boundary_max_u,
    )
    return ",".join(_g17(v) for v in vals)


def _fields_rows(state: State, grid: Grid) -> list:
    rows = []
    for j in range(grid.n_cells):
        uj = state.u[j]
        rows.append(
            ",".join(
                (
                    _g17(state.t),
                    _g17(grid.cell_centers[j]),
                    _g17(uj.real),
                    _g17(uj.imag),
                    _g17(abs(uj)),
                    _g17(state.v[j]),
                )
            )
        )
    return rows


def _prepare_out_dir(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise ConfigurationError(f"out_dir {config.out_dir!r} unusable: {exc}")
    return out


def _write(path: Path, lines: Sequence[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(config: RunConfig, problem: Optional[ProblemSpec] = None) -> int:
    """March the fully discrete scheme and write the run artifacts.

    fields.csv holds the requested snapshots, diagnostics.csv one row
    per step (cumulative QTV/viscosity time integrals), summary.txt the
    invariant report.  Mass drift beyond 1e-6 relative and negative
    scheme viscosity are hard failures; the L-infinity envelope of v is
    monitored and reported but does not fail the run.
    """
    resolved = resolve_run(config, problem)
    spec = resolved.problem_spec
    grid = resolved.grid
    if config.flux == "godunov":
        raise ConfigurationError(
            "the fully discrete stepper is Lax-Friedrichs based; "
            "flux = godunov is available in certify and the semidiscrete API"
        )
    out = _prepare_out_dir(config)
    stepper_cfg = StepperConfig(
        tau=resolved.tau,
        lambda_lf=resolved.lambda_lf,
        gamma_lf=resolved.gamma_lf,
        newton_tol=config.newton_tol,
        newton_max_iter=config.newton_max_iter,
        cfl_safety=1.0,
    )
    stepper = Stepper(grid, spec, stepper_cfg)
    flux = LaxFriedrichsFlux(
        f=spec.f,
        f_prime=spec.f_prime,
        g_prime=spec.coupling.g_prime,
        lambda_lf=resolved.lambda_lf,
        gamma_lf=resolved.gamma_lf,
    )
    eta_dd = lambda s: np.ones_like(np.asarray(s, dtype=float))
    cache = EntropyFluxCache(spec)
    snap_at = _snapshot_steps(resolved)

    state = project_initial_data(spec, grid)
    mass0 = discrete_norm(state.u, grid.h, 2)
    mass_denom = mass0 if mass0 > 0 else 1.0
    v_bound = max(config.cutoff[1], float(np.max(np.abs(state.v)))) + 1e-8

    diag_lines = [DIAGNOSTICS_HEADER]
    field_lines = [FIELDS_HEADER]
    qtv_cum = 0.0
    visc_cum = 0.0
    entropy_cum = 0.0
    mass_drift = 0.0
    v_inf_max = 0.0
    boundary_max = 0.0
    status = "ok"
    message = ""
    steps_done = 0

    def account(rec: DiagnosticsRecord) -> None:
        nonlocal mass_drift, v_inf_max, boundary_max
        drift = abs(math.sqrt(rec.mass_u) - mass0) / mass_denom
        mass_drift = max(mass_drift, drift)
        v_inf_max = max(v_inf_max, rec.linf_v)
        boundary_max = max(boundary_max, rec.boundary_max_u)
        if drift > MASS_DRIFT_LIMIT:
            raise InvariantViolation(
                f"mass drift {drift:.3e} exceeds {MASS_DRIFT_LIMIT:g} "
                f"at t = {rec.t:g}"
            )

    try:
        rec = _record(state, spec, grid.h, 0.0)
        account(rec)
        diag_lines.append(_diag_row(rec, qtv_cum, visc_cum))
        if 0 in snap_at:
            field_lines.extend(_fields_rows(state, grid))
        for n in range(resolved.n_steps):
            qtv_cum += resolved.tau * quadratic_total_variation_increment(
                state, grid.h
            )
            visc_n = viscosity_sum(state, flux, eta_dd, grid.h)
            if visc_n < VISCOSITY_FLOOR:
                raise InvariantViolation(
                    f"scheme viscosity {visc_n:.3e} negative at t = {state.t:g}"
                )
            visc_cum += resolved.tau * visc_n
            prev = state
            state = stepper.step(state)
            steps_done = n + 1
            r = entropy_residual(prev, state, spec, grid.h, resolved.tau, cache)
            pos = grid.h * float(np.sum(np.maximum(r, 0.0)))
            entropy_cum += resolved.tau * pos
            rec = _record(state, spec, grid.h, pos)
            account(rec)
            diag_lines.append(_diag_row(rec, qtv_cum, visc_cum))
            if steps_done in snap_at:
                field_lines.extend(_fields_rows(state, grid))
    except StepFailure as exc:
        status, message = "step_failure", str(exc)
    except InvariantViolation as exc:
        status, message = "invariant_failure", str(exc)

    if v_inf_max > v_bound:
        logger.warning(
            "max |v| = %.6g exceeded the envelope %.6g (monitored, not fatal)",
            v_inf_max,
            v_bound,
        )

    summary = [
        f"status = {status}",
        f"problem = {config.problem}",
        f"flux = {config.flux}",
        f"domain.x_left = {_g17(grid.x_left)}",
        f"domain.x_right = {_g17(grid.x_right)}",
        f"h = {_g17(grid.h)}",
        f"n_cells = {grid.n_cells}",
        f"T = {_g17(config.T)}",
        f"steps = {steps_done}",
        f"lambda_lf = {_g17(resolved.lambda_lf)}",
        "lambda_lf.source = "
        + ("auto" if "lambda_lf" in resolved.auto_fields else "explicit"),
        f"gamma_lf = {_g17(resolved.gamma_lf)}",
        "gamma_lf.source = "
        + ("auto" if "gamma_lf" in resolved.auto_fields else "explicit"),
        f"tau = {_g17(resolved.tau)}",
        "tau.source = "
        + ("auto" if "tau" in resolved.auto_fields else "explicit"),
        f"newton_tol = {_g17(config.newton_tol)}",
        f"newton_max_iter = {config.newton_max_iter}",
        f"mass_drift_rel = {_g17(mass_drift)}",
        f"v_inf_max = {_g17(v_inf_max)}",
        f"v_inf_bound = {_g17(v_bound)}",
        f"v_inf_within_bound = {'true' if v_inf_max <= v_bound else 'false'}",
        f"boundary_max_u = {_g17(boundary_max)}",
        f"qtv_cum = {_g17(qtv_cum)}",
        f"visc_cum = {_g17(visc_cum)}",
        f"entropy_pos_cum = {_g17(entropy_cum)}",
    ]
    if message:
        summary.append(f"message = {message}")
    _write(out / "diagnostics.csv", diag_lines)
    _write(out / "fields.csv", field_lines)
    _write(out / "summary.txt", summary)

    if status == "step_failure":
        print(f"step failure: {message}", file=sys.stderr)
        return EXIT_STEP
    if status == "invariant_failure":
        print(f"invariant failure: {message}", file=sys.stderr)
        return EXIT_INVARIANT
    print(f"run complete: {steps_done} steps -> {out}")
    return EXIT_OK


def certify(config: RunConfig, problem: Optional[ProblemSpec] = None) -> int:
    """Run the flux axiom suite for the configured problem and flux."""
    spec = _build_problem(config, problem)
    out = _prepare_out_dir(config)
    v0_max = _initial_v_sup(config, spec)
    box = max(config.cutoff[1], 2.0 * v0_max)
    v_range = (-box, box)
    if config.flux == "godunov":
        flux = GodunovFlux(
            f=spec.f, f_prime=spec.f_prime, g_prime=spec.coupling.g_prime
        )
    else:
        lam_auto, gam_auto = auto_lf_parameters(
            spec.f_prime, spec.coupling.g_prime, v_range
        )
        lam = lam_auto if config.lambda_lf == "auto" else float(config.lambda_lf)
        gam = gam_auto if config.gamma_lf == "auto" else float(config.gamma_lf)
        flux = LaxFriedrichsFlux(
            f=spec.f,
            f_prime=spec.f_prime,
            g_prime=spec.coupling.g_prime,
            lambda_lf=lam,
            gamma_lf=gam,
        )
    report = certify_flux(
        flux, v_range, n_samples=CERTIFY_SAMPLES, seed=config.seed
    )
    _write(out / "certification.txt", report.to_text().splitlines())
    if report.passed:
        print(f"certification passed -> {out / 'certification.txt'}")
        return EXIT_OK
    print("certification FAILED:", file=sys.stderr)
    for r in report.results:
        if not r.passed:
            print(
                f"  {r.axiom}: worst slack {r.worst_slack:.3e}",
                file=sys.stderr,
            )
    return EXIT_INVARIANT


def _initial_v_sup(config: RunConfig, spec: ProblemSpec) -> float:
    domain = config.domain if config.domain is not None else spec.domain
    if domain is None:
        return 0.0
    x = np.linspace(domain[0], domain[1], 4097)
    return float(np.max(np.abs(np.asarray(spec.v0(x), dtype=float))))


def study(
    config: RunConfig,
    h_list: Sequence[float],
    problem: Optional[ProblemSpec] = None,
) -> int:
    """Convergence study against the exact solution; writes study.csv."""
    if not h_list:
        raise ConfigurationError("study requires at least one h value")
    spec = _build_problem(config, problem)
    if spec.exact is None:
        raise ConfigurationError(
            f"problem {config.problem!r} has no exact solution; "
            "study needs one"
        )
    if config.flux == "godunov":
        raise ConfigurationError(
            "the fully discrete stepper is Lax-Friedrichs based; "
            "flux = godunov is available in certify and the semidiscrete API"
        )
    out = _prepare_out_dir(config)
    v0_max = _initial_v_sup(config, spec)
    box = max(config.cutoff[1], 2.0 * v0_max)
    lam_auto, gam_auto = auto_lf_parameters(
        spec.f_prime, spec.coupling.g_prime, (-box, box)
    )
    lam = lam_auto if config.lambda_lf == "auto" else float(config.lambda_lf)
    gam = gam_auto if config.gamma_lf == "auto" else float(config.gamma_lf)
    template = StepperConfig(
        tau=0.5 * lam * min(h_list),
        lambda_lf=lam,
        gamma_lf=gam,
        newton_tol=config.newton_tol,
        newton_max_iter=config.newton_max_iter,
        cfl_safety=0.5,
    )
    rows = convergence_study(
        spec, tuple(h_list), config.T, template, domain=config.domain
    )
    _write(out / "study.csv", study_csv(rows).splitlines())
    errs_u = [r.err_u_l2 for r in rows]
    errs_v = [r.err_v_l2 for r in rows]
    monotone = all(b < a for a, b in zip(errs_u, errs_u[1:])) and all(
        b < a for a, b in zip(errs_v, errs_v[1:])
    )
    if not monotone:
        print(
            "study errors do not decrease monotonically; see "
            f"{out / 'study.csv'}",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    print(f"study complete: {len(rows)} resolutions -> {out / 'study.csv'}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="path to key=value file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="swlw",
        description="coupled short-wave / long-wave batch solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="march the scheme, write CSVs")
    _add_common(p_run)
    p_cert = sub.add_parser("certify", help="run the flux axiom suite")
    _add_common(p_cert)
    p_study = sub.add_parser("study", help="convergence study over h values")
    _add_common(p_study)
    p_study.add_argument("h_values", nargs="+", type=float, metavar="H")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = load_config(args.config, args.override, args.out)
        if args.command == "run":
            return run(config)
        if args.command == "certify":
            return certify(config)
        return study(config, args.h_values)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepFailure as exc:
        print(f"step failure: {exc}", file=sys.stderr)
        return EXIT_STEP
    except InvariantViolation as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
