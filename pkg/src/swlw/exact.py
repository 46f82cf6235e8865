"""Benchmark problems with known solutions, error norms, and the
convergence-study driver.

Two exact families: a traveling sech/sech^2 pair for the full cubic
system with linear long-wave flux, and a standing sech^2 pair for the
linear-Schrödinger / quadratic-flux system.  Both live well inside the
coupling plateau, so the cutoff never distorts them.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from swlw.core import (
    ConfigurationError,
    CutoffCoupling,
    Grid,
    ProblemSpec,
    State,
    project_initial_data,
)
from swlw.stepper import Stepper, StepperConfig

LINEAR_TW_DOMAIN = (-40.0, 60.0)
NONLINEAR_TW_DOMAIN = (-40.0, 40.0)
GENERAL_DOMAIN = (-50.0, 50.0)

STUDY_CSV_HEADER = "h,tau,err_u_l2,err_v_l2,order_u,order_v"


def _sech(z):
    # 2e^{-|z|}/(1+e^{-2|z|}) never overflows, unlike 1/cosh
    e = np.exp(-np.abs(z))
    return 2.0 * e / (1.0 + e * e)


@dataclasses.dataclass(frozen=True)
class TravelingWaveParams:
    """Parameters of the traveling-wave family for the linear-flux system.

    The underlying model is i u_t + u_xx = k(v u + q|u|^2 u),
    v_t + gamma_tw v_x = delta (|u|^2)_x; the wave exists iff the derived
    E = lambda_tw - c^2/4 is positive and beta_tw = k(a_tw + q) negative.
    """

    q: float = 1.0
    k: float = 1.0
    lambda_tw: float = 1.0
    gamma_tw: float = 1.0
    a_tw: float = -2.0
    c: float = 1.5

    def __post_init__(self) -> None:
        for name in ("q", "k", "lambda_tw", "gamma_tw", "a_tw", "c"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        if not (self.E > 0):
            raise ConfigurationError(
                f"need lambda_tw - c^2/4 > 0 for a localized wave, "
                f"got E = {self.E:g}"
            )
        if not (self.beta_tw < 0):
            raise ConfigurationError(
                f"need k*(a_tw + q) < 0 for a real amplitude, "
                f"got beta_tw = {self.beta_tw:g}"
            )

    @property
    def E(self) -> float:
        return self.lambda_tw - 0.25 * self.c * self.c

    @property
    def delta(self) -> float:
        return self.a_tw * (self.gamma_tw - self.c)

    @property
    def beta_tw(self) -> float:
        return self.k * (self.a_tw + self.q)


def exact_linear_tw(x, t, p: TravelingWaveParams):
    """Traveling wave (u, v) at position x and time t."""
    xi = np.asarray(x, dtype=np.float64) - p.c * t
    amp2 = 2.0 * p.E / abs(p.beta_tw)
    prof = _sech(math.sqrt(p.E) * xi)
    u = np.sqrt(amp2) * prof * np.exp(1j * (p.lambda_tw * t + 0.5 * p.c * xi))
    v = p.a_tw * amp2 * prof * prof
    if np.ndim(x) == 0:
        return complex(u), float(v)
    return u, v


def exact_nonlinear(x, t, b: float):
    """Standing pair u = e^{ibt} r, v = -r with r = (3b/2) sech^2(sqrt(b) x / 2)."""
    if not (b > 0):
        raise ConfigurationError(f"need b > 0, got {b}")
    xa = np.asarray(x, dtype=np.float64)
    prof = _sech(0.5 * math.sqrt(b) * xa)
    r = 1.5 * b * prof * prof
    phase = complex(np.exp(1j * b * t))
    u = phase * r
    v = -r
    if np.ndim(x) == 0:
        return complex(u), float(v)
    return u, v


def linear_tw_problem(
    params: Optional[TravelingWaveParams] = None,
    m1: float = 50.0,
    m2: float = 60.0,
) -> ProblemSpec:
    """The linear-flux benchmark with its exact solution attached.

    The model has cubic coefficient k*q and long-wave source coefficient
    delta, while the solver hardwires the cubic coefficient to 1 and uses
    one alpha for both couplings; so k*q = 1 and k = delta are required.
    """
    p = params if params is not None else TravelingWaveParams()
    if abs(p.k * p.q - 1.0) > 1e-12:
        raise ConfigurationError(
            f"cubic coefficient k*q = {p.k * p.q:g} != 1 cannot be realized"
        )
    if abs(p.k - p.delta) > 1e-12:
        raise ConfigurationError(
            f"source coefficient delta = {p.delta:g} != k = {p.k:g} "
            f"cannot be realized with a single coupling constant"
        )
    v_amp = abs(p.a_tw) * 2.0 * p.E / abs(p.beta_tw)
    if v_amp > m1:
        raise ConfigurationError(
            f"wave amplitude {v_amp:g} exceeds the coupling plateau m1 = {m1:g}"
        )
    gamma_tw = p.gamma_tw

    def f(v):
        return gamma_tw * v

    def f_prime(v):
        return gamma_tw * np.ones_like(np.asarray(v, dtype=np.float64))

    return ProblemSpec(
        f=f,
        f_prime=f_prime,
        coupling=CutoffCoupling(m1, m2),
        u0=lambda x: exact_linear_tw(x, 0.0, p)[0],
        v0=lambda x: exact_linear_tw(x, 0.0, p)[1],
        alpha=p.k,
        cubic_on=True,
        exact=lambda x, t: exact_linear_tw(x, t, p),
        domain=LINEAR_TW_DOMAIN,
    )


def nonlinear_tw_problem(
    b: float = 1.0, m1: float = 50.0, m2: float = 60.0
) -> ProblemSpec:
    """The quadratic-flux benchmark (linear Schrödinger part)."""
    if not (b > 0):
        raise ConfigurationError(f"need b > 0, got {b}")
    if 1.5 * b > m1:
        raise ConfigurationError(
            f"wave amplitude {1.5 * b:g} exceeds the coupling plateau m1 = {m1:g}"
        )
    return ProblemSpec(
        f=lambda v: np.asarray(v) ** 2,
        f_prime=lambda v: 2.0 * np.asarray(v),
        coupling=CutoffCoupling(m1, m2),
        u0=lambda x: exact_nonlinear(x, 0.0, b)[0],
        v0=lambda x: exact_nonlinear(x, 0.0, b)[1],
        alpha=1.0,
        cubic_on=False,
        exact=lambda x, t: exact_nonlinear(x, t, b),
        domain=NONLINEAR_TW_DOMAIN,
    )


def general_case_data(m1: float = 50.0, m2: float = 60.0) -> ProblemSpec:
    """Wave-packet / box problem with f(v) = 3v^2; no exact solution."""

    def u0(x):
        xa = np.asarray(x, dtype=np.float64)
        return np.exp(2.5j * xa) * math.sqrt(6.0) * _sech(math.sqrt(3.0) * xa)

    def v0(x):
        xa = np.asarray(x, dtype=np.float64)
        return np.where(np.abs(xa) <= 10.0, 1.0, 0.0)

    return ProblemSpec(
        f=lambda v: 3.0 * np.asarray(v) ** 2,
        f_prime=lambda v: 6.0 * np.asarray(v),
        coupling=CutoffCoupling(m1, m2),
        u0=u0,
        v0=v0,
        alpha=1.0,
        cubic_on=True,
        exact=None,
        domain=GENERAL_DOMAIN,
    )


def l2_error(
    state: State, exact: Callable, grid: Grid
) -> Tuple[float, float]:
    """Discrete L2 distance of (u, v) from the exact pair at state.t."""
    u_ex, v_ex = exact(grid.cell_centers, state.t)
    du = state.u - np.asarray(u_ex, dtype=np.complex128)
    dv = state.v - np.asarray(v_ex, dtype=np.float64)
    err_u = math.sqrt(grid.h * float(np.sum(du.real**2 + du.imag**2)))
    err_v = math.sqrt(grid.h * float(np.sum(dv * dv)))
    return err_u, err_v


@dataclasses.dataclass(frozen=True)
class StudyRow:
    h: float
    tau: float
    err_u_l2: float
    err_v_l2: float
    order_u: float
    order_v: float


def _study_grid(domain: Tuple[float, float], h: float) -> Grid:
    width = domain[1] - domain[0]
    n = int(round(width / h))
    if n < 3 or abs(n * h - width) > 1e-9 * width:
        raise ConfigurationError(
            f"h = {h:g} does not tile the domain of width {width:g}"
        )
    return Grid(domain[0], domain[1], n)


def _run_to_time(
    problem: ProblemSpec, grid: Grid, T: float, cfg: StepperConfig
) -> State:
    stepper = Stepper(grid, problem, cfg)
    state = project_initial_data(problem, grid)
    n_steps = int(round(T / cfg.tau))
    for _ in range(n_steps):
        state = stepper.step(state)
    return state


def convergence_study(
    problem: ProblemSpec,
    h_list: Sequence[float],
    T: float,
    cfg_template: StepperConfig,
    domain: Optional[Tuple[float, float]] = None,
) -> List[StudyRow]:
    """Errors against the attached exact solution across resolutions.

    Per resolution the step is tau = T/ceil(T/(cfl_safety*lambda_lf*h)),
    the largest admissible step landing exactly on T.  Resolutions run as
    independent parallel jobs; rows come back in h_list order with
    observed orders between consecutive rows (nan on the first).
    """
    if problem.exact is None:
        raise ConfigurationError("convergence study needs an exact solution")
    if domain is None:
        domain = problem.domain
    if domain is None:
        raise ConfigurationError("no domain given and the problem carries none")
    if T < 0:
        raise ConfigurationError(f"T must be >= 0, got {T}")
    if len(h_list) == 0:
        return []

    def job(h: float) -> Tuple[float, float, float]:
        grid = _study_grid(domain, h)
        if T == 0:
            cfg = dataclasses.replace(cfg_template)
            state = project_initial_data(problem, grid)
        else:
            tau_max = cfg_template.cfl_safety * cfg_template.lambda_lf * h
            n_steps = max(1, math.ceil(T / tau_max - 1e-12))
            cfg = dataclasses.replace(cfg_template, tau=T / n_steps)
            state = _run_to_time(problem, grid, T, cfg)
        err_u, err_v = l2_error(state, problem.exact, grid)
        return cfg.tau, err_u, err_v

    with concurrent.futures.ThreadPoolExecutor(
        max_workers=min(len(h_list), 8)
    ) as pool:
        results = list(pool.map(job, h_list))

    rows: List[StudyRow] = []
    for i, (h, (tau, err_u, err_v)) in enumerate(zip(h_list, results)):
        if i == 0:
            order_u = order_v = float("nan")
        else:
            h_prev = h_list[i - 1]
            _, eu_prev, ev_prev = results[i - 1]
            ratio = math.log(h_prev / h)
            order_u = (
                math.log(eu_prev / err_u) / ratio
                if eu_prev > 0 and err_u > 0
                else float("nan")
            )
            order_v = (
                math.log(ev_prev / err_v) / ratio
                if ev_prev > 0 and err_v > 0
                else float("nan")
            )
        rows.append(StudyRow(h, tau, err_u, err_v, order_u, order_v))
    return rows


def study_csv(rows: Sequence[StudyRow]) -> str:
    """Serialize study rows; full precision, nan spelled out."""
    lines = [STUDY_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                format(x, ".17g")
                for x in (r.h, r.tau, r.err_u_l2, r.err_v_l2, r.order_u, r.order_v)
            )
        )
    return "\n".join(lines) + "\n"
