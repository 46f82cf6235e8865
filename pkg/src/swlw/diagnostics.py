"""Quantitative functionals on discrete states: norms, energy, quadratic
total variation, viscosity sums, entropy residuals, Gagliardo-Nirenberg
ratios, and the boundary smallness monitor.

Everything here is a pure function of one or two states.  Cumulative
quantities (the time integrals of the QTV and viscosity increments) are
maintained by the run loop that owns the trajectory.
"""

from __future__ import annotations

import dataclasses
import logging
from typing import Callable, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from swlw.core import ConfigurationError, InvariantViolation, ProblemSpec, State
from swlw.fluxes import NumericalFlux, _viscosity_batch
from swlw.semidiscrete import forward_difference

logger = logging.getLogger(__name__)

BOUNDARY_WARN_LEVEL = 1e-5

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


def discrete_norm(w, h: float, p: float) -> float:
    """(sum h|w_j|^p)^(1/p), or max|w_j| for p = inf."""
    if not p >= 1:
        raise ConfigurationError(f"p must be >= 1, got {p}")
    w = np.asarray(w)
    a = np.abs(w)
    if np.isinf(p):
        return float(np.max(a)) if a.size else 0.0
    return float((h * np.sum(a**p)) ** (1.0 / p))


def energy(state: State, spec: ProblemSpec, h: float) -> float:
    """(1/2)|D+u|_2^2 + (1/4)|u|_4^4 + (1/2) sum h g(v_j)|u_j|^2."""
    absu2 = state.u.real**2 + state.u.imag**2
    du = forward_difference(state.u, h)
    grad = 0.5 * h * float(np.sum(du.real**2 + du.imag**2))
    quart = 0.25 * h * float(np.sum(absu2**2))
    coup = 0.5 * h * float(np.sum(np.asarray(spec.coupling.g(state.v)) * absu2))
    return grad + quart + coup


def quadratic_total_variation_increment(state: State, h: float) -> float:
    """sum_j (1 + |u_j|^2)(v_{j+1} - v_j)^2; the left cell carries the weight.

    Boundary interfaces vanish under the copy-ghost policy for v, so only
    interior jumps contribute.  No h factor.
    """
    dv = np.diff(state.v)
    absu2 = state.u.real**2 + state.u.imag**2
    return float(np.sum((1.0 + absu2[:-1]) * dv * dv))


def viscosity_sum(
    state: State, flux: NumericalFlux, eta_dd: Callable, h: float
) -> float:
    """Entropy-dissipation sum over interfaces.

    Per interior interface: the f-family integral of eta''(s)(f(s) - f_plus)
    plus |u_left|^2 times the G-bar-family integral against -g'.  Nonnegative
    for monotone fluxes and convex eta.
    """
    v = state.v
    if len(v) < 2:
        return 0.0
    v1, v2 = v[:-1], v[1:]
    absu2 = state.u.real**2 + state.u.imag**2
    f_vals = np.asarray(flux.f_plus(v1, v2), dtype=np.float64)
    part_f = _viscosity_batch(v1, v2, eta_dd, f_vals, flux.f)
    g_vals = np.asarray(flux.G_bar_plus(v1, v2), dtype=np.float64)
    neg_gp = lambda s: -np.asarray(flux.g_prime(s))
    part_g = _viscosity_batch(v1, v2, eta_dd, g_vals, neg_gp)
    return float(np.sum(part_f) + np.sum(absu2[:-1] * part_g))


def _cumulative_gl(func: Callable, knots: np.ndarray) -> np.ndarray:
    """Antiderivative values at the knots, 5-point Gauss per gap, F(0) = 0."""
    mid = 0.5 * (knots[:-1] + knots[1:])
    half = 0.5 * np.diff(knots)
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(func(pts.ravel()), dtype=np.float64).reshape(pts.shape)
    gaps = half * (vals @ _GL_WEIGHTS)
    out = np.concatenate(([0.0], np.cumsum(gaps)))
    i0 = int(np.searchsorted(knots, 0.0))
    return out - out[i0]


class EntropyFluxCache:
    """Spline cache of the entropy fluxes q1, q2 for eta(v) = v^2/2.

    q1' = v f'(v) and q2' = v g''(v) with q1(0) = q2(0) = 0, integrated on
    a dense knot set over [-M2, M2] (cutoff band edges included as knots so
    every gap is smooth) and interpolated by cubic splines; interpolation
    error <= 1e-9 on the working range.
    """

    def __init__(self, spec: ProblemSpec, n_points: int = 10_000):
        m1, m2 = spec.coupling.m1, spec.coupling.m2
        base = np.linspace(-m2, m2, n_points)
        knots = np.unique(np.concatenate((base, [-m2, -m1, 0.0, m1, m2])))
        f_prime = spec.f_prime
        g_dd = spec.coupling.g_double_prime
        q1 = _cumulative_gl(lambda s: s * np.asarray(f_prime(s)), knots)
        q2 = _cumulative_gl(lambda s: s * np.asarray(g_dd(s)), knots)
        self._q1 = CubicSpline(knots, q1)
        self._q2 = CubicSpline(knots, q2)

    def q1(self, v):
        return self._q1(v)

    def q2(self, v):
        return self._q2(v)


def entropy_residual(
    state_n: State,
    state_np1: State,
    spec: ProblemSpec,
    h: float,
    tau: float,
    cache: EntropyFluxCache = None,
) -> np.ndarray:
    """Per-cell residual of the eta = v^2/2 entropy balance across one step.

    R_j = [eta(v^{n+1}_j) - eta(v^n_j)]/tau + [Q_{j+1/2} - Q_{j-1/2}]/h
          - (v_j g'(v_j) - q2(v_j)) D+(|u^n|^2)_j
    with Q = q1(vbar) - q2(vbar)*abar at interface arithmetic averages of
    time-n data.  A diagnostic construction: no per-cell sign is asserted,
    only the refinement trend of the positive part.

    All spatial differences here extend by nearest-interior copy, for v and
    |u|^2 alike, so any constant state has residual identically zero.  That
    intentionally differs from the evolution scheme's zero ghosts for u; on
    benchmark data the two agree to boundary-tail size.
    """
    if cache is None:
        cache = EntropyFluxCache(spec)
    vn = state_n.v
    vn1 = state_np1.v
    absu2 = state_n.u.real**2 + state_n.u.imag**2
    dt_term = 0.5 * (vn1 * vn1 - vn * vn) / tau
    vx = np.concatenate((vn[:1], vn, vn[-1:]))
    ax = np.concatenate((absu2[:1], absu2, absu2[-1:]))
    vbar = 0.5 * (vx[:-1] + vx[1:])
    abar = 0.5 * (ax[:-1] + ax[1:])
    q_flux = np.asarray(cache.q1(vbar)) - np.asarray(cache.q2(vbar)) * abar
    div = np.diff(q_flux) / h
    gp = np.asarray(spec.coupling.g_prime(vn))
    dplus_a = (ax[2:] - ax[1:-1]) / h
    src = (vn * gp - np.asarray(cache.q2(vn))) * dplus_a
    return dt_term + div - src


def gns_ratios(u, h: float) -> Tuple[float, float]:
    """Interpolation-inequality ratios r_inf and r_4 for a discrete field."""
    u = np.asarray(u)
    n_inf = discrete_norm(u, h, np.inf)
    n_2 = discrete_norm(u, h, 2)
    n_4 = discrete_norm(u, h, 4)
    d_2 = discrete_norm(forward_difference(u, h), h, 2)
    if n_2 == 0.0 or d_2 == 0.0:
        raise ValueError("undefined ratio: zero L2 or difference-quotient norm")
    r_inf = n_inf / (np.sqrt(n_2) * np.sqrt(d_2))
    r_4 = n_4 / (n_2**0.75 * d_2**0.25)
    return float(r_inf), float(r_4)


def boundary_monitor(state: State, k_cells: int) -> float:
    """Max |u| over the k outermost cells on each side; warns above 1e-5."""
    n = len(state.u)
    if not (0 < k_cells < n / 2):
        raise ConfigurationError(
            f"k_cells must be in (0, n_cells/2), got {k_cells} for {n} cells"
        )
    a = np.abs(state.u)
    worst = float(max(np.max(a[:k_cells]), np.max(a[-k_cells:])))
    if worst > BOUNDARY_WARN_LEVEL:
        logger.warning(
            "boundary activity %.3e exceeds %.0e: the domain may be too small",
            worst,
            BOUNDARY_WARN_LEVEL,
        )
    return worst


@dataclasses.dataclass(frozen=True)
class DiagnosticsRecord:
    """One sampling instant of every monitored functional."""

    t: float
    mass_u: float
    l2_v: float
    linf_v: float
    l4_u: float
    energy: float
    qtv_increment: float
    viscosity_increment: float
    entropy_pos_residual: float
    boundary_max_u: float
    dplus_u_l2: float

    def __post_init__(self) -> None:
        for name in (
            "t", "mass_u", "l2_v", "linf_v", "l4_u", "energy",
            "qtv_increment", "viscosity_increment", "entropy_pos_residual",
            "boundary_max_u", "dplus_u_l2",
        ):
            if not np.isfinite(getattr(self, name)):
                raise InvariantViolation(f"non-finite diagnostic {name}")
        if self.linf_v < 0:
            raise InvariantViolation("linf_v must be nonnegative")
        if self.qtv_increment < 0:
            raise InvariantViolation("qtv_increment must be nonnegative")
