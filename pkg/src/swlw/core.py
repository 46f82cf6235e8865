"""Shared domain types: grid, state, problem specification, cutoff coupling.

Everything here is immutable value data. Arrays handed to State are copied
and frozen, so instances can be shared across threads without locking.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss


class ConfigurationError(ValueError):
    """Invalid configuration or problem setup (CLI exit code 2)."""


class StepFailure(RuntimeError):
    """A time step failed to converge after retries (CLI exit code 3)."""


class InvariantViolation(RuntimeError):
    """A runtime invariant was violated, e.g. non-finite state (CLI exit code 4)."""


@dataclasses.dataclass(frozen=True)
class Grid:
    """Uniform 1-D mesh of n_cells cells on [x_left, x_right].

    Cell j occupies [x_left + j*h, x_left + (j+1)*h] with center
    x_j = x_left + (j + 1/2)*h.  ``ghost`` is the number of ghost layers
    each boundary stencil may assume; the fill policy (zero for u, copy
    for v) lives with the operators that use it.
    """

    x_left: float
    x_right: float
    n_cells: int
    ghost: int = 1

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x_left) and np.isfinite(self.x_right)):
            raise ConfigurationError("grid endpoints must be finite")
        if self.x_left >= self.x_right:
            raise ConfigurationError(
                f"x_left ({self.x_left}) must be < x_right ({self.x_right})"
            )
        if int(self.n_cells) != self.n_cells or self.n_cells < 3:
            raise ConfigurationError(f"n_cells must be an integer >= 3, got {self.n_cells}")
        if int(self.ghost) != self.ghost or self.ghost < 1:
            raise ConfigurationError(f"ghost must be an integer >= 1, got {self.ghost}")
        centers = self.x_left + (np.arange(self.n_cells) + 0.5) * self.h
        centers.setflags(write=False)
        object.__setattr__(self, "_centers", centers)

    @property
    def h(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    @property
    def cell_centers(self) -> np.ndarray:
        return self._centers  # type: ignore[attr-defined]


@dataclasses.dataclass(frozen=True)
class State:
    """Time-stamped pair of cell-value arrays (u complex, v real)."""

    t: float
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        u = np.array(self.u, dtype=np.complex128, copy=True)
        v = np.array(self.v, dtype=np.float64, copy=True)
        if u.ndim != 1 or v.ndim != 1 or u.shape != v.shape:
            raise ValueError(f"u and v must be 1-D with equal length, got {u.shape} and {v.shape}")
        if not np.isfinite(self.t):
            raise InvariantViolation(f"state time is not finite: {self.t}")
        if not np.all(np.isfinite(u.view(np.float64))):
            raise InvariantViolation(f"non-finite u entries at t={self.t}")
        if not np.all(np.isfinite(v)):
            raise InvariantViolation(f"non-finite v entries at t={self.t}")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n_cells(self) -> int:
        return self.u.shape[0]


# Septic smoothstep S on [0,1]: S(0)=1, S(1)=0, S'=S''=S'''=0 at both ends.
#   S(x)  = 1 - (35x^4 - 84x^5 + 70x^6 - 20x^7)
#   S'(x) = -140 x^3 (1-x)^3
#   S''(x)= -420 x^2 (1-x)^2 (1-2x)
#   int_0^y S = y - (7y^5 - 14y^6 + 10y^7 - 2.5y^8),  int_0^1 S = 1/2


def _septic_s(x: np.ndarray) -> np.ndarray:
    return 1.0 - x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3)


def _septic_s_prime(x: np.ndarray) -> np.ndarray:
    return -140.0 * x**3 * (1.0 - x) ** 3


def _septic_s_int(x: np.ndarray) -> np.ndarray:
    # int_0^x S(s) ds, closed form
    return x - x**5 * (7.0 - 14.0 * x + 10.0 * x**2 - 2.5 * x**3)


@dataclasses.dataclass(frozen=True)
class CutoffCoupling:
    """C^3 coupling g with g'(v) = 1 on [-m1, m1], 0 for |v| >= m2.

    On the transition bands g' is the septic smoothstep, so g' in C^2 and
    g in C^3 everywhere.  g is odd with g(0) = 0 and saturates at
    +/- (m1 + m2)/2 outside the support of g'.
    """

    m1: float = 50.0
    m2: float = 60.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.m1) and np.isfinite(self.m2)):
            raise ConfigurationError("cutoff band edges must be finite")
        if self.m1 <= 0:
            raise ConfigurationError(f"m1 must be positive, got {self.m1}")
        if self.m1 >= self.m2:
            raise ConfigurationError(f"m1 ({self.m1}) must be < m2 ({self.m2})")

    def _band_coord(self, a: np.ndarray) -> np.ndarray:
        # a = |v|; clip keeps polynomial evaluation inside [0,1]
        return np.clip((a - self.m1) / (self.m2 - self.m1), 0.0, 1.0)

    def g(self, v):
        v_arr = np.asarray(v, dtype=np.float64)
        a = np.abs(v_arr)
        x = self._band_coord(a)
        w = self.m2 - self.m1
        band = self.m1 + w * _septic_s_int(x)
        out = np.where(a <= self.m1, a, band)
        out = np.copysign(out, v_arr) * (v_arr != 0.0)
        return out if v_arr.ndim else float(out)

    def g_prime(self, v):
        v_arr = np.asarray(v, dtype=np.float64)
        a = np.abs(v_arr)
        out = np.where(a <= self.m1, 1.0, _septic_s(self._band_coord(a)))
        out = np.where(a >= self.m2, 0.0, out)
        return out if v_arr.ndim else float(out)

    def g_double_prime(self, v):
        v_arr = np.asarray(v, dtype=np.float64)
        a = np.abs(v_arr)
        w = self.m2 - self.m1
        inside = (a > self.m1) & (a < self.m2)
        x = self._band_coord(a)
        out = np.where(inside, _septic_s_prime(x) / w, 0.0)
        out = out * np.sign(v_arr)
        return out if v_arr.ndim else float(out)

    @property
    def sup_g_double_prime(self) -> float:
        # |S'| peaks at x = 1/2 with value 140/64 = 35/16
        return (35.0 / 16.0) / (self.m2 - self.m1)

    @property
    def saturation(self) -> float:
        return (self.m1 + self.m2) / 2.0


def eval_cutoff_g(m1: float, m2: float, v) -> Tuple:
    """Evaluate the cutoff coupling: returns (g(v), g'(v), g''(v))."""
    c = CutoffCoupling(m1, m2)
    return c.g(v), c.g_prime(v), c.g_double_prime(v)


@dataclasses.dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Flux, coupling, and initial data for one coupled run.

    ``cubic_on`` disables the |u|^2 u term for problems where the
    Schrödinger part is linear in u.  ``lipschitz_bound_m`` is the working
    L-infinity range of v used for CFL and Lipschitz-constant sizing; it
    defaults to the outer cutoff edge m2.  Benchmark problems carry their
    natural spatial interval in ``domain``; leave it None when the caller
    picks the domain.
    """

    f: Callable
    f_prime: Callable
    coupling: CutoffCoupling
    u0: Callable
    v0: Callable
    alpha: float = 1.0
    cubic_on: bool = True
    exact: Optional[Callable] = None
    lipschitz_bound_m: Optional[float] = None
    domain: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha):
            raise ConfigurationError(f"alpha must be finite, got {self.alpha}")
        if self.domain is not None:
            left, right = self.domain
            if not (np.isfinite(left) and np.isfinite(right) and left < right):
                raise ConfigurationError(f"bad domain {self.domain}")
            object.__setattr__(self, "domain", (float(left), float(right)))
        f0 = float(self.f(0.0))
        if abs(f0) > 1e-14:
            raise ConfigurationError(f"flux must vanish at the origin, f(0) = {f0}")
        if self.lipschitz_bound_m is None:
            object.__setattr__(self, "lipschitz_bound_m", self.coupling.m2)
        if self.lipschitz_bound_m <= 0:
            raise ConfigurationError(
                f"lipschitz_bound_m must be positive, got {self.lipschitz_bound_m}"
            )


_GL_NODES, _GL_WEIGHTS = leggauss(5)


def _cell_averages(func: Callable, grid: Grid, dtype) -> np.ndarray:
    """5-point Gauss-Legendre cell averages, exact for degree <= 9."""
    lefts = grid.x_left + np.arange(grid.n_cells) * grid.h
    # points[j, q] = j-th cell, q-th node
    points = lefts[:, None] + (0.5 * (_GL_NODES + 1.0) * grid.h)[None, :]
    flat = points.ravel()
    try:
        vals = np.asarray(func(flat), dtype=dtype)
        if vals.shape != flat.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([func(x) for x in flat], dtype=dtype)
    vals = vals.reshape(points.shape)
    # cell average: (1/h) * (h/2) * sum w_q f(x_q) = sum w_q f(x_q) / 2
    return vals @ (_GL_WEIGHTS / 2.0)


def project_initial_data(spec: ProblemSpec, grid: Grid) -> State:
    """Cell-average u0 and v0 onto the grid; returns the t = 0 state."""
    u = _cell_averages(spec.u0, grid, np.complex128)
    v = _cell_averages(spec.v0, grid, np.float64)
    bad_u = ~np.isfinite(u.view(np.float64)).reshape(-1, 2).all(axis=1)
    bad_v = ~np.isfinite(v)
    if bad_u.any() or bad_v.any():
        j = int(np.argmax(bad_u | bad_v))
        raise ConfigurationError(
            f"initial data produced a non-finite cell average in cell {j} "
            f"(center x = {grid.cell_centers[j]:g})"
        )
    return State(t=0.0, u=u, v=v)
