"""Spatial operators and the semi-discrete (method-of-lines) system.

The right-hand side couples the Schrödinger part, discretized with the
standard three-point Laplacian, to the conservation law, discretized in
flux form with one combined-flux evaluation per interface.  Boundary
policy: u ghost cells are zero, v ghost cells copy the nearest interior
cell.  An explicit RK4 integrator is included as a cross-validation
reference for the implicit stepper; it is gated by the parabolic-type
restriction tau <= h^2/4 coming from the Laplacian's spectrum.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from swlw.core import ConfigurationError, Grid, InvariantViolation, ProblemSpec, State, StepFailure
from swlw.fluxes import CombinedFlux


def discrete_laplacian(u: np.ndarray, h: float) -> np.ndarray:
    """(u_{j+1} - 2 u_j + u_{j-1}) / h^2 with zero ghost values."""
    u = np.asarray(u)
    out = -2.0 * u.astype(np.result_type(u, np.float64), copy=True)
    out[:-1] += u[1:]
    out[1:] += u[:-1]
    return out / (h * h)


def forward_difference(w: np.ndarray, h: float) -> np.ndarray:
    """(w_{j+1} - w_j) / h; the last entry uses a zero ghost value."""
    w = np.asarray(w)
    out = -w.astype(np.result_type(w, np.float64), copy=True)
    out[:-1] += w[1:]
    return out / h


_RK4_STABILITY = 0.25


@dataclasses.dataclass(frozen=True, eq=False)
class SemiDiscreteRHS:
    """du/dt and dv/dt of the coupled system on a fixed grid."""

    grid: Grid
    spec: ProblemSpec
    flux: CombinedFlux

    def __post_init__(self) -> None:
        if self.flux.alpha != self.spec.alpha:
            raise ConfigurationError(
                f"flux alpha ({self.flux.alpha}) disagrees with problem alpha "
                f"({self.spec.alpha})"
            )

    def _rhs_u(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        lap = discrete_laplacian(u, self.grid.h)
        pot = self.spec.alpha * self.spec.coupling.g(v)
        if self.spec.cubic_on:
            pot = pot + (u.real**2 + u.imag**2)
        return -1j * (-lap + pot * u)

    def _interface_fluxes(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        n = len(v)
        vx = np.empty(n + 2)
        vx[1:-1] = v
        vx[0] = v[0]
        vx[-1] = v[-1]
        ax = np.zeros(n + 2)
        ax[1:-1] = u.real**2 + u.imag**2
        return self.flux.H_plus(vx[:-1], vx[1:], ax[:-1], ax[1:])

    def _rhs_v(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        F = self._interface_fluxes(u, v)
        if not np.all(np.isfinite(F)):
            k = int(np.argmax(~np.isfinite(F)))
            raise InvariantViolation(f"non-finite interface flux at interface {k}")
        return -np.diff(F) / self.grid.h

    def rhs_schrodinger(self, state: State) -> np.ndarray:
        """du/dt = -i(-lap u + |u|^2 u + alpha g(v) u)."""
        out = self._rhs_u(state.u, state.v)
        if not np.all(np.isfinite(out)):
            raise InvariantViolation("non-finite Schrödinger right-hand side")
        return out

    def rhs_conservation(self, state: State) -> np.ndarray:
        """dv/dt = -(F_{j+1/2} - F_{j-1/2}) / h, one flux per interface."""
        return self._rhs_v(state.u, state.v)

    def rk4_step(self, state: State, tau: float) -> State:
        """Classical four-stage step of the joint system."""
        h = self.grid.h
        if tau <= 0:
            raise ConfigurationError(f"tau must be positive, got {tau}")
        if tau > _RK4_STABILITY * h * h:
            raise StepFailure(
                f"explicit step rejected: tau = {tau:g} exceeds the stability "
                f"bound {_RK4_STABILITY:g}*h^2 = {_RK4_STABILITY * h * h:g}"
            )
        u, v = state.u, state.v
        ku1, kv1 = self._rhs_u(u, v), self._rhs_v(u, v)
        u2, v2 = u + 0.5 * tau * ku1, v + 0.5 * tau * kv1
        ku2, kv2 = self._rhs_u(u2, v2), self._rhs_v(u2, v2)
        u3, v3 = u + 0.5 * tau * ku2, v + 0.5 * tau * kv2
        ku3, kv3 = self._rhs_u(u3, v3), self._rhs_v(u3, v3)
        u4, v4 = u + tau * ku3, v + tau * kv3
        ku4, kv4 = self._rhs_u(u4, v4), self._rhs_v(u4, v4)
        un = u + tau / 6.0 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4)
        vn = v + tau / 6.0 * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4)
        return State(t=state.t + tau, u=un, v=vn)
