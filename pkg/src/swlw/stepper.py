"""The fully discrete scheme: semi-implicit Crank-Nicolson for the short
wave, semi-implicit Lax-Friedrichs for the long wave.

Both updates read only time-n data from the other equation (staggered
coupling, exactly as the scheme is written).  The u-update iterates on the
frozen-coefficient midpoint system until the nonlinear residual sup-norm
is below tolerance; at convergence the discrete L2 norm of u is conserved
to the residual level.  The v-update is one real tridiagonal solve whose
implicit operator is an M-matrix with unit row sums, so interior mass
telescopes exactly.

Hot loops live in swlw._kernels (numba-compiled when available, with a
numpy twin selected by the SWLW_BACKEND environment variable).
"""

from __future__ import annotations

import dataclasses
import logging

import numpy as np

from swlw import _kernels
from swlw.core import ConfigurationError, Grid, ProblemSpec, State, StepFailure

logger = logging.getLogger(__name__)

_RETRY_HALVINGS = 3


@dataclasses.dataclass(frozen=True)
class StepperConfig:
    """Time step and scheme weights.

    The hyperbolic step restriction tau <= cfl_safety*lambda_lf*h is
    enforced when a Stepper is built against a grid.
    """

    tau: float
    lambda_lf: float
    gamma_lf: float
    newton_tol: float = 1e-12
    newton_max_iter: int = 25
    cfl_safety: float = 0.5

    def __post_init__(self) -> None:
        if not (self.tau > 0):
            raise ConfigurationError(f"tau must be > 0, got {self.tau}")
        if not (self.lambda_lf > 0):
            raise ConfigurationError(f"lambda_lf must be > 0, got {self.lambda_lf}")
        if not (self.gamma_lf > 0):
            raise ConfigurationError(f"gamma_lf must be > 0, got {self.gamma_lf}")
        if not (self.newton_tol > 0):
            raise ConfigurationError(f"newton_tol must be > 0, got {self.newton_tol}")
        if self.newton_max_iter < 1:
            raise ConfigurationError(
                f"newton_max_iter must be >= 1, got {self.newton_max_iter}"
            )
        if not (0.0 < self.cfl_safety <= 1.0):
            raise ConfigurationError(
                f"cfl_safety must be in (0, 1], got {self.cfl_safety}"
            )


@dataclasses.dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """A x = b with A tridiagonal; lower/upper have length n-1."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower))
        diag = np.atleast_1d(np.asarray(self.diag))
        upper = np.atleast_1d(np.asarray(self.upper))
        rhs = np.atleast_1d(np.asarray(self.rhs))
        n = len(diag)
        if n < 1:
            raise ConfigurationError("empty tridiagonal system")
        if n == 1:
            if len(lower) != 0 or len(upper) != 0:
                raise ConfigurationError("1x1 system must have empty off-diagonals")
        elif len(lower) != n - 1 or len(upper) != n - 1:
            raise ConfigurationError(
                f"off-diagonal lengths ({len(lower)}, {len(upper)}) "
                f"do not match diagonal length {n}"
            )
        if len(rhs) != n:
            raise ConfigurationError(
                f"rhs length {len(rhs)} does not match diagonal length {n}"
            )
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "rhs", rhs)
        off = np.zeros(n)
        if n > 1:
            off[:-1] += np.abs(upper)
            off[1:] += np.abs(lower)
        if np.any(np.abs(diag) < off):
            logger.warning(
                "tridiagonal system is not diagonally dominant in %d row(s)",
                int(np.sum(np.abs(diag) < off)),
            )

    @property
    def n(self) -> int:
        return len(self.diag)


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Thomas elimination; raises ValueError on a zero pivot."""
    dtype = np.result_type(
        system.lower.dtype if system.n > 1 else np.float64,
        system.diag.dtype,
        system.upper.dtype if system.n > 1 else np.float64,
        system.rhs.dtype,
        np.float64,
    )
    pad = np.zeros(1, dtype=dtype)
    # kernel convention: full-length bands with unused first/last entries
    lower = np.concatenate((pad, np.asarray(system.lower, dtype=dtype)))
    upper = np.concatenate((np.asarray(system.upper, dtype=dtype), pad))
    return _kernels.thomas(
        lower,
        np.ascontiguousarray(system.diag, dtype=dtype),
        upper,
        np.ascontiguousarray(system.rhs, dtype=dtype),
    )


@dataclasses.dataclass(frozen=True, eq=False)
class Stepper:
    """Advances one trajectory of the coupled scheme on a fixed grid."""

    grid: Grid
    spec: ProblemSpec
    config: StepperConfig

    def __post_init__(self) -> None:
        bound = self.config.cfl_safety * self.config.lambda_lf * self.grid.h
        if self.config.tau > bound * (1.0 + 1e-12):
            raise ConfigurationError(
                f"tau = {self.config.tau:g} violates the step restriction "
                f"cfl_safety*lambda_lf*h = {bound:g}"
            )

    def _cn_u(self, u_n: np.ndarray, v_n: np.ndarray, tau: float) -> np.ndarray:
        g_eff = self.spec.alpha * self.spec.coupling.g(v_n)
        cubic = 1.0 if self.spec.cubic_on else 0.0
        u_next, iters, res = _kernels.cn_newton(
            np.ascontiguousarray(u_n, dtype=np.complex128),
            np.ascontiguousarray(g_eff, dtype=np.float64),
            cubic,
            tau,
            self.grid.h,
            self.config.newton_tol,
            self.config.newton_max_iter,
        )
        if not (res <= self.config.newton_tol):
            raise StepFailure(
                f"Newton iteration for the u-update did not converge in "
                f"{self.config.newton_max_iter} iterations "
                f"(residual {res:.3e}, tau {tau:g})"
            )
        return u_next

    def _silf_v(self, u_n: np.ndarray, v_n: np.ndarray, tau: float) -> np.ndarray:
        absu2 = u_n.real**2 + u_n.imag**2
        f_v = np.asarray(self.spec.f(v_n), dtype=np.float64)
        gp_u2 = np.asarray(self.spec.coupling.g_prime(v_n), dtype=np.float64) * absu2
        try:
            return _kernels.silf_update(
                np.ascontiguousarray(v_n, dtype=np.float64),
                np.ascontiguousarray(absu2, dtype=np.float64),
                np.ascontiguousarray(f_v, dtype=np.float64),
                np.ascontiguousarray(gp_u2, dtype=np.float64),
                tau,
                self.grid.h,
                self.config.lambda_lf,
                self.config.gamma_lf,
                self.spec.alpha,
            )
        except ValueError as exc:
            raise StepFailure(f"v-update linear solve failed: {exc}") from exc

    def cn_newton_u_step(self, state: State) -> np.ndarray:
        """u^{n+1} from the Crank-Nicolson midpoint system at frozen v^n."""
        return self._cn_u(state.u, state.v, self.config.tau)

    def silf_v_step(self, state: State) -> np.ndarray:
        """v^{n+1} from one implicit Lax-Friedrichs solve at frozen u^n."""
        return self._silf_v(state.u, state.v, self.config.tau)

    def _substeps(self, u, v, tau: float, halvings: int):
        try:
            u_next = self._cn_u(u, v, tau)
            v_next = self._silf_v(u, v, tau)
            return u_next, v_next
        except StepFailure:
            if halvings >= _RETRY_HALVINGS:
                raise
            logger.warning(
                "step at tau=%g failed; retrying with two half steps", tau
            )
            u_mid, v_mid = self._substeps(u, v, tau / 2.0, halvings + 1)
            return self._substeps(u_mid, v_mid, tau / 2.0, halvings + 1)

    def step(self, state: State) -> State:
        """One full step: u-update with v^n, v-update with u^n."""
        u_next, v_next = self._substeps(state.u, state.v, self.config.tau, 0)
        return State(t=state.t + self.config.tau, u=u_next, v=v_next)
