"""Pure numpy/Python reference implementations of the hot kernels.

The sequential recurrences (Thomas elimination) cannot be vectorized, so
this backend is the slow-but-dependency-free path. Arithmetic is kept
identical to the compiled backend so trajectories agree to rounding.
"""

import numpy as np

# Pivots at or below this magnitude are treated as an exactly singular system.
PIVOT_TINY = 1e-300


def thomas(lower, diag, upper, rhs):
    """Solve a tridiagonal system by Thomas elimination.

    Args:
        lower: sub-diagonal, length n (entry 0 unused).
        diag: main diagonal, length n.
        upper: super-diagonal, length n (entry n-1 unused).
        rhs: right-hand side, length n.

    Returns:
        Solution vector of length n (dtype follows diag/rhs promotion).

    Raises:
        ValueError: on a zero pivot (singular system).
    """
    n = diag.shape[0]
    dtype = np.result_type(lower.dtype, diag.dtype, upper.dtype, rhs.dtype)
    cp = np.empty(n, dtype=dtype)
    dp = np.empty(n, dtype=dtype)
    piv = diag[0]
    if abs(piv) <= PIVOT_TINY:
        raise ValueError("singular tridiagonal system: zero pivot")
    cp[0] = upper[0] / piv
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        denom = diag[i] - lower[i] * cp[i - 1]
        if abs(denom) <= PIVOT_TINY:
            raise ValueError("singular tridiagonal system: zero pivot")
        cp[i] = upper[i] / denom
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / denom
    x = np.empty(n, dtype=dtype)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def cn_newton(u_n, g_eff, cubic_coef, tau, h, tol, max_iter):
    """Midpoint (Crank-Nicolson) update of the Schrodinger field.

    Solves i(u1 - u0)/tau + D2 w = cubic_coef*|w|^2 w + g_eff*w with
    w = (u1 + u0)/2 and homogeneous Dirichlet ghosts, by frozen-coefficient
    iteration: each pass freezes the factor (cubic_coef*|w|^2 + g_eff) at the
    current iterate and solves one complex tridiagonal system for w.

    Args:
        u_n: complex state at time n, length >= 1.
        g_eff: real coupling profile alpha*g(v^n) per cell.
        cubic_coef: 1.0 to include the |w|^2 w term, 0.0 to drop it.
        tau, h: time step and mesh width.
        tol: residual sup-norm target.
        max_iter: iteration cap.

    Returns:
        (u_next, iterations_used, final_residual). The caller decides what a
        residual above tol means (step failure).
    """
    n = u_n.shape[0]
    inv_h2 = 1.0 / (h * h)
    zi = 2j / tau
    off = np.full(n, inv_h2, dtype=np.complex128)
    rhs = zi * u_n
    w = u_n.astype(np.complex128).copy()
    res = np.inf
    iters = 0
    for _ in range(max_iter):
        coef = cubic_coef * (w.real * w.real + w.imag * w.imag) + g_eff
        diag = (zi - 2.0 * inv_h2) - coef
        w = thomas(off, diag, off, rhs)
        iters += 1
        # residual of the true (unfrozen) equation at the new iterate
        coef = cubic_coef * (w.real * w.real + w.imag * w.imag) + g_eff
        lap = np.empty(n, dtype=np.complex128)
        if n == 1:
            lap[0] = -2.0 * w[0] * inv_h2
        else:
            lap[1:-1] = (w[2:] - 2.0 * w[1:-1] + w[:-2]) * inv_h2
            lap[0] = (w[1] - 2.0 * w[0]) * inv_h2
            lap[-1] = (w[-2] - 2.0 * w[-1]) * inv_h2
        resid = zi * (w - u_n) + lap - coef * w
        res = float(np.max(np.abs(resid)))
        if res <= tol:
            break
    return 2.0 * w - u_n, iters, res


def silf_update(v_n, absu2, f_v, gp_u2, tau, h, lam, gam, alpha):
    """Semi-implicit Lax-Friedrichs update of the conservation-law field.

    Explicit central differences of f(v^n) and of g'(v^n)|u^n|^2, implicit
    plain diffusion with weight tau/(2*lam*h) and implicit |u^n|^2-weighted
    diffusion with weight alpha*tau/(2*gam*h). Ghosts: v copies the nearest
    interior cell (so does f(v)); u-dependent quantities use zero ghosts.

    Args:
        v_n: real state at time n.
        absu2: |u^n|^2 per cell.
        f_v: f(v^n) per cell (precomputed by the caller).
        gp_u2: g'(v^n)*|u^n|^2 per cell.
        tau, h, lam, gam, alpha: scheme parameters.

    Returns:
        v at time n+1.
    """
    n = v_n.shape[0]
    ce = tau / (2.0 * h)
    cl = tau / (2.0 * lam * h)
    cg = alpha * tau / (2.0 * gam * h)

    fp = np.concatenate((f_v[:1], f_v, f_v[-1:]))
    gp = np.concatenate((np.zeros(1), gp_u2, np.zeros(1)))
    rhs = v_n - ce * (fp[2:] - fp[:-2]) + alpha * ce * (gp[2:] - gp[:-2])

    ap = np.concatenate((np.zeros(1), absu2, np.zeros(1)))
    a_plus = 0.5 * (ap[1:-1] + ap[2:])
    a_minus = 0.5 * (ap[1:-1] + ap[:-2])

    diag = 1.0 + 2.0 * cl + cg * (a_plus + a_minus)
    upper = -(cl + cg * a_plus)
    lower = -(cl + cg * a_minus)
    # implicit ghost copy v_{-1} = v_0 and v_n = v_{n-1}: fold into diagonal
    diag = diag.copy()
    diag[0] += lower[0]
    diag[-1] += upper[-1]
    return thomas(lower, diag, upper, rhs)
