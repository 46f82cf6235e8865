"""Numba-compiled twins of the reference kernels.

Same signatures and the same arithmetic as ``_reference`` (no fastmath, so
elementwise operations round identically); only the loop mechanics differ.
"""

import numpy as np
from numba import njit

PIVOT_TINY = 1e-300


@njit(cache=True)
def thomas(lower, diag, upper, rhs):
    n = diag.shape[0]
    cp = np.empty(n, dtype=diag.dtype)
    dp = np.empty(n, dtype=rhs.dtype)
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
    x = np.empty(n, dtype=dp.dtype)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@njit(cache=True)
def cn_newton(u_n, g_eff, cubic_coef, tau, h, tol, max_iter):
    n = u_n.shape[0]
    inv_h2 = 1.0 / (h * h)
    zi = 2j / tau
    off = np.full(n, inv_h2, dtype=np.complex128)
    rhs = zi * u_n
    w = u_n.astype(np.complex128)
    res = np.inf
    iters = 0
    diag = np.empty(n, dtype=np.complex128)
    for _ in range(max_iter):
        for j in range(n):
            coef = cubic_coef * (w[j].real * w[j].real + w[j].imag * w[j].imag) + g_eff[j]
            diag[j] = (zi - 2.0 * inv_h2) - coef
        w = thomas(off, diag, off, rhs)
        iters += 1
        res = 0.0
        for j in range(n):
            coef = cubic_coef * (w[j].real * w[j].real + w[j].imag * w[j].imag) + g_eff[j]
            left = w[j - 1] if j > 0 else 0.0 + 0.0j
            right = w[j + 1] if j < n - 1 else 0.0 + 0.0j
            lap = (right - 2.0 * w[j] + left) * inv_h2
            r = zi * (w[j] - u_n[j]) + lap - coef * w[j]
            ra = abs(r)
            if ra > res:
                res = ra
        if res <= tol:
            break
    return 2.0 * w - u_n, iters, res


@njit(cache=True)
def silf_update(v_n, absu2, f_v, gp_u2, tau, h, lam, gam, alpha):
    n = v_n.shape[0]
    ce = tau / (2.0 * h)
    cl = tau / (2.0 * lam * h)
    cg = alpha * tau / (2.0 * gam * h)

    rhs = np.empty(n, dtype=np.float64)
    diag = np.empty(n, dtype=np.float64)
    upper = np.empty(n, dtype=np.float64)
    lower = np.empty(n, dtype=np.float64)
    for j in range(n):
        f_left = f_v[j - 1] if j > 0 else f_v[0]
        f_right = f_v[j + 1] if j < n - 1 else f_v[n - 1]
        g_left = gp_u2[j - 1] if j > 0 else 0.0
        g_right = gp_u2[j + 1] if j < n - 1 else 0.0
        rhs[j] = v_n[j] - ce * (f_right - f_left) + alpha * ce * (g_right - g_left)
        a_left = absu2[j - 1] if j > 0 else 0.0
        a_right = absu2[j + 1] if j < n - 1 else 0.0
        a_plus = 0.5 * (absu2[j] + a_right)
        a_minus = 0.5 * (absu2[j] + a_left)
        diag[j] = 1.0 + 2.0 * cl + cg * (a_plus + a_minus)
        upper[j] = -(cl + cg * a_plus)
        lower[j] = -(cl + cg * a_minus)
    diag[0] += lower[0]
    diag[n - 1] += upper[n - 1]
    return thomas(lower, diag, upper, rhs)
