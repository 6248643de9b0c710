"""Independent reference computations used by the tests.

Nothing here imports the package's stepsize formulas: models are formed as
dense matrices and minimized numerically.
"""

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(fun, lo, hi, tol=1e-15, max_iter=500):
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (abs(a) + abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def grid_then_golden(fun, grid):
    """Minimize ``fun`` on a sorted grid, then refine between the neighbours."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.asarray(fun(np.asarray(grid)), dtype=float)
    vals[~np.isfinite(vals)] = np.inf
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    return golden_section(fun, lo, hi), vals[i]


def bfgs_on_scalar(d, u, w):
    """D - D u u^T D / (u^T D u) + w w^T / (u^T w) with D = d I, as a dense matrix."""
    n = u.size
    D = d * np.eye(n)
    Du = D @ u
    return D - np.outer(Du, Du) / (u @ Du) + np.outer(w, w) / (u @ w)


def conic_dense(f_prev, f_cur, g_prev, g_cur, s, xi1):
    """Conic model pieces straight from the defining formulas.

    Returns (B, b) or None if the model is unavailable.
    """
    gps = g_prev @ s
    delta = (f_prev - f_cur) ** 2 - (g_cur @ s) * gps
    if delta <= 0:
        return None
    rho = math.sqrt(delta)
    gamma = -gps / (rho + f_prev - f_cur)
    gamma = max(min(gamma, 2.0), 0.01)
    coeff = max(min((1 - gamma) / (gamma * gps), 5000.0), -5000.0)
    b = coeff * g_prev
    v = gamma * s
    r = (gamma * g_cur - g_prev / gamma) / gamma
    if v @ r <= 0:
        return None
    B = bfgs_on_scalar(xi1 * (v @ v) / (v @ r), v, r)
    return B, b


def conic_phi(alpha, g, B, b):
    """phi(alpha) - f_k for the conic model along -g (alpha may be an array)."""
    return _conic_phi_scalars(alpha, g @ g, g @ B @ g, b @ g)


def _conic_phi_scalars(alpha, gg, gBg, bg):
    t = 1.0 - alpha * bg
    return -alpha * gg / t + 0.5 * alpha * alpha * gBg / (t * t)


def conic_argmin(g, B, b):
    """Global minimizer of the conic model over alpha > 0, alpha != 1 / b^T g."""
    bg = b @ g
    gg, gBg = g @ g, g @ B @ g
    scale = gg / max(gBg, 1e-300)
    far = np.geomspace(scale * 1e-8, scale * 1e8, 4001)
    fun = lambda a: _conic_phi_scalars(a, gg, gBg, bg)
    if bg > 0:
        sing = 1.0 / bg
        left = sing * np.union1d(np.linspace(1e-9, 1 - 1e-9, 4001),
                                 np.geomspace(1e-12, 1 - 1e-9, 4001))
        right = sing + far
        candidates = [grid_then_golden(fun, left), grid_then_golden(fun, right)]
    else:
        candidates = [grid_then_golden(fun, far)]
    best = min(candidates, key=lambda c: fun(c[0]))
    return best[0]


def modified_bfgs_dense(m, f_cur, g_cur, xi2, eta_bar):
    s, y = m.s_prev, m.y_prev
    sty = s @ y
    rbar = 3 * (g_cur + m.g_prev) @ s + 6 * (m.f_prev - f_cur)
    rbar = min(max(rbar, -eta_bar * sty), eta_bar * sty)
    ybar = y + rbar / (s @ s) * s
    return bfgs_on_scalar(xi2 * (y @ y) / sty, s, ybar)


def random_conic_instance(rng, n, xi1=2.15):
    """Random one-step history for which the conic model has a positive minimizer."""
    from gmaos.stepsize import conic_minimizer, conic_params

    while True:
        g_prev = rng.standard_normal(n)
        s = -rng.uniform(0.05, 2.0) * g_prev
        g_cur = rng.standard_normal(n) * rng.uniform(0.1, 2.0)
        f_cur = rng.standard_normal()
        f_prev = f_cur + rng.uniform(-1.0, 3.0) * abs(g_prev @ s)
        p = conic_params(f_prev, f_cur, g_prev, g_cur, s)
        if p is None or conic_minimizer(g_cur, g_prev, p, xi1) is None:
            continue
        return f_prev, f_cur, g_prev, g_cur, s, p


def random_positive_curvature_memory(rng, n):
    from gmaos.stepsize import IterateMemory

    s = rng.standard_normal(n)
    y = rng.standard_normal(n)
    if s @ y < 0:
        y = -y
    g_prev = rng.standard_normal(n)
    g_cur = g_prev + y
    f_prev = rng.standard_normal() * 5
    f_cur = rng.standard_normal() * 5
    return IterateMemory(s, y, f_prev, g_prev, float(rng.uniform(0.1, 2.0))), f_cur, g_cur
