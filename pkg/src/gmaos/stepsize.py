"""Approximately optimal stepsizes from conic and quadratic models.

Every routine here is a pure function of the one-step history of the
gradient iteration x_{k+1} = x_k - alpha_k g_k. Functions that can hit an
undefined case (a zero denominator, a model without a positive minimizer)
return ``None`` and leave the choice of another branch to the caller.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

GAMMA_MIN, GAMMA_MAX = 0.01, 2.0
B_COEFF_BOUND = 5000.0


class Branch(str, enum.Enum):
    CONIC = "conic"
    QUADRATIC_BFGS = "quadratic_bfgs"
    FALLBACK_FD = "fallback_fd"
    FALLBACK_BB_LIKE = "fallback_bblike"
    FALLBACK_SCALED = "fallback_scaled"
    INITIAL = "initial"
    BB1 = "bb1"


@dataclass(frozen=True)
class IterateMemory:
    """What the method remembers from the previous iteration."""

    s_prev: np.ndarray
    y_prev: np.ndarray
    f_prev: float
    g_prev: np.ndarray
    alpha_prev: float
    mu_prev: Optional[float] = None


@dataclass(frozen=True)
class ConicParams:
    delta: float
    rho: float
    gamma: float
    b_coeff: float
    v: np.ndarray
    r: np.ndarray
    vtr: float


@dataclass(frozen=True)
class StepsizeDecision:
    branch: Branch
    alpha_raw: float
    alpha: float
    mu: Optional[float] = None
    extra_gradient_evals: int = 0


def bb1(s, y):
    sty = float(np.dot(s, y))
    if sty == 0.0:
        return None
    return float(np.dot(s, s)) / sty


def bb2(s, y):
    yy = float(np.dot(y, y))
    if yy == 0.0:
        return None
    return float(np.dot(s, y)) / yy


def compute_mu(f_prev, f_cur, g_cur, s_prev, y_prev):
    """Deviation of f from a quadratic on the segment [x_{k-1}, x_k].

    Zero (up to roundoff) whenever f is quadratic along that segment.
    """
    sty = float(np.dot(s_prev, y_prev))
    if sty == 0.0:
        return None
    return abs(2.0 * (f_prev - f_cur + float(np.dot(g_cur, s_prev))) / sty - 1.0)


def quadratic_like(mu, mu_prev, c1, c2):
    if mu is None:
        return False
    if mu <= c1:
        return True
    return mu_prev is not None and max(mu, mu_prev) <= c2


def conic_params(f_prev, f_cur, g_prev, g_cur, s_prev):
    """Coefficients of the conic model through the last two iterates.

    Returns ``None`` when the model cannot be built: the discriminant is not
    positive, gamma is undefined, or v^T r <= 0.
    """
    gps = float(np.dot(g_prev, s_prev))
    if gps == 0.0:
        return None
    df = f_prev - f_cur
    delta = df * df - float(np.dot(g_cur, s_prev)) * gps
    if not delta > 0.0:
        return None
    rho = math.sqrt(delta)
    if rho + df == 0.0:
        return None
    gamma = -gps / (rho + df)
    gamma = max(min(gamma, GAMMA_MAX), GAMMA_MIN)
    b_coeff = (1.0 - gamma) / (gamma * gps)
    b_coeff = max(min(b_coeff, B_COEFF_BOUND), -B_COEFF_BOUND)
    v = gamma * s_prev
    y_bar = gamma * g_cur - g_prev / gamma
    r = y_bar / gamma
    vtr = float(np.dot(v, r))
    if not vtr > 0.0:
        return None
    return ConicParams(delta, rho, gamma, b_coeff, v, r, vtr)


def conic_curvature(g_cur, p, xi1):
    """g^T B g for the scalar-matrix BFGS update used by the conic model.

    B = d I - d v v^T / (v^T v) + r r^T / (v^T r) with d = xi1 v^T v / v^T r,
    evaluated without forming B.
    """
    vv = float(np.dot(p.v, p.v))
    if vv == 0.0:
        return None
    d = xi1 * vv / p.vtr
    vg = float(np.dot(p.v, g_cur))
    rg = float(np.dot(p.r, g_cur))
    # the projection of g off v is >= 0; clip rounding below zero
    return d * max(float(np.dot(g_cur, g_cur)) - vg * vg / vv, 0.0) + rg * rg / p.vtr


def conic_minimizer(g_cur, g_prev, p, xi1):
    """Stationary point of the conic model along -g_k, or ``None``.

    ``None`` means g^T B g + |g|^2 b^T g <= 0, in which case the model has no
    minimizer on alpha > 0.
    """
    curv = conic_curvature(g_cur, p, xi1)
    if curv is None:
        return None
    gg = float(np.dot(g_cur, g_cur))
    btg = p.b_coeff * float(np.dot(g_prev, g_cur))
    denom = curv + gg * btg
    if not denom > 0.0:
        return None
    return gg / denom


def conic_stepsize(g_cur, g_prev, p, xi1, s_prev, y_prev):
    alpha_s = conic_minimizer(g_cur, g_prev, p, xi1)
    if alpha_s is None:
        return None
    alpha = alpha_s
    if float(np.dot(s_prev, y_prev)) > 0.0:
        alpha = max(min(alpha_s, bb1(s_prev, y_prev)), bb2(s_prev, y_prev))
    return StepsizeDecision(Branch.CONIC, alpha, alpha)


def modified_secant(m, f_cur, g_cur, eta_bar):
    """Clipped correction r_bar, modified difference y_bar and s^T y_bar."""
    ss = float(np.dot(m.s_prev, m.s_prev))
    if ss == 0.0:
        raise ValueError("zero step s_prev")
    sty = float(np.dot(m.s_prev, m.y_prev))
    r_bar = 3.0 * float(np.dot(g_cur + m.g_prev, m.s_prev)) + 6.0 * (m.f_prev - f_cur)
    bound = eta_bar * sty
    r_bar = min(max(r_bar, -bound), bound)
    y_bar = m.y_prev + (r_bar / ss) * m.s_prev
    # s^T y_bar = s^T y + r_bar; the floor only absorbs rounding at the clip
    sty_bar = max(sty + r_bar, (1.0 - eta_bar) * sty)
    return r_bar, y_bar, sty_bar


def quadratic_curvature(g_cur, m, f_cur, xi2, eta_bar):
    """g^T B g for the modified BFGS update of xi2 |y|^2 / s^T y * I."""
    s, y = m.s_prev, m.y_prev
    ss = float(np.dot(s, s))
    sty = float(np.dot(s, y))
    _, y_bar, sty_bar = modified_secant(m, f_cur, g_cur, eta_bar)
    d = xi2 * float(np.dot(y, y)) / sty
    gs = float(np.dot(g_cur, s))
    yg = float(np.dot(y_bar, g_cur))
    return d * max(float(np.dot(g_cur, g_cur)) - gs * gs / ss, 0.0) + yg * yg / sty_bar


def quadratic_stepsize(g_cur, m, f_cur, xi2, eta_bar):
    if not float(np.dot(m.s_prev, m.y_prev)) > 0.0:
        raise ValueError("quadratic model needs s^T y > 0")
    curv = quadratic_curvature(g_cur, m, f_cur, xi2, eta_bar)
    alpha_hat = float(np.dot(g_cur, g_cur)) / curv if curv > 0.0 else math.inf
    alpha = max(min(alpha_hat, bb1(m.s_prev, m.y_prev)), bb2(m.s_prev, m.y_prev))
    return StepsizeDecision(Branch.QUADRATIC_BFGS, alpha, alpha)


def fallback_stepsize(g_cur, m, grad_probe: Callable[[float], np.ndarray], tau, xi3, delta):
    """Stepsize for s^T y <= 0.

    ``grad_probe(t)`` must return g(x_k - t g_k); it is called at most once.
    """
    gg = float(np.dot(g_cur, g_cur))
    sty = float(np.dot(m.s_prev, m.y_prev))
    ratio = float(np.dot(m.g_prev, m.g_prev)) / gg
    if ratio >= xi3:
        if sty != 0.0:
            alpha = gg * m.alpha_prev ** 2 / abs(sty)
            return StepsizeDecision(Branch.FALLBACK_BB_LIKE, alpha, alpha)
    else:
        g_probe = np.asarray(grad_probe(tau))
        if not np.all(np.isfinite(g_probe)):
            raise FloatingPointError("non-finite gradient at finite-difference probe")
        c = float(np.dot(g_cur, g_probe - g_cur)) / tau
        if c != 0.0:
            alpha = gg / abs(c)
            return StepsizeDecision(Branch.FALLBACK_FD, alpha, alpha, extra_gradient_evals=1)
        alpha = delta * m.alpha_prev
        return StepsizeDecision(Branch.FALLBACK_SCALED, alpha, alpha, extra_gradient_evals=1)
    alpha = delta * m.alpha_prev
    return StepsizeDecision(Branch.FALLBACK_SCALED, alpha, alpha)
