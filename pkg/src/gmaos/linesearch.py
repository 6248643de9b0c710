"""Zhang-Hager nonmonotone Armijo line search along -g.

Trial steps are shrunk by safeguarded quadratic interpolation; the reference
value C_k is a weighted average of past function values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

ALPHA_UNDERFLOW = 1e-30


class LineSearchError(RuntimeError):
    """No acceptable step was found."""

    def __init__(self, message, best_alpha, n_feval):
        super().__init__(message)
        self.best_alpha = best_alpha
        self.n_feval = n_feval


@dataclass(frozen=True)
class NonmonotoneState:
    c: float
    q: float = 1.0
    eta: float = 1.0


@dataclass(frozen=True)
class LineSearchOutcome:
    alpha_accepted: float
    f_trial: float
    n_backtracks: int
    n_feval: int


def accept(f_trial, c, sigma, alpha, gnorm2):
    if not math.isfinite(f_trial):
        return False
    return f_trial <= c - sigma * alpha * gnorm2


def interp_trial(f0, gnorm2, alpha, f_trial):
    """Minimizer of the quadratic with q(0)=f0, q'(0)=-gnorm2, q(alpha)=f_trial.

    Returns ``None`` if that quadratic is not convex.
    """
    curv = f_trial - f0 + alpha * gnorm2
    if not curv > 0.0:
        return None
    return gnorm2 * alpha * alpha / (2.0 * curv)


def backtrack(alpha, alpha0, trial):
    if trial is not None and alpha > 0.1 * alpha0 and 0.1 * alpha0 <= trial <= 0.9 * alpha:
        return trial
    return 0.5 * alpha


def update_cq(state, f_new):
    q_new = state.eta * state.q + 1.0
    c_new = (state.eta * state.q * state.c + f_new) / q_new
    return replace(state, c=c_new, q=q_new)


def search(f, x, g, alpha0, state, sigma=1e-4, max_backtracks=60, fx=None):
    """Backtrack from ``alpha0`` until the nonmonotone Armijo test passes.

    Parameters
    ----------
    f : callable
        Objective; called once per trial.
    x, g : ndarray
        Current iterate and its gradient.
    alpha0 : float
        Initial trial step.
    state : NonmonotoneState
        Holds the reference value C_k.
    fx : float, optional
        f(x), used for interpolation. Defaults to ``state.c``.

    Raises
    ------
    LineSearchError
        After ``max_backtracks`` rejected backtracks or if the step drops
        below 1e-30.
    """
    if fx is None:
        fx = state.c
    gnorm2 = float(np.dot(g, g))
    alpha = alpha0
    best_alpha, best_f = alpha0, math.inf
    nf = 0
    nb = 0
    while True:
        f_trial = f(x - alpha * g)
        nf += 1
        if accept(f_trial, state.c, sigma, alpha, gnorm2):
            return LineSearchOutcome(alpha, f_trial, nb, nf)
        if math.isfinite(f_trial) and f_trial < best_f:
            best_alpha, best_f = alpha, f_trial
        if nb >= max_backtracks:
            raise LineSearchError(f"no acceptable step after {nb} backtracks", best_alpha, nf)
        trial = interp_trial(fx, gnorm2, alpha, f_trial) if math.isfinite(f_trial) else None
        alpha = backtrack(alpha, alpha0, trial)
        nb += 1
        if alpha < ALPHA_UNDERFLOW:
            raise LineSearchError("step underflow", best_alpha, nf)
