"""Gradient method with approximately optimal stepsizes (GM_AOS, conic variant).

Both drivers here share one loop: pick a trial stepsize, run the
nonmonotone line search, step along -g. They differ only in how the trial
stepsize is chosen after the first iteration.
"""

from __future__ import annotations

import enum
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import SolverConfig
from .linesearch import LineSearchError, NonmonotoneState, search, update_cq
from .stepsize import (
    Branch,
    IterateMemory,
    StepsizeDecision,
    bb1,
    compute_mu,
    conic_params,
    conic_stepsize,
    fallback_stepsize,
    quadratic_like,
    quadratic_stepsize,
)


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    ITER_LIMIT = "IterLimit"
    FEVAL_LIMIT = "FevalLimit"
    LINE_SEARCH_FAIL = "LineSearchFail"
    NUMERICAL_ERROR = "NumericalError"


@dataclass(frozen=True)
class IterationLog:
    """State at the start of iteration k and the step it took.

    The last entry of a trace describes the final iterate; its ``alpha`` is
    NaN and its ``branch`` is ``None``.
    """

    k: int
    f: float
    gnorm_inf: float
    gnorm2: float
    alpha: float
    branch: Optional[Branch]
    c: float
    q: float
    nf: int
    ng: int
    mu: Optional[float] = None


@dataclass
class SolverReport:
    status: Status
    n_iter: int
    n_feval: int
    n_geval: int
    final_gnorm_inf: float
    final_f: float
    final_x: np.ndarray = field(repr=False)
    wall_time_seconds: float
    branch_histogram: dict = field(default_factory=dict)
    trace: Optional[list] = field(default=None, repr=False)
    message: str = ""

    @property
    def converged(self):
        return self.status is Status.CONVERGED

    def summary(self):
        return (f"status={self.status.value} n_iter={self.n_iter} n_feval={self.n_feval} "
                f"n_geval={self.n_geval} f={self.final_f:.10g} "
                f"gnorm_inf={self.final_gnorm_inf:.3e} time={self.wall_time_seconds:.3f}s")


def initial_stepsize(x0, f0, g0):
    xinf = float(np.max(np.abs(x0))) if x0.size else 0.0
    ginf = float(np.max(np.abs(g0)))
    if xinf <= 1e-30:
        if abs(f0) <= 1e-30:
            return 1.0
        return 2.0 * abs(f0) / float(np.linalg.norm(g0))
    if ginf < 1e7:
        return min(1.0, xinf / ginf)
    return min(1.0, max(1.0, xinf) / ginf)


def _clamp(decision, cfg, mu):
    alpha = max(min(decision.alpha_raw, cfg.lambda_max), cfg.lambda_min)
    return StepsizeDecision(decision.branch, decision.alpha_raw, alpha, mu,
                            decision.extra_gradient_evals)


def dispatch_stepsize(g_cur, f_cur, m, cfg, grad_probe):
    """Choose the model, compute its stepsize and clamp it to [lambda_min, lambda_max]."""
    mu = compute_mu(m.f_prev, f_cur, g_cur, m.s_prev, m.y_prev)
    if not quadratic_like(mu, m.mu_prev, cfg.c1, cfg.c2):
        p = conic_params(m.f_prev, f_cur, m.g_prev, g_cur, m.s_prev)
        if p is not None:
            decision = conic_stepsize(g_cur, m.g_prev, p, cfg.xi1, m.s_prev, m.y_prev)
            if decision is not None:
                return _clamp(decision, cfg, mu)
    if float(np.dot(m.s_prev, m.y_prev)) > 0.0:
        decision = quadratic_stepsize(g_cur, m, f_cur, cfg.xi2, cfg.eta_bar)
    else:
        decision = fallback_stepsize(g_cur, m, grad_probe, cfg.tau(m.alpha_prev),
                                     cfg.xi3, cfg.delta)
    return _clamp(decision, cfg, mu)


def bb_stepsize(g_cur, f_cur, m, cfg, grad_probe=None):
    if float(np.dot(m.s_prev, m.y_prev)) > 0.0:
        return _clamp(StepsizeDecision(Branch.BB1, *(2 * [bb1(m.s_prev, m.y_prev)])), cfg, None)
    alpha = cfg.delta * m.alpha_prev
    return _clamp(StepsizeDecision(Branch.FALLBACK_SCALED, alpha, alpha), cfg, None)


def _finite(a):
    return bool(np.all(np.isfinite(a)))


def _run(fn, x0, cfg, rule, trace):
    start = time.perf_counter()
    nf = ng = 0

    def f(z):
        nonlocal nf
        nf += 1
        with np.errstate(over="ignore", invalid="ignore"):
            return float(fn.eval_f(z))

    def grad(z):
        nonlocal ng
        ng += 1
        return np.asarray(fn.eval_g(z), dtype=float)

    x = np.array(fn.default_start if x0 is None else x0, dtype=float)
    if x.shape != (fn.dim,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({fn.dim},)")

    hist = Counter()
    log = [] if trace else None
    k = 0
    message = ""
    fx = f(x)
    g = grad(x)
    state = NonmonotoneState(c=fx, q=1.0, eta=cfg.eta)
    mem = None

    if not (math.isfinite(fx) and _finite(g)):
        status, message = Status.NUMERICAL_ERROR, "non-finite value at the starting point"
    else:
        while True:
            gnorm_inf = float(np.max(np.abs(g)))
            if gnorm_inf <= cfg.epsilon:
                status = Status.CONVERGED
                break
            if k >= cfg.max_iter:
                status = Status.ITER_LIMIT
                break
            if nf > cfg.max_feval:
                status = Status.FEVAL_LIMIT
                break

            if k == 0:
                a0 = initial_stepsize(x, fx, g)
                decision = StepsizeDecision(Branch.INITIAL, a0, a0)
            else:
                xk, gk = x, g
                try:
                    decision = rule(g, fx, mem, cfg, lambda t: grad(xk - t * gk))
                except FloatingPointError as exc:
                    status, message = Status.NUMERICAL_ERROR, str(exc)
                    break
                hist[decision.branch.value] += 1

            try:
                out = search(f, x, g, decision.alpha, state, cfg.sigma, cfg.max_backtracks, fx)
            except LineSearchError as exc:
                status, message = Status.LINE_SEARCH_FAIL, str(exc)
                break
            alpha = out.alpha_accepted
            if log is not None:
                log.append(IterationLog(k, fx, gnorm_inf, float(np.dot(g, g)), alpha,
                                        decision.branch, state.c, state.q, nf, ng, decision.mu))

            x_new = x - alpha * g
            g_new = grad(x_new)
            if not _finite(g_new):
                status, message = Status.NUMERICAL_ERROR, "non-finite gradient at accepted step"
                break
            state = update_cq(state, out.f_trial)
            mu = decision.mu if decision.mu is not None else (math.inf if k > 0 else None)
            mem = IterateMemory(x_new - x, g_new - g, fx, g, alpha, mu)
            x, fx, g = x_new, out.f_trial, g_new
            k += 1

    gnorm_inf = float(np.max(np.abs(g))) if _finite(g) else math.nan
    if log is not None:
        log.append(IterationLog(k, fx, gnorm_inf, float(np.dot(g, g)), math.nan, None,
                                state.c, state.q, nf, ng))
    return SolverReport(status, k, nf, ng, gnorm_inf, fx, x,
                        time.perf_counter() - start, dict(hist), log, message)


def solve(fn, x0=None, cfg=None, trace=False):
    """Minimize ``fn`` with GM_AOS(cone) from ``x0`` (default start if None)."""
    return _run(fn, x0, cfg or SolverConfig(), dispatch_stepsize, trace)


def solve_bb(fn, x0=None, cfg=None, trace=False):
    """Barzilai-Borwein (BB1) baseline with the same line search."""
    return _run(fn, x0, cfg or SolverConfig(), bb_stepsize, trace)


SOLVERS = {"gmaos": solve, "bb": solve_bb}
