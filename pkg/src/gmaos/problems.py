"""Smooth unconstrained test functions with analytic gradients.

Formulas follow the Andrei (2008) unconstrained test collection and its CUTE
counterparts. Indices in the formulas below are 1-based, as in the literature.

    quadratic          f = 1/2 sum_i i x_i^2                                x0 = (1, ..., 1)
    srosenbr           f = sum_{i=1}^{n/2} 100 (x_{2i} - x_{2i-1}^2)^2 + (1 - x_{2i-1})^2
                                                                            x0 = (-1.2, 1, ...)
    white_holst        f = sum_{i=1}^{n/2} 100 (x_{2i} - x_{2i-1}^3)^2 + (1 - x_{2i-1})^2
                                                                            x0 = (-1.2, 1, ...)
    beale              f = sum_{i=1}^{n/2} (1.5 - a(1-b))^2 + (2.25 - a(1-b^2))^2
                                          + (2.625 - a(1-b^3))^2,
                       a = x_{2i-1}, b = x_{2i}                             x0 = (1, 0.8, ...)
    penalty            f = sum_{i=1}^{n-1} (x_i - 1)^2 + (sum_j x_j^2 - 0.25)^2
                                                                            x0 = (1, 2, ..., n)
    perturbed_quadratic  f = sum_i i x_i^2 + (sum_i x_i)^2 / 100            x0 = (0.5, ...)
    raydan1            f = sum_i (i/10) (exp(x_i) - x_i)                    x0 = (1, ...)
    raydan2            f = sum_i (exp(x_i) - x_i)                           x0 = (1, ...)
    diagonal1          f = sum_i (exp(x_i) - i x_i)                         x0 = (1/n, ...)
    gen_tridiag1       f = sum_{i=1}^{n-1} (x_i + x_{i+1} - 3)^2 + (x_i - x_{i+1} + 1)^4
                                                                            x0 = (2, ...)
    edensch            f = 16 + sum_{i=1}^{n-1} (x_i - 2)^4 + (x_i x_{i+1} - 2 x_{i+1})^2
                                                + (x_{i+1} + 1)^2           x0 = (0, ...)
    engval1            f = sum_{i=1}^{n-1} (x_i^2 + x_{i+1}^2)^2 + (3 - 4 x_i)
                                                                            x0 = (2, ...)
    fletchcr           f = sum_{i=1}^{n-1} 100 (x_{i+1} - x_i + 1 - x_i^2)^2
                                                                            x0 = (0, ...)
    dixmaana           n = 3m,
                       f = 1 + sum_{i=1}^{n} x_i^2 + 0.125 sum_{i=1}^{2m} x_i^2 x_{i+m}^4
                             + 0.125 sum_{i=1}^{m} x_i x_{i+2m}              x0 = (2, ...)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

DEFAULT_DIM = 1000
DEFAULT_SEED = 20190417


class GradientCheckError(ValueError):
    """Raised when f or g is non-finite while checking a gradient."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class ObjectiveFunction:
    name: str
    dim: int
    eval_f: Callable[[np.ndarray], float] = field(repr=False)
    eval_g: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    default_start: np.ndarray = field(repr=False)

    def __call__(self, x):
        return self.eval_f(x)


def _ramp(n):
    return np.arange(1, n + 1, dtype=float)


def _require_even(name, n):
    if n < 2 or n % 2:
        raise ValueError(f"{name} needs an even dimension >= 2, got {n}")


def _require_min(name, n, lo):
    if n < lo:
        raise ValueError(f"{name} needs dimension >= {lo}, got {n}")


# -- diagonal quadratics -----------------------------------------------------

def _diag_quad_f(x, d):
    return 0.5 * float(np.dot(d, x * x))


def _diag_quad_g(x, d):
    return d * x


def quadratic(n=DEFAULT_DIM):
    _require_min("quadratic", n, 1)
    d = _ramp(n)
    return ObjectiveFunction("quadratic", n, partial(_diag_quad_f, d=d),
                             partial(_diag_quad_g, d=d), np.ones(n))


def diagonal_quadratic(n=100, cond=1e4):
    """Quadratic 1/2 x^T D x with D log-spaced on [1, cond]."""
    _require_min("diagonal_quadratic", n, 2)
    d = np.logspace(0.0, math.log10(cond), n)
    return ObjectiveFunction(f"diag_quadratic_c{cond:g}", n,
                             partial(_diag_quad_f, d=d),
                             partial(_diag_quad_g, d=d), np.ones(n))


# -- two-block functions -----------------------------------------------------

def _rosen_f(x, c):
    a, b = x[0::2], x[1::2]
    t = b - a * a
    return float(np.sum(c * t * t + (1.0 - a) ** 2))


def _rosen_g(x, c):
    a, b = x[0::2], x[1::2]
    t = b - a * a
    g = np.empty_like(x)
    g[0::2] = -4.0 * c * t * a - 2.0 * (1.0 - a)
    g[1::2] = 2.0 * c * t
    return g


def srosenbr(n=DEFAULT_DIM):
    _require_even("srosenbr", n)
    x0 = np.tile([-1.2, 1.0], n // 2)
    return ObjectiveFunction("srosenbr", n, partial(_rosen_f, c=100.0),
                             partial(_rosen_g, c=100.0), x0)


def _white_holst_f(x, c):
    a, b = x[0::2], x[1::2]
    t = b - a ** 3
    return float(np.sum(c * t * t + (1.0 - a) ** 2))


def _white_holst_g(x, c):
    a, b = x[0::2], x[1::2]
    t = b - a ** 3
    g = np.empty_like(x)
    g[0::2] = -6.0 * c * t * a * a - 2.0 * (1.0 - a)
    g[1::2] = 2.0 * c * t
    return g


def white_holst(n=DEFAULT_DIM):
    _require_even("white_holst", n)
    x0 = np.tile([-1.2, 1.0], n // 2)
    return ObjectiveFunction("white_holst", n, partial(_white_holst_f, c=100.0),
                             partial(_white_holst_g, c=100.0), x0)


_BEALE_C = (1.5, 2.25, 2.625)


def _beale_f(x):
    a, b = x[0::2], x[1::2]
    total = 0.0
    for j, c in enumerate(_BEALE_C, start=1):
        u = c - a * (1.0 - b ** j)
        total += float(np.sum(u * u))
    return total


def _beale_g(x):
    a, b = x[0::2], x[1::2]
    ga = np.zeros_like(a)
    gb = np.zeros_like(b)
    for j, c in enumerate(_BEALE_C, start=1):
        u = c - a * (1.0 - b ** j)
        ga += -2.0 * u * (1.0 - b ** j)
        gb += 2.0 * u * a * j * b ** (j - 1)
    g = np.empty_like(x)
    g[0::2] = ga
    g[1::2] = gb
    return g


def beale(n=DEFAULT_DIM):
    _require_even("beale", n)
    x0 = np.tile([1.0, 0.8], n // 2)
    return ObjectiveFunction("beale", n, _beale_f, _beale_g, x0)


# -- full-vector functions ---------------------------------------------------

def _penalty_f(x):
    t = float(np.dot(x, x)) - 0.25
    r = x[:-1] - 1.0
    return float(np.dot(r, r)) + t * t


def _penalty_g(x):
    t = float(np.dot(x, x)) - 0.25
    g = 4.0 * t * x
    g[:-1] += 2.0 * (x[:-1] - 1.0)
    return g


def penalty(n=DEFAULT_DIM):
    _require_min("penalty", n, 2)
    return ObjectiveFunction("penalty", n, _penalty_f, _penalty_g, _ramp(n))


def _pert_quad_f(x, d):
    s = float(np.sum(x))
    return float(np.dot(d, x * x)) + s * s / 100.0


def _pert_quad_g(x, d):
    return 2.0 * d * x + float(np.sum(x)) / 50.0


def perturbed_quadratic(n=DEFAULT_DIM):
    _require_min("perturbed_quadratic", n, 1)
    d = _ramp(n)
    return ObjectiveFunction("perturbed_quadratic", n, partial(_pert_quad_f, d=d),
                             partial(_pert_quad_g, d=d), np.full(n, 0.5))


def _raydan_f(x, w):
    return float(np.dot(w, np.exp(x) - x))


def _raydan_g(x, w):
    return w * (np.exp(x) - 1.0)


def raydan1(n=DEFAULT_DIM):
    _require_min("raydan1", n, 1)
    w = _ramp(n) / 10.0
    return ObjectiveFunction("raydan1", n, partial(_raydan_f, w=w),
                             partial(_raydan_g, w=w), np.ones(n))


def raydan2(n=DEFAULT_DIM):
    _require_min("raydan2", n, 1)
    w = np.ones(n)
    return ObjectiveFunction("raydan2", n, partial(_raydan_f, w=w),
                             partial(_raydan_g, w=w), np.ones(n))


def _diagonal1_f(x, d):
    return float(np.sum(np.exp(x)) - np.dot(d, x))


def _diagonal1_g(x, d):
    return np.exp(x) - d


def diagonal1(n=DEFAULT_DIM):
    _require_min("diagonal1", n, 1)
    d = _ramp(n)
    return ObjectiveFunction("diagonal1", n, partial(_diagonal1_f, d=d),
                             partial(_diagonal1_g, d=d), np.full(n, 1.0 / n))


# -- chained functions -------------------------------------------------------

def _gtrid1_f(x):
    a = x[:-1] + x[1:] - 3.0
    b = x[:-1] - x[1:] + 1.0
    return float(np.sum(a * a + b ** 4))


def _gtrid1_g(x):
    a = x[:-1] + x[1:] - 3.0
    b = x[:-1] - x[1:] + 1.0
    u, v = 2.0 * a, 4.0 * b ** 3
    g = np.zeros_like(x)
    g[:-1] += u + v
    g[1:] += u - v
    return g


def gen_tridiag1(n=DEFAULT_DIM):
    _require_min("gen_tridiag1", n, 2)
    return ObjectiveFunction("gen_tridiag1", n, _gtrid1_f, _gtrid1_g, np.full(n, 2.0))


def _edensch_f(x):
    xi, xj = x[:-1], x[1:]
    p = xj * (xi - 2.0)
    return 16.0 + float(np.sum((xi - 2.0) ** 4 + p * p + (xj + 1.0) ** 2))


def _edensch_g(x):
    xi, xj = x[:-1], x[1:]
    p = xj * (xi - 2.0)
    g = np.zeros_like(x)
    g[:-1] += 4.0 * (xi - 2.0) ** 3 + 2.0 * p * xj
    g[1:] += 2.0 * p * (xi - 2.0) + 2.0 * (xj + 1.0)
    return g


def edensch(n=DEFAULT_DIM):
    _require_min("edensch", n, 2)
    return ObjectiveFunction("edensch", n, _edensch_f, _edensch_g, np.zeros(n))


def _engval1_f(x):
    q = x[:-1] ** 2 + x[1:] ** 2
    return float(np.sum(q * q + 3.0 - 4.0 * x[:-1]))


def _engval1_g(x):
    q = x[:-1] ** 2 + x[1:] ** 2
    g = np.zeros_like(x)
    g[:-1] += 4.0 * q * x[:-1] - 4.0
    g[1:] += 4.0 * q * x[1:]
    return g


def engval1(n=DEFAULT_DIM):
    _require_min("engval1", n, 2)
    return ObjectiveFunction("engval1", n, _engval1_f, _engval1_g, np.full(n, 2.0))


def _fletchcr_f(x, c):
    t = x[1:] - x[:-1] + 1.0 - x[:-1] ** 2
    return float(c * np.dot(t, t))


def _fletchcr_g(x, c):
    t = x[1:] - x[:-1] + 1.0 - x[:-1] ** 2
    g = np.zeros_like(x)
    g[:-1] += 2.0 * c * t * (-1.0 - 2.0 * x[:-1])
    g[1:] += 2.0 * c * t
    return g


def fletchcr(n=DEFAULT_DIM):
    _require_min("fletchcr", n, 2)
    return ObjectiveFunction("fletchcr", n, partial(_fletchcr_f, c=100.0),
                             partial(_fletchcr_g, c=100.0), np.zeros(n))


def _dixmaan_weights(n, k):
    m = n // 3
    w = _ramp(n) / n
    w1, w2, w3, w4 = (w ** kj for kj in k)
    return m, w1, w2[:-1], w3[:2 * m], w4[:m]


def _dixmaan_f(x, alpha, beta, gamma, delta, k):
    m, w1, w2, w3, w4 = _dixmaan_weights(x.size, k)
    h = x[1:] + x[1:] ** 2
    return (1.0
            + alpha * float(np.dot(w1, x * x))
            + beta * float(np.dot(w2, x[:-1] ** 2 * h * h))
            + gamma * float(np.dot(w3, x[:2 * m] ** 2 * x[m:3 * m] ** 4))
            + delta * float(np.dot(w4, x[:m] * x[2 * m:3 * m])))


def _dixmaan_g(x, alpha, beta, gamma, delta, k):
    m, w1, w2, w3, w4 = _dixmaan_weights(x.size, k)
    g = 2.0 * alpha * w1 * x
    if beta:
        h = x[1:] + x[1:] ** 2
        g[:-1] += 2.0 * beta * w2 * x[:-1] * h * h
        g[1:] += 2.0 * beta * w2 * x[:-1] ** 2 * h * (1.0 + 2.0 * x[1:])
    a, b = x[:2 * m], x[m:3 * m]
    g[:2 * m] += 2.0 * gamma * w3 * a * b ** 4
    g[m:3 * m] += 4.0 * gamma * w3 * a * a * b ** 3
    g[:m] += delta * w4 * x[2 * m:3 * m]
    g[2 * m:3 * m] += delta * w4 * x[:m]
    return g


def dixmaana(n=999):
    if n < 3 or n % 3:
        raise ValueError(f"dixmaana needs a dimension divisible by 3, got {n}")
    params = dict(alpha=1.0, beta=0.0, gamma=0.125, delta=0.125, k=(0, 0, 0, 0))
    return ObjectiveFunction("dixmaana", n, partial(_dixmaan_f, **params),
                             partial(_dixmaan_g, **params), np.full(n, 2.0))


# -- registry ----------------------------------------------------------------

FACTORIES: dict[str, Callable[[int], ObjectiveFunction]] = {
    "quadratic": quadratic,
    "srosenbr": srosenbr,
    "white_holst": white_holst,
    "beale": beale,
    "penalty": penalty,
    "perturbed_quadratic": perturbed_quadratic,
    "raydan1": raydan1,
    "raydan2": raydan2,
    "diagonal1": diagonal1,
    "gen_tridiag1": gen_tridiag1,
    "edensch": edensch,
    "engval1": engval1,
    "fletchcr": fletchcr,
    "dixmaana": dixmaana,
}


def problem_names():
    return list(FACTORIES)


def get_problem(name, n=DEFAULT_DIM):
    """Build one registered function by name.

    DIXMAANA is defined only for n divisible by 3, so it is built at the
    largest such dimension not exceeding ``n``. Every other function uses
    ``n`` as given and raises ``ValueError`` if its block structure does
    not fit.
    """
    try:
        factory = FACTORIES[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; valid names: {', '.join(FACTORIES)}") from None
    if name == "dixmaana":
        n = 3 * (n // 3)
    return factory(n)


def registry(n=DEFAULT_DIM):
    return [get_problem(name, n) for name in FACTORIES]


# -- gradient verification ---------------------------------------------------

def check_gradient(fn, x, h=1e-6):
    """Max over i of |central difference - g_i| / (1 + |g_i|).

    The step for component i is ``h * (1 + |x_i|)``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=float)
    g = np.asarray(fn.eval_g(x), dtype=float)
    if g.shape != x.shape:
        raise GradientCheckError(f"gradient has shape {g.shape}, expected {x.shape}")
    bad = np.flatnonzero(~np.isfinite(g))
    if bad.size:
        raise GradientCheckError(f"non-finite gradient at index {bad[0]}", int(bad[0]))
    worst = 0.0
    xp = x.copy()
    for i in range(x.size):
        hi = h * (1.0 + abs(x[i]))
        xp[i] = x[i] + hi
        fp = fn.eval_f(xp)
        xp[i] = x[i] - hi
        fm = fn.eval_f(xp)
        xp[i] = x[i]
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise GradientCheckError(f"non-finite function value near index {i}", i)
        err = abs((fp - fm) / (2.0 * hi) - g[i]) / (1.0 + abs(g[i]))
        worst = max(worst, err)
    return worst


def perturbed_points(fn, count=10, seed=DEFAULT_SEED, scale=0.1):
    """Seeded random points near the default start."""
    rng = np.random.default_rng(seed)
    x0 = fn.default_start
    return [x0 + scale * (1.0 + np.abs(x0)) * rng.standard_normal(fn.dim)
            for _ in range(count)]
