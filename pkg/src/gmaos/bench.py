"""Solver-by-problem benchmark runs and Dolan-More performance profiles."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .solver import SOLVERS, Status

log = logging.getLogger(__name__)

METRICS = ("n_iter", "n_feval", "n_geval", "combined_cost", "wall_time_seconds")
INFORMATIONAL_METRICS = frozenset({"wall_time_seconds"})
TAU_GRID_POINTS = 200


@dataclass(frozen=True)
class BenchmarkRecord:
    solver: str
    problem: str
    dim: int
    status: str
    n_iter: int
    n_feval: int
    n_geval: int
    combined_cost: int
    wall_time_seconds: float
    final_f: float
    final_gnorm_inf: float
    seed: int

    @property
    def solved(self):
        return self.status == Status.CONVERGED.value


@dataclass(frozen=True)
class ProfileCurve:
    solver: str
    metric: str
    points: tuple

    @property
    def tau(self):
        return [p[0] for p in self.points]

    @property
    def rho(self):
        return [p[1] for p in self.points]

    def rho_at(self, tau):
        """Step-function value rho(tau)."""
        value = 0.0
        for t, r in self.points:
            if t <= tau:
                value = r
            else:
                break
        return value


def run_one(solver, fn, cfg):
    try:
        rep = SOLVERS[solver](fn, None, cfg)
    except Exception as exc:  # diverging user objective; record, don't abort the matrix
        log.warning("%s on %s raised %r", solver, fn.name, exc)
        return BenchmarkRecord(solver, fn.name, fn.dim, Status.NUMERICAL_ERROR.value,
                               0, 0, 0, 0, 0.0, math.nan, math.nan, cfg.seed)
    return BenchmarkRecord(solver, fn.name, fn.dim, rep.status.value, rep.n_iter,
                           rep.n_feval, rep.n_geval, rep.n_feval + 3 * rep.n_geval,
                           rep.wall_time_seconds, rep.final_f, rep.final_gnorm_inf, cfg.seed)


def run_matrix(solvers, problems, cfg, workers=1):
    """One record per (solver, problem) pair, in solver-major order."""
    if not solvers or not problems:
        raise ValueError("need at least one solver and one problem")
    unknown = [s for s in solvers if s not in SOLVERS]
    if unknown:
        raise KeyError(f"unknown solvers {unknown}; valid: {', '.join(SOLVERS)}")
    pairs = [(s, fn) for s in solvers for fn in problems]
    if workers <= 1:
        return [run_one(s, fn, cfg) for s, fn in pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_one, s, fn, cfg) for s, fn in pairs]
        return [fut.result() for fut in futures]


def cost_table(records, metric):
    """Problems, solvers and a cost matrix (problems x solvers); unsolved -> inf."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; valid: {', '.join(METRICS)}")
    problems = list(dict.fromkeys(r.problem for r in records))
    solvers = list(dict.fromkeys(r.solver for r in records))
    table = np.full((len(problems), len(solvers)), math.inf)
    for r in records:
        if r.solved:
            table[problems.index(r.problem), solvers.index(r.solver)] = float(getattr(r, metric))
    return problems, solvers, table


def ratio_table(table):
    """Performance ratios cost / best cost per row.

    A zero cost (no iterations: the start was already optimal) counts as 1
    so that it gets ratio 1 instead of 0/0.
    """
    costs = np.where(table == 0.0, 1.0, table)
    best = costs.min(axis=1, keepdims=True)
    return costs / best


def performance_profile(records, metric):
    problems, solvers, table = cost_table(records, metric)
    if len(solvers) < 2:
        raise ValueError("performance profiles need at least two solvers")
    keep = np.isfinite(table).any(axis=1)
    for p, ok in zip(problems, keep):
        if not ok:
            log.warning("problem %s was solved by no solver; excluded from the profile", p)
    table = table[keep]
    n_prob = table.shape[0]
    if n_prob == 0:
        return [ProfileCurve(s, metric, ((1.0, 0.0),)) for s in solvers]
    ratios = ratio_table(table)
    finite = ratios[np.isfinite(ratios)]
    tau_max = float(finite.max())
    grid = np.logspace(0.0, math.log10(tau_max), TAU_GRID_POINTS) if tau_max > 1 else np.ones(1)
    taus = np.unique(np.concatenate([grid, finite, [1.0]]))
    curves = []
    for j, s in enumerate(solvers):
        col = ratios[:, j]
        pts = tuple((float(t), int(np.count_nonzero(col <= t)) / n_prob) for t in taus)
        curves.append(ProfileCurve(s, metric, pts))
    return curves


def all_profiles(records):
    return [c for m in METRICS for c in performance_profile(records, m)]


def write_records_csv(records, path):
    names = [f.name for f in fields(BenchmarkRecord)]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for r in records:
            w.writerow(asdict(r))


def read_records_csv(path):
    types = {f.name: f.type for f in fields(BenchmarkRecord)}
    conv = {"int": int, "float": float, "str": str}
    with open(path, newline="") as fh:
        return [BenchmarkRecord(**{k: conv[types[k]](v) for k, v in row.items()})
                for row in csv.DictReader(fh)]


def write_profiles_json(curves, path):
    payload = [{"metric": c.metric, "solver": c.solver, "tau": c.tau, "rho": c.rho,
                "informational": c.metric in INFORMATIONAL_METRICS} for c in curves]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
