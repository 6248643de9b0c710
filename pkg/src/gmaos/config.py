"""Solver parameters and their flat ``key=value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields

from .problems import DEFAULT_SEED


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-6
    max_iter: int = 140000
    max_feval: int = 50000
    lambda_min: float = 1e-30
    lambda_max: float = 1e30
    sigma: float = 1e-4
    delta: float = 10.0
    xi1: float = 2.15
    xi2: float = 1.07
    xi3: float = 0.9
    eta_bar: float = 5.0 / 3.0 * 1e-5
    c1: float = 1e-8
    c2: float = 0.07
    eta_min: float = 1.0
    eta_max: float = 1.0
    tau_factor: float = 0.1
    tau_max: float = 0.01
    tau_floor: float = 1e-12
    max_backtracks: int = 60
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.lambda_min < self.lambda_max:
            raise ValueError("need 0 < lambda_min < lambda_max")
        if not 0 < self.sigma < 1:
            raise ValueError("sigma must lie in (0, 1)")
        if not 0 <= self.eta_min <= self.eta_max <= 1:
            raise ValueError("need 0 <= eta_min <= eta_max <= 1")
        if not 0 < self.c1 < self.c2:
            raise ValueError("need 0 < c1 < c2")
        if self.xi1 < 1 or self.xi2 < 1:
            raise ValueError("xi1 and xi2 must be >= 1")
        if not 0 < self.eta_bar < 0.1:
            raise ValueError("eta_bar must lie in (0, 0.1)")
        if self.delta <= 0 or self.xi3 <= 0:
            raise ValueError("delta and xi3 must be positive")
        if self.max_iter < 0 or self.max_feval < 1 or self.max_backtracks < 0:
            raise ValueError("iteration and evaluation limits must be nonnegative")

    @property
    def eta(self):
        """Averaging weight used at every iteration (eta_k = eta_max)."""
        return self.eta_max

    def tau(self, alpha_prev):
        return max(min(self.tau_factor * alpha_prev, self.tau_max), self.tau_floor)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_text(self):
        return "".join(f"{f.name}={getattr(self, f.name)!r}\n" for f in fields(self))


_TYPES = {f.name: f.type for f in fields(SolverConfig)}


def parse_config_text(text):
    """Parse ``key=value`` lines into a dict of typed overrides."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _TYPES:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = int(value) if _TYPES[key] == "int" else float(value)
    return out


def load_config(path, base=None):
    with open(path) as fh:
        overrides = parse_config_text(fh.read())
    return (base or SolverConfig()).replace(**overrides)
