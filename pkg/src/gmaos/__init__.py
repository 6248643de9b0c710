"""Gradient method with approximately optimal stepsizes from conic models."""

from .config import SolverConfig
from .problems import ObjectiveFunction, check_gradient, get_problem, registry
from .solver import SolverReport, Status, solve, solve_bb

__all__ = [
    "ObjectiveFunction",
    "SolverConfig",
    "SolverReport",
    "Status",
    "check_gradient",
    "get_problem",
    "registry",
    "solve",
    "solve_bb",
]
__version__ = "0.1.0"
