"""Command-line front end: ``gmaos {solve,bench,check-grad}``."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import sys

from . import bench
from .config import SolverConfig, load_config, parse_config_text
from .problems import (
    DEFAULT_DIM,
    GradientCheckError,
    check_gradient,
    get_problem,
    perturbed_points,
    problem_names,
)
from .solver import SOLVERS

ENV_CONFIG = "GMAOS_CONFIG"
TRACE_COLUMNS = ("k", "f", "gnorm_inf", "alpha", "branch", "C", "Q", "nf", "ng")
CHECK_GRAD_DIM = 50


class UsageError(Exception):
    pass


def _config_options():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH",
                   help=f"key=value parameter file (default: ${ENV_CONFIG} if set)")
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective configuration and exit")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--max-feval", type=int)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any configuration key (repeatable)")
    return p


def build_parser():
    common = _config_options()
    parser = argparse.ArgumentParser(prog="gmaos", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="run one solver on one problem")
    p.add_argument("--problem", default="quadratic")
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--solver", choices=list(SOLVERS), default="gmaos")
    p.add_argument("--trace", metavar="PATH", help="write a per-iteration CSV trace")

    p = sub.add_parser("bench", parents=[common], help="run the solver x problem matrix")
    p.add_argument("--solvers", default="gmaos,bb")
    p.add_argument("--problems", default=None, help="comma-separated subset (default: all)")
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--out", default="records.csv")
    p.add_argument("--profiles", default="profiles.json")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("check-grad", parents=[common],
                       help="finite-difference check of every registered gradient")
    p.add_argument("--dim", type=int, default=CHECK_GRAD_DIM)
    p.add_argument("--h", type=float, default=1e-6)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--points", type=int, default=10, help="random points besides the default start")
    return parser


def effective_config(args, environ=None):
    """Defaults < config file (--config, else $GMAOS_CONFIG) < flags."""
    environ = os.environ if environ is None else environ
    cfg = SolverConfig()
    path = args.config or environ.get(ENV_CONFIG)
    if path:
        cfg = load_config(path, cfg)
    overrides = parse_config_text("\n".join(args.set))
    for key in ("epsilon", "max_iter", "max_feval"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    return cfg.replace(**overrides)


def _problem(name, dim):
    try:
        return get_problem(name, dim)
    except KeyError:
        raise UsageError(f"unknown problem {name!r}; valid names: {', '.join(problem_names())}")
    except ValueError as exc:
        raise UsageError(str(exc))


def write_trace(trace, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for t in trace:
            w.writerow([t.k, repr(t.f), repr(t.gnorm_inf), "" if math.isnan(t.alpha) else repr(t.alpha),
                        t.branch.value if t.branch else "", repr(t.c), repr(t.q), t.nf, t.ng])


def cmd_solve(args, cfg):
    fn = _problem(args.problem, args.dim)
    rep = SOLVERS[args.solver](fn, None, cfg, trace=bool(args.trace))
    if args.trace:
        write_trace(rep.trace, args.trace)
    print(f"{args.solver} {fn.name} n={fn.dim} {rep.summary()}")
    return 0 if rep.converged else 1


def cmd_bench(args, cfg):
    solvers = [s for s in args.solvers.split(",") if s]
    bad = [s for s in solvers if s not in SOLVERS]
    if bad:
        raise UsageError(f"unknown solvers {bad}; valid names: {', '.join(SOLVERS)}")
    names = args.problems.split(",") if args.problems else problem_names()
    problems = [_problem(n, args.dim) for n in names]
    records = bench.run_matrix(solvers, problems, cfg, workers=args.workers)
    bench.write_records_csv(records, args.out)
    for r in records:
        print(f"{r.solver:6s} {r.problem:20s} {r.status:14s} iter={r.n_iter:7d} "
              f"nf={r.n_feval:7d} ng={r.n_geval:7d} time={r.wall_time_seconds:.3f}s")
    if len(solvers) >= 2:
        bench.write_profiles_json(bench.all_profiles(records), args.profiles)
    return 0 if all(r.solved for r in records) else 1


def cmd_check_grad(args, cfg):
    failed = 0
    print(f"{'problem':20s} {'dim':>6s} {'max rel err':>12s}")
    for name in problem_names():
        fn = _problem(name, args.dim)
        try:
            pts = [fn.default_start] + perturbed_points(fn, args.points, seed=cfg.seed)
            err = max(check_gradient(fn, x, args.h) for x in pts)
            ok = err <= args.tol
            shown = f"{err:12.3e}"
        except GradientCheckError as exc:
            ok, shown = False, f"  error at index {exc.index}"
        failed += not ok
        print(f"{name:20s} {fn.dim:6d} {shown} {'ok' if ok else 'FAIL'}")
    return 1 if failed else 0


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "check-grad": cmd_check_grad}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = effective_config(args)
        if args.dump_config:
            sys.stdout.write(cfg.to_text())
            return 0
        return COMMANDS[args.command](args, cfg)
    except (UsageError, ValueError, OSError) as exc:
        print(f"gmaos: error: {exc}", file=sys.stderr)
        return 2
