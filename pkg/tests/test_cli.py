import csv
import json
import subprocess
import sys

import pytest

from gmaos.cli import TRACE_COLUMNS, build_parser, effective_config, main
from gmaos.config import SolverConfig, parse_config_text


def test_solve_quadratic(capsys):
    assert main(["solve", "--problem", "quadratic", "--dim", "100"]) == 0
    out = capsys.readouterr().out
    assert "status=Converged" in out and "quadratic" in out


def test_solve_unknown_problem(capsys):
    assert main(["solve", "--problem", "nosuch"]) == 2
    err = capsys.readouterr().err
    assert "srosenbr" in err


def test_solve_bad_dimension():
    assert main(["solve", "--problem", "srosenbr", "--dim", "7"]) == 2


def test_unknown_solver_and_subcommand():
    assert main(["solve", "--solver", "nosuch"]) == 2
    assert main(["bench", "--solvers", "gmaos,nosuch", "--dim", "10"]) == 2
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_solver_failure_exit_code(capsys):
    assert main(["solve", "--problem", "srosenbr", "--dim", "10", "--max-iter", "2"]) == 1
    assert "IterLimit" in capsys.readouterr().out


def test_check_grad(capsys):
    assert main(["check-grad", "--dim", "20", "--points", "2"]) == 0
    out = capsys.readouterr().out
    assert out.count(" ok") == 14


def test_check_grad_fails_with_impossible_tolerance(capsys):
    assert main(["check-grad", "--dim", "10", "--points", "0", "--tol", "1e-30"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_trace_csv(tmp_path):
    path = tmp_path / "trace.csv"
    assert main(["solve", "--problem", "raydan1", "--dim", "50", "--trace", str(path)]) == 0
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert rows[1][4] == "initial"
    assert rows[-1][3] == "" and rows[-1][4] == ""
    assert [int(r[0]) for r in rows[1:]] == list(range(len(rows) - 1))


def test_dump_config_round_trip(tmp_path, capsys):
    assert main(["solve", "--dump-config", "--epsilon", "1e-8", "--set", "xi1=3.5"]) == 0
    text = capsys.readouterr().out
    cfg = SolverConfig().replace(**parse_config_text(text))
    assert cfg.epsilon == 1e-8 and cfg.xi1 == 3.5
    path = tmp_path / "cfg.txt"
    path.write_text(text)
    assert main(["bench", "--config", str(path), "--dump-config"]) == 0
    assert capsys.readouterr().out == text


def test_default_dump_matches_defaults(capsys):
    assert main(["solve", "--dump-config"]) == 0
    assert capsys.readouterr().out == SolverConfig().to_text()


def test_precedence(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("# comment\nepsilon = 1e-3\nmax_iter=7\n")
    env_path = tmp_path / "env.txt"
    env_path.write_text("epsilon=1e-4\nsigma=0.001\n")
    parser = build_parser()

    args = parser.parse_args(["solve"])
    assert effective_config(args, {}) == SolverConfig()
    cfg = effective_config(args, {"GMAOS_CONFIG": str(env_path)})
    assert (cfg.epsilon, cfg.sigma) == (1e-4, 0.001)

    args = parser.parse_args(["solve", "--config", str(path)])
    cfg = effective_config(args, {"GMAOS_CONFIG": str(env_path)})
    assert (cfg.epsilon, cfg.max_iter, cfg.sigma) == (1e-3, 7, 1e-4)

    args = parser.parse_args(["solve", "--config", str(path), "--max-iter", "9"])
    assert effective_config(args, {}).max_iter == 9


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "cfg.txt"
    path.write_text("nosuch=1\n")
    assert main(["solve", "--config", str(path)]) == 2
    assert main(["solve", "--config", str(tmp_path / "missing.txt")]) == 2
    assert main(["solve", "--set", "epsilon=-1"]) == 2


def test_env_config_used(tmp_path, monkeypatch, capsys):
    path = tmp_path / "env.txt"
    path.write_text("max_iter=5\n")
    monkeypatch.setenv("GMAOS_CONFIG", str(path))
    assert main(["solve", "--dump-config"]) == 0
    assert "max_iter=5\n" in capsys.readouterr().out


def test_bench_outputs(tmp_path):
    out, prof = tmp_path / "r.csv", tmp_path / "p.json"
    code = main(["bench", "--dim", "20", "--problems", "quadratic,raydan2,fletchcr",
                 "--out", str(out), "--profiles", str(prof)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 6
    assert {r["status"] for r in rows} == {"Converged"}
    data = json.loads(prof.read_text())
    assert {d["solver"] for d in data} == {"gmaos", "bb"}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gmaos", "solve", "--problem", "quadratic",
                          "--dim", "10"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "Converged" in res.stdout


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
