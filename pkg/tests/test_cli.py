import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import hermsolve.oracle as oracle
from hermsolve import __version__
from hermsolve.cli import (
    EXIT_FALSE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_UNSOLVABLE,
    EXIT_UNSUPPORTED,
    EXIT_VERIFY,
    main,
)
from hermsolve.extremal import ExtremalProfile
from hermsolve.serialize import Report

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text(encoding="utf-8"))


def run_cli(argv):
    buf = io.StringIO()
    code = main(argv, stdout=buf)
    return code, buf.getvalue()


@pytest.fixture
def in_golden(monkeypatch):
    monkeypatch.chdir(GOLDEN)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name, in_golden):
    case = CASES[name]
    code, out = run_cli(case["argv"])
    assert code == case["exit"]
    assert out == (GOLDEN / "out" / f"{name}.txt").read_text(encoding="utf-8")


def test_golden_table_covers_every_exit_code():
    codes = {c["exit"] for c in CASES.values()} | {EXIT_VERIFY}
    assert codes == {EXIT_OK, EXIT_UNSOLVABLE, EXIT_INPUT, EXIT_FALSE, EXIT_UNSUPPORTED, EXIT_VERIFY}


def test_json_reports_round_trip(in_golden):
    for name, case in CASES.items():
        if "--output" not in case["argv"]:
            continue
        _, out = run_cli(case["argv"])
        r = Report.from_json(out)
        assert r.to_json() == out
        assert r.version == __version__ and r.exit_code == case["exit"]


def test_exit_code_ignores_process_state(in_golden, monkeypatch):
    case = CASES["order-transformed-succ"]
    first = run_cli(case["argv"])
    monkeypatch.setenv("HERMSOLVE_UNUSED", "1")
    assert run_cli(case["argv"]) == first


def test_argparse_errors_map_to_input(in_golden):
    assert run_cli(["solve", "cubic", "inputs/one.json", "inputs/one.json"])[0] == EXIT_INPUT
    assert run_cli(["order", "ls-vs-lr", "inputs/col.json", "inputs/psd2.json"])[0] == EXIT_INPUT
    assert run_cli(["profile", "two-linear", "inputs/one.json"])[0] == EXIT_INPUT
    assert run_cli(["solve", "linear", "inputs/missing.json", "inputs/one.json"])[0] == EXIT_INPUT


def test_solve_with_param_file(in_golden):
    code, out = run_cli(
        ["--output", "json", "solve", "linear", "inputs/row.json", "inputs/row_b.json", "--param-file", "inputs/zero2.json"]
    )
    assert code == EXIT_OK
    sol = json.loads(out)["results"]["solution"]
    assert sol["entries"] == [["1", "0"], ["0", "0"], ["0", "0"], ["0", "0"]]


def test_solve_least_kinds(in_golden):
    code, out = run_cli(["--output", "json", "solve", "least-squares", "inputs/col.json", "inputs/psd2.json"])
    assert code == EXIT_OK and json.loads(out)["results"]["residual"] == "6"
    code, out = run_cli(["--output", "json", "solve", "least-rank", "inputs/col.json", "inputs/psd2.json"])
    assert code == EXIT_OK and json.loads(out)["results"]["min_rank"] == 1


def test_partition_needs_split(in_golden):
    argv = ["order", "partition", "--relation", "set-equality", "--mode", "forall", "inputs/psd2.json", "inputs/psd2.json"]
    assert run_cli(argv)[0] == EXIT_INPUT
    assert run_cli(argv + ["--split", "1"])[0] == EXIT_FALSE


def test_set_equality_on_wrong_kind(in_golden):
    argv = ["order", "ls-vs-lr", "--relation", "set-equality", "--mode", "forall", "inputs/col.json", "inputs/psd2.json"]
    assert run_cli(argv)[0] == EXIT_UNSUPPORTED


def _collapsed(profile: ExtremalProfile) -> ExtremalProfile:
    """The profile with every maximum pulled down to its minimum."""
    p = profile
    return ExtremalProfile(
        p.min_rank, p.min_rank, p.min_i_plus, p.min_i_plus, p.min_i_minus, p.min_i_minus,
        p.ambient_order, p.evidence,
    )


def test_injected_perturbation_gives_exit_5_and_replayable_counterexample(tmp_path, monkeypatch):
    real = oracle.profile_linear_vs_p
    monkeypatch.setattr(oracle, "profile_linear_vs_p", lambda spec, P: _collapsed(real(spec, P)))
    cx = tmp_path / "cx.json"
    argv = [
        "verify", "--suite", "envelopes", "--trials", "3", "--draws", "40",
        "--max-dim", "3", "--workers", "1", "--counterexample", str(cx), "--output", "json",
    ]
    code, out = run_cli(argv)
    assert code == EXIT_VERIFY
    stored = json.loads(cx.read_text(encoding="utf-8"))
    assert stored["suite"] == "envelopes" and stored["kind"] == "linear-vs-p"
    assert json.loads(out)["results"]["counterexample"] == str(cx)

    assert run_cli(["verify", "--replay", str(cx)])[0] == EXIT_VERIFY
    monkeypatch.setattr(oracle, "profile_linear_vs_p", real)
    assert run_cli(["verify", "--replay", str(cx)])[0] == EXIT_OK


def test_verify_small_all_suites(tmp_path):
    argv = ["verify", "--suite", "all", "--trials", "2", "--draws", "60", "--max-dim", "2",
            "--workers", "1", "--counterexample", str(tmp_path / "cx.json")]
    assert run_cli(argv)[0] == EXIT_OK
    assert not (tmp_path / "cx.json").exists()


def test_module_entry_point():
    env = dict(os.environ)
    src = str(Path(__file__).parents[1] / "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "hermsolve", "order", "two-linear", "--relation", "equal", "--mode", "forall",
         "inputs/one.json", "inputs/one.json", "inputs/one.json", "inputs/zero1.json"],
        cwd=GOLDEN, env=env, capture_output=True, text=True,
    )
    assert proc.returncode == EXIT_UNSUPPORTED
    assert "unsupported query" in proc.stdout
