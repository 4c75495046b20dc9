import json
import subprocess
import sys
from pathlib import Path

import pytest

from pgl.cli import main

PROGRAMS = Path(__file__).resolve().parents[1] / "programs"
EX1 = str(PROGRAMS / "example1.pgl")
EX3 = str(PROGRAMS / "example3.pgl")
EMPTY = str(PROGRAMS / "empty.pgl")
QUERY_KEYS = {"goal", "degree", "trace", "oracle_degree", "satisfiable", "divergence"}


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_example_1_degree(capsys):
    code, out, _ = run(capsys, "query", EX1)
    assert code == 0 and out == "0.6\n"


def test_example_1_with_oracle(capsys):
    code, out, _ = run(capsys, "query", EX1, "--oracle")
    assert out.splitlines() == ["0.6", "oracle 0.6", "satisfiable yes", "divergence 0"]


def test_example_3_json_trace(capsys):
    code, out, _ = run(capsys, "query", EX3, "--trace", "--json", "--oracle")
    data = json.loads(out)
    assert set(data) == QUERY_KEYS
    assert data["degree"] == {"num": 1, "den": 1}
    assert data["oracle_degree"] == {"num": 1, "den": 1} and data["satisfiable"] is True
    trace = data["trace"]
    assert trace["rule"] == "IN"
    assert {p["goal"] for p in trace["premises"]} == {"john_is_14_16", "john_is_16_18"}
    assert all(p["rule"] == "Fact" for p in trace["premises"])


def test_json_keys_present_without_options(capsys):
    _, out, _ = run(capsys, "query", EX1, "--json")
    data = json.loads(out)
    assert set(data) == QUERY_KEYS
    assert data["trace"] is None and data["oracle_degree"] is None


def test_timings_only_on_request(capsys):
    _, out, _ = run(capsys, "query", EX1, "--json", "--timings", "--oracle")
    assert set(json.loads(out)["timings_ms"]) == {"parse", "saturate", "oracle"}


def test_empty_program_goal(capsys):
    code, out, _ = run(capsys, "query", EMPTY, "--goal", "q")
    assert code == 0 and out == "0\n"


def test_goal_required_without_query_statement(capsys):
    code, _, err = run(capsys, "query", EMPTY)
    assert code == 1 and "--goal" in err


def test_unknown_goal(capsys):
    code, _, err = run(capsys, "query", EX1, "--goal", "nobody")
    assert code == 1 and "nobody" in err


def test_parse_error_location(capsys, tmp_path):
    bad = tmp_path / "bad.pgl"
    bad.write_text("clause (q, 0.5)\nclause (p -> , 1)\n")
    code, _, err = run(capsys, "query", str(bad), "--goal", "q")
    assert code == 1 and err.startswith(f"{bad}:2:14: error:")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.pgl"))
    assert code == 1 and "nope.pgl" in err


def test_space_cap_exit_code(capsys):
    code, _, err = run(capsys, "query", EX1, "--oracle", "--max-space", "1")
    assert code == 2 and "space" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["query"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["query", EX1, "--grid-step", "abc"])
    assert info.value.code == 1


def test_grid_step_option(capsys):
    code, out, _ = run(capsys, "query", EX1, "--oracle", "--grid-step", "1/10")
    assert code == 0 and "oracle 0.6" in out


def test_check_and_saturate(capsys):
    code, out, _ = run(capsys, "check", EX3)
    assert code == 0 and out == "ok: 2 clauses, 3 atoms, 1 sorts\n"
    code, out, _ = run(capsys, "saturate", EX1)
    assert code == 0 and "friend_mary_john 0.6" in out.splitlines()
    code, out, _ = run(capsys, "saturate", EX3, "--json")
    assert json.loads(out)["degrees"]["john_is_about_16"] == {"num": 1, "den": 1}


def test_strategies_agree(capsys):
    _, a, _ = run(capsys, "saturate", EX3, "--strategy", "naive")
    _, b, _ = run(capsys, "saturate", EX3)
    assert a == b


def test_output_is_byte_identical_across_processes():
    args = [sys.executable, "-m", "pgl.cli", "query", EX3, "--trace", "--json", "--oracle"]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args, capture_output=True, check=True).stdout
    assert first == second and first
