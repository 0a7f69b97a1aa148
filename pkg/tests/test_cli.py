import json
import subprocess
import sys
from pathlib import Path

import pytest

from bdgame import example_path

GOLDEN_DIR = Path(__file__).parent / "golden"


def run_cli(*args, env=None):
    import os
    merged = dict(os.environ)
    if env:
        merged.update(env)
    return subprocess.run(
        [sys.executable, "-m", "bdgame", *args],
        capture_output=True, text=True, env=merged)


def fixture(name):
    return str(example_path(name))


def test_solve_nash_prisoners_text():
    result = run_cli("solve", "--concept", "nash", fixture("prisoners"))
    assert result.returncode == 0
    assert "nash: 1 of 4 feasible profiles" in result.stdout
    assert "<alpha1={!a}, alpha2={!b}>" in result.stdout


def test_solve_dominant_opposed_interests_empty():
    result = run_cli("solve", "--concept", "dominant",
                     fixture("opposed_interests"))
    assert result.returncode == 0
    assert "dominant: 0 of 4" in result.stdout


def test_extension_command_flags_inconsistency():
    result = run_cli("extension", "--agent", "alpha1", "--decision", "a,d,e",
                     fixture("single_agent_priorities"))
    assert result.returncode == 0
    assert "INCONSISTENT" in result.stdout
    for literal in ("!p", "a", "d", "e", "q", "!q"):
        assert literal in result.stdout


def test_extension_of_initial_decision_by_default():
    result = run_cli("extension", "--agent", "alpha1",
                     fixture("single_agent_priorities"))
    assert result.returncode == 0
    assert "{!p, a}" in result.stdout


def test_validate_ok_and_error_exit_codes(tmp_path):
    ok = run_cli("validate", fixture("cooperation"))
    assert ok.returncode == 0
    assert "OK" in ok.stdout

    bad = tmp_path / "bad.bdg"
    bad.write_text("agent x {\n  atoms a\n  belief true => a\n}\nworld p\n",
                   encoding="utf-8")
    broken = run_cli("validate", str(bad))
    assert broken.returncode == 2
    assert "belief-consequent-not-in-L_W" in broken.stdout

    missing = run_cli("validate", str(tmp_path / "nope.bdg"))
    assert missing.returncode == 2
    assert missing.stderr.strip()


def test_parse_error_goes_to_stderr(tmp_path):
    bad = tmp_path / "syntax.bdg"
    bad.write_text("agent x {\n  atoms a\n  belief a =>\n}\n",
                   encoding="utf-8")
    result = run_cli("validate", str(bad))
    assert result.returncode == 2
    assert "line 3" in result.stderr


def test_profiles_feasible_only(tmp_path):
    full = run_cli("profiles", fixture("interdependence"), "--format", "json")
    only = run_cli("profiles", fixture("interdependence"), "--format",
                   "json", "--feasible-only")
    all_entries = json.loads(full.stdout)["profiles"]
    feasible = json.loads(only.stdout)["profiles"]
    assert len(all_entries) == 4
    assert len(feasible) == 3
    assert all(e["consistent"] for e in feasible)
    assert any(not e["consistent"] for e in all_entries)
    infeasible = next(e for e in all_entries if not e["consistent"])
    assert infeasible["unreached"] is None


def test_json_is_byte_stable_and_parallelism_neutral():
    runs = [run_cli("solve", "--concept", "pareto", "--format", "json",
                    fixture("prisoners")).stdout for _ in range(2)]
    runs.append(run_cli("solve", "--concept", "pareto", "--format", "json",
                        "--jobs", "3", fixture("prisoners")).stdout)
    assert runs[0] == runs[1] == runs[2]
    report = json.loads(runs[0])
    assert report["solutions"] == {"pareto": [0, 1, 2]}
    assert set(report) == {"system", "command", "profiles", "solutions",
                           "goal_sets", "checks"}


def test_goals_json_schema():
    result = run_cli("goals", "--family", "nash", "--format", "json",
                     fixture("prisoners"))
    report = json.loads(result.stdout)
    assert report["goal_sets"] == [{
        "positive": ["!(!a & b)", "!(a & !b)"],
        "negative": [],
        "generators": [3],
    }]
    assert report["solutions"] == {"family": [3]}


def test_goals_via_goals_matches_direct_pareto():
    direct = run_cli("goals", "--family", "pareto", "--format", "json",
                     fixture("cooperation"))
    via = run_cli("goals", "--family", "pareto", "--via-goals", "--format",
                  "json", fixture("cooperation"))
    assert direct.returncode == via.returncode == 0
    assert json.loads(direct.stdout)["solutions"] == \
        json.loads(via.stdout)["solutions"]


def test_goals_decision_rule():
    result = run_cli("goals", "--rule", "nash-else-pareto",
                     fixture("prisoners"))
    assert result.returncode == 0
    assert "decision rule nash-else-pareto: 1 profiles" in result.stdout


def test_check_commands_pass():
    for prop in ("representation", "monotonicity", "order-laws",
                 "pipeline-equivalence"):
        result = run_cli("check", "--property", prop, "--samples", "50",
                         fixture("cooperation"))
        assert result.returncode == 0, (prop, result.stdout, result.stderr)
        assert "PASS" in result.stdout


def test_check_seed_reproducibility():
    first = run_cli("check", "--property", "monotonicity", "--seed", "9",
                    "--format", "json", fixture("prisoners"))
    second = run_cli("check", "--property", "monotonicity", "--seed", "9",
                     "--format", "json", fixture("prisoners"))
    assert first.stdout == second.stdout


def test_atom_cap_env_var():
    result = run_cli("solve", "--concept", "nash",
                     fixture("single_agent_priorities"),
                     env={"BDGAME_MAX_ATOMS": "3"})
    assert result.returncode == 2
    assert "enumeration bound" in result.stderr
    relaxed = run_cli("solve", "--concept", "nash",
                      fixture("single_agent_priorities"),
                      env={"BDGAME_MAX_ATOMS": "12"})
    assert relaxed.returncode == 0


def test_decision_mode_override():
    result = run_cli("profiles", "--decision-mode", "total-assignments",
                     "--format", "json", fixture("interdependence"))
    report = json.loads(result.stdout)
    assert len(report["profiles"]) == 4
    for entry in report["profiles"]:
        assert all(len(lits) == 1 for lits in entry["decisions"].values())


@pytest.mark.parametrize("case", sorted(
    p.stem for p in GOLDEN_DIR.glob("*.json")))
def test_golden_reports(case):
    spec_name, _, rest = case.partition("__")
    args = rest.split("_")
    result = run_cli(*args, "--format", "json", fixture(spec_name))
    expected = (GOLDEN_DIR / f"{case}.json").read_text(encoding="utf-8")
    assert result.stdout == expected
