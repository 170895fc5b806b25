#!/usr/bin/env python3
"""
Tests for the ``lbfl`` command line: gen, solve, oracle, check and bench.
"""

import json
import sys
import tempfile
from pathlib import Path

# Add the src directory to the path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from lbfl_solver.cli import _seed_range, main
from lbfl_solver.core import load_instance, save_instance
from lbfl_solver.core.samples import example_e1, line_instance


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def test_gen_is_deterministic():
    with tempfile.TemporaryDirectory() as tmp:
        first, second = Path(tmp) / "a.json", Path(tmp) / "b.json"
        assert main(["gen", "--seed", "4", "--profile", "tiny", "--out", str(first)]) == 0
        assert main(["gen", "--seed", "4", "--profile", "tiny", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert load_instance(first).m >= 1


def test_solve_then_check():
    with tempfile.TemporaryDirectory() as tmp:
        instance_path = Path(tmp) / "e1.json"
        save_instance(example_e1(), instance_path)
        result_path = Path(tmp) / "result.json"
        stages_path = Path(tmp) / "stages.json"
        code = main(["solve", str(instance_path), "--oracle", "--emit-stages", str(stages_path),
                     "--out", str(result_path)])
        assert code == 0
        result = read_json(result_path)
        assert result["cost"]["exact"] == "11"
        assert result["report"]["ratio"]["exact"] == "1"
        assert result["report"]["ledger"]["alpha"] == "7062"
        assert "timings" not in result["report"]
        stages = read_json(stages_path)
        assert stages["stage1"]["s_circ"] == ["a"]
        assert stages["certificates"] == result["report"]["certificates"]
        assert stages["certificates"] and all(c["holds"] for c in stages["certificates"])
        assert "I1-to-I recost" in {c["name"] for c in stages["certificates"]}

        solution_path = Path(tmp) / "solution.json"
        solution_path.write_text(json.dumps(result["solution"]), encoding="utf-8")
        check_path = Path(tmp) / "check.json"
        assert main(["check", str(instance_path), str(solution_path), "--out", str(check_path)]) == 0
        assert read_json(check_path)["cost"]["total"]["exact"] == "11"

        short = {"open": ["a", "b"], "assign": {"c1": "a", "c2": "a", "c3": "b"}}
        solution_path.write_text(json.dumps(short), encoding="utf-8")
        assert main(["check", str(instance_path), str(solution_path), "--out", str(check_path)]) == 2
        assert read_json(check_path)["feasible"] is False


def test_solve_table_and_beta():
    with tempfile.TemporaryDirectory() as tmp:
        instance_path = Path(tmp) / "e1.json"
        save_instance(example_e1(), instance_path)
        table_path = Path(tmp) / "table.txt"
        assert main(["solve", str(instance_path), "--beta", "3/4", "--table", "--out", str(table_path)]) == 0
        text = table_path.read_text(encoding="utf-8")
        assert text.startswith("stage")
        assert "I1-to-I recost" in text

        assert main(["solve", str(instance_path), "--beta", "1/3"]) == 4


def test_oracle_command():
    with tempfile.TemporaryDirectory() as tmp:
        instance_path = Path(tmp) / "e1.json"
        save_instance(example_e1(), instance_path)
        out = Path(tmp) / "opt.json"
        assert main(["oracle", str(instance_path), "--out", str(out)]) == 0
        payload = read_json(out)
        assert payload["feasible"] and payload["cost"]["exact"] == "11"
        assert payload["solution"]["open"] == ["a"]


def test_error_exit_codes():
    with tempfile.TemporaryDirectory() as tmp:
        broken = Path(tmp) / "broken.json"
        broken.write_text("{\"facilities\": []", encoding="utf-8")
        assert main(["solve", str(broken)]) == 4
        assert main(["solve", str(Path(tmp) / "missing.json")]) == 4

        infeasible = Path(tmp) / "infeasible.json"
        save_instance(line_instance([("x", 0, 1, 5)], [("c1", 0), ("c2", 1)]), infeasible)
        assert main(["solve", str(infeasible)]) == 2
        assert main(["oracle", str(infeasible), "--out", str(Path(tmp) / "o.json")]) == 2


def test_bench_is_reproducible():
    with tempfile.TemporaryDirectory() as tmp:
        first, second = Path(tmp) / "a.json", Path(tmp) / "b.json"
        assert main(["bench", "--seeds", "0:12", "--profile", "tiny", "--out", str(first)]) == 0
        assert main(["bench", "--seeds", "0:12", "--profile", "tiny", "--workers", "3", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

        report = read_json(first)
        assert [r["seed"] for r in report["rows"]] == list(range(12))
        summary = report["summary"]
        assert summary["instances"] == 12 == summary["solved"] + summary["infeasible"]
        assert summary["certificates_hold"]
        ratios = [r["ratio"]["value"] for r in report["rows"] if r.get("ratio")]
        assert summary["compared"] == len(ratios)
        if ratios:
            assert summary["max_ratio"]["value"] == max(ratios)

        empty = Path(tmp) / "empty.json"
        assert main(["bench", "--seeds", "5:5", "--out", str(empty)]) == 0
        assert read_json(empty) == {"rows": [], "summary": {
            "instances": 0, "solved": 0, "infeasible": 0, "compared": 0,
            "certificates_hold": True, "max_ratio": None, "mean_ratio": None}}

        table = Path(tmp) / "bench.txt"
        assert main(["bench", "--seeds", "3", "--profile", "tiny", "--table", "--out", str(table)]) == 0
        assert "/1 solved" in table.read_text(encoding="utf-8")

        assert main(["bench", "--seeds", "x:y"]) == 4


def test_seed_range():
    assert list(_seed_range("7")) == [7]
    assert list(_seed_range("2:5")) == [2, 3, 4]
    assert list(_seed_range("3:3")) == []


def main_tests():
    """Run all CLI tests."""
    tests = [
        test_gen_is_deterministic,
        test_solve_then_check,
        test_solve_table_and_beta,
        test_oracle_command,
        test_error_exit_codes,
        test_bench_is_reproducible,
        test_seed_range,
    ]
    print("🧪 Testing command line...")
    print("=" * 50)
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print("=" * 50)
    print(f"🎯 {len(tests) - failed}/{len(tests)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main_tests())
