"""
Tests for the quadpair command line: commands, reports and exit codes.
"""

import os
import sys
import json
import tempfile

# Add the project root to the path
sys.path.insert(0, os.path.dirname(__file__))

from main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, run

SAMPLE = os.path.join(os.path.dirname(__file__), "objects.qp")


def test_object_commands():
    """Test parse, print, tensor, phi and eval on the sample file."""
    print("Testing object commands...")

    assert run(["parse", SAMPLE]) == EXIT_OK
    assert run(["print", SAMPLE]) == EXIT_OK
    assert run(["tensor", SAMPLE, "X", "Y"]) == EXIT_OK
    assert run(["tensor", SAMPLE, "U", "Zx"]) == EXIT_OK
    assert run(["phi", SAMPLE, "swap"]) == EXIT_OK
    assert run(["eval", SAMPLE, "X", "a + b - a", "--apply", "swap"]) == EXIT_OK

    print("✅ Object commands succeed")


def test_output_file():
    """Test that --out receives the printed text."""
    print("Testing --out...")

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "tensor.txt")
        assert run(["--out", out, "tensor", SAMPLE, "X", "Y"]) == EXIT_OK
        with open(out, encoding="utf-8") as f:
            text = f.read()
        assert "[squaregroup X_Y]" in text
        assert "X⊙Y" in text

    print("✅ Output written to --out")


def test_sign_group_commands():
    """Test groupring and twisted on built-in sign groups."""
    print("Testing sign group commands...")

    assert run(["groupring", "trivial"]) == EXIT_OK
    assert run(["twisted", "Z4-", "V4+"]) == EXIT_OK
    assert run(["twisted", "SS", "S", "--file", SAMPLE]) == EXIT_OK
    assert run(["groupring", "Z8"]) == EXIT_INPUT

    print("✅ Sign group commands succeed")


def test_snf_command():
    """Test the Smith normal form command and bad matrices."""
    print("Testing snf...")

    assert run(["snf", "2 4 4; -6 6 12; 10 -4 -16"]) == EXIT_OK
    assert run(["snf", "1 x"]) == EXIT_INPUT
    assert run(["snf", "1 2; 3"]) == EXIT_INPUT

    print("✅ snf handles valid and invalid matrices")


def test_verify_writes_json_report():
    """Test verify clifford-K and the JSON report it writes."""
    print("Testing verify with a JSON report...")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "k.json")
        assert run(["--json", path, "verify", "clifford-K"]) == EXIT_OK
        with open(path) as f:
            report = json.load(f)

    assert report["suite"] == "clifford-K"
    assert report["schema_version"] == "1.0"
    assert report["checks"]
    assert all(c["passed"] for c in report["checks"])
    assert all(isinstance(v, str) for c in report["checks"] for v in c["witness"].values())

    print("✅ Report written and all checks passed")


def test_clifford_and_hg_commands():
    """Test the clifford and hg subcommands."""
    print("Testing clifford and hg commands...")

    with tempfile.TemporaryDirectory() as tmp:
        assert run(["clifford", "eval", "e1*e2 + e2*e1"]) == EXIT_OK
        assert run(["clifford", "eval", "e3", "--dim", "2"]) == EXIT_INPUT
        assert run(["--max-total", "3", "--json", os.path.join(tmp, "l.json"), "clifford", "verify-L"]) == EXIT_OK
        assert run(["--samples", "3", "--seed", "1", "--json", os.path.join(tmp, "hg.json"),
                    "hg", "check", "--functional", "K"]) == EXIT_OK
        assert run(["--samples", "20", "--seed", "0", "--json", os.path.join(tmp, "broken.json"),
                    "hg", "check", "--functional", "broken"]) == EXIT_FAILED

    print("✅ clifford and hg commands report pass and fail correctly")


def test_flags_after_subcommand():
    """Test that --seed, --samples, --max-total and --json are accepted after the subcommand."""
    print("Testing flags after the subcommand...")

    with tempfile.TemporaryDirectory() as tmp:
        l_path = os.path.join(tmp, "l.json")
        assert run(["clifford", "verify-L", "--max-total", "3", "--json", l_path]) == EXIT_OK
        with open(l_path) as f:
            assert json.load(f)["max_total"] == 3

        hg_path = os.path.join(tmp, "hg.json")
        assert run(["hg", "check", "--functional", "K", "--samples", "2", "--seed", "1", "--json", hg_path]) == EXIT_OK
        with open(hg_path) as f:
            report = json.load(f)
        assert (report["samples"], report["seed"]) == (2, 1)

        # a flag given only before the subcommand is kept
        before = os.path.join(tmp, "before.json")
        assert run(["--seed", "5", "hg", "check", "--samples", "2", "--json", before]) == EXIT_OK
        with open(before) as f:
            assert json.load(f)["seed"] == 5

    print("✅ Shared flags work on both sides of the subcommand")


def test_odd_l_reports_pointed_deviation():
    """Test that hg check on L_1,1 reports laws (1) and (2) as an expected deviation."""
    print("Testing hg check on L_1,1...")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "l11.json")
        assert run(["hg", "check", "--functional", "L", "--n", "1", "--m", "1",
                    "--samples", "3", "--seed", "0", "--json", path]) == EXIT_OK
        with open(path) as f:
            names = [c["name"] for c in json.load(f)["checks"]]

    assert "L_1,1 deviates from laws (1) and (2) since nm is odd" in names
    assert "L_1,1 satisfies law (3)" in names
    assert "L_1,1 satisfies law (1)" not in names

    print("✅ The deviation is reported as its own check")


def test_verify_all_suites():
    """Test that every named suite passes with the shipped configuration."""
    print("Testing verify all...")

    config = os.path.join(os.path.dirname(__file__), "config.json")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "all.json")
        assert run(["--config", config, "verify", "all", "--json", path]) == EXIT_OK
        with open(path) as f:
            report = json.load(f)

    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert not failed, f"failing checks: {failed}"
    assert "[sign] Sym⋉(3) has order 12" in [c["name"] for c in report["checks"]]
    assert "[tracks] cylinder correspondence round trips" in [c["name"] for c in report["checks"]]

    print("✅ All suites pass")


def test_input_errors_exit_2():
    """Test the exit code of missing files, unknown suites and bad objects."""
    print("Testing input errors...")

    with tempfile.TemporaryDirectory() as tmp:
        missing = os.path.join(tmp, "missing.qp")
        assert run(["parse", missing]) == EXIT_INPUT
        assert run(["--config", os.path.join(tmp, "none.json"), "snf", "1"]) == EXIT_INPUT
        assert run(["verify", "no-such-suite"]) == EXIT_INPUT
        assert run(["tensor", SAMPLE, "X", "U"]) == EXIT_INPUT
        assert run(["phi", SAMPLE, "X"]) == EXIT_INPUT

        broken = os.path.join(tmp, "broken.qp")
        with open(broken, "w", encoding="utf-8") as f:
            f.write("[squaregroup X]\nznil: a\n[morphism f]\nsource: X\ntarget: X\nimages: a -> a + [b\n")
        assert run(["parse", broken]) == EXIT_INPUT

    print("✅ Input errors exit with status 2")


def test_size_guard_from_environment():
    """Test that QUADPAIR_SIZE_GUARD stops oversized tensor products."""
    print("Testing the size guard...")

    previous = os.environ.get("QUADPAIR_SIZE_GUARD")
    os.environ["QUADPAIR_SIZE_GUARD"] = "1"
    try:
        assert run(["tensor", SAMPLE, "X", "Y"]) == EXIT_INPUT
    finally:
        if previous is None:
            del os.environ["QUADPAIR_SIZE_GUARD"]
        else:
            os.environ["QUADPAIR_SIZE_GUARD"] = previous

    print("✅ Oversized constructions are rejected")


def run_all_tests():
    """Run all tests."""
    print("\n" + "="*60)
    print("Running Command Line Tests")
    print("="*60 + "\n")

    tests = [
        test_object_commands,
        test_output_file,
        test_sign_group_commands,
        test_snf_command,
        test_verify_writes_json_report,
        test_clifford_and_hg_commands,
        test_flags_after_subcommand,
        test_odd_l_reports_pointed_deviation,
        test_verify_all_suites,
        test_input_errors_exit_2,
        test_size_guard_from_environment,
    ]

    failed = []

    for test in tests:
        try:
            test()
        except Exception as e:
            print(f"❌ {test.__name__} failed: {str(e)}")
            failed.append(test.__name__)

    print("\n" + "="*60)
    if not failed:
        print("✅ All tests passed!")
    else:
        print(f"❌ {len(failed)} test(s) failed:")
        for test_name in failed:
            print(f"  - {test_name}")
    print("="*60 + "\n")

    return len(failed) == 0


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
