import json
import subprocess
import sys
from pathlib import Path

import pytest

from conserva.algebra import builtin, load_algebra, load_algebra_file
from conserva.cli import main

CORRECTED = Path(__file__).resolve().parent.parent / "corrected"


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_show_table(capsys):
    status, out, _ = run(capsys, "show", "S2")
    assert status == 0
    row = next(line for line in out.splitlines() if line.strip().startswith("z1 |"))
    assert [c.strip() for c in row.split("|")] == ["z1", "-z1", "z2", "3z3", "-3z4"]


def test_show_json_round_trip(capsys):
    status, out, _ = run(capsys, "show", "W2-conservative", "--json")
    assert status == 0
    assert load_algebra(out) == builtin("W2-conservative")


def test_show_file_and_output(capsys, tmp_path):
    target = tmp_path / "s2.json"
    status, out, _ = run(capsys, "show", str(CORRECTED / "s2.json"), "--json", "--output", str(target))
    assert status == 0 and out == ""
    assert load_algebra_file(target) == load_algebra_file(CORRECTED / "s2.json")


@pytest.mark.parametrize("argv", [
    ["show", "nosuch"],
    ["solve", "delta-derivations", "S2"],
    ["solve", "delta-derivations", "S2", "--delta", "0.5"],
    ["solve", "centroid", "S2", "--delta", "1/2"],
    ["construct", "--n", "2", "--e", "0,0"],
    ["construct", "--n", "2", "--e", "1"],
    ["verify-paper", "--algebra-dir", "/nonexistent/dir"],
])
def test_usage_errors(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == 2
    assert err.startswith("conserva: error:")


def test_bad_table_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x", "dim": 1, "basis": ["a"], "structure": [[1, 1, 1, "1/0"]]}')
    status, _, err = run(capsys, "show", str(bad))
    assert status == 2 and "zero denominator" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "nonsense", "S2"])
    assert exc.value.code == 2


def test_solve_examples(capsys):
    status, out, _ = run(capsys, "solve", "delta-derivations", "W2-conservative", "--delta", "1/2", "--json")
    doc = json.loads(out)
    assert status == 0 and doc["dim"] == 1 and doc["delta"] == "1/2"
    assert doc["basis"] == [[["1" if r == c else "0" for c in range(8)] for r in range(8)]]

    status, out, _ = run(capsys, "solve", "biderivations", "S2", "--json")
    assert json.loads(out)["dim"] == 0

    status, out, _ = run(capsys, "solve", "derivations", "W2-commutative")
    assert out.splitlines()[1] == "dim 2"

    for kind in ("biderivations-sym", "biderivations-skew", "centroid"):
        status, out, _ = run(capsys, "solve", kind, "W2-commutative", "--json")
        assert status == 0
        assert json.loads(out)["dim"] == (1 if kind == "centroid" else 0)


def test_solve_bilinear_output(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text('{"name": "z", "dim": 1, "basis": ["a"], "structure": []}')
    status, out, _ = run(capsys, "solve", "biderivations", str(path), "--json")
    assert json.loads(out)["basis"] == [[[1, 1, 1, "1"]]]
    status, out, _ = run(capsys, "solve", "biderivations", str(path))
    assert "(a, a) -> a" in out


def test_construct(capsys, tmp_path):
    status, out, _ = run(capsys, "construct", "--n", "2", "--e", "1,0", "--json")
    doc = json.loads(out)
    assert status == 0
    assert doc["algebra"]["dim"] == 8
    assert (doc["symmetric"]["dim"], doc["trace_zero"]["dim"]) == (6, 4)
    assert doc["symmetric"]["closed"] and doc["trace_zero"]["closed"]

    target = tmp_path / "w1.json"
    status, out, _ = run(capsys, "construct", "--n", "1", "--e", "1", "--output", str(target))
    assert status == 0 and "dim 1" in out.splitlines()[0]
    assert load_algebra_file(target).dim == 1


def test_default_e_is_first_basis_vector(capsys):
    _, default, _ = run(capsys, "construct", "--json")
    _, explicit, _ = run(capsys, "construct", "--n", "2", "--e", "1,0", "--json")
    assert default == explicit


def test_deterministic_output(capsys):
    first = run(capsys, "solve", "derivations", "S2", "--json")
    second = run(capsys, "solve", "derivations", "S2", "--json")
    assert first == second


def test_verify_paper_default(paper_run):
    status, report = paper_run
    assert status == 0
    assert any(c["status"] == "discrepancy-flag" for c in report["claims"])


def test_verify_paper_on_corrected_tables(capsys):
    status, out, _ = run(capsys, "verify-paper", "--algebra-dir", str(CORRECTED))
    assert status == 0
    assert out.splitlines()[-1].startswith(f"{out.count('[pass]')} pass, 0 discrepancy-flag, 0 fail")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "conserva.cli", "show", "S2", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert load_algebra(proc.stdout) == builtin("S2")
