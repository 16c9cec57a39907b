"""CLI behaviour and golden files.

Golden files hold "exit code, stdout, stderr" of single-threaded runs.
Regenerate with ``python3 tests/test_cli.py`` after a deliberate change.
"""

import os
import subprocess
import sys
from pathlib import Path

import pytest

from dtcrc.cli import run

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"

CASES = {
    "vertex_empty": ["vertex", "--n", "1", "--max-degree", "4"],
    "vertex_z2_operator": ["vertex", "--n", "2", "--lambda", "2", "--max-degree", "4",
                           "--method", "operator"],
    "vertex_z2_oracle": ["vertex", "--n", "2", "--lambda", "2", "--max-degree", "4",
                         "--method", "oracle"],
    "vertex_z2_schur": ["vertex", "--n", "2", "--lambda", "2", "--max-degree", "4",
                        "--method", "schur"],
    "vertex_one_leg": ["vertex", "--n", "1", "--rho-plus", "1", "--max-degree", "3"],
    "vertex_z3_json": ["vertex", "--n", "3", "--rho-plus", "2", "--rho-minus", "1",
                       "--lambda", "1,1,1", "--max-degree", "3", "--relative",
                       "--format", "json"],
    "dt_conifold": ["dt", "--diagram", "data/conifold.json", "--max-degree", "5",
                    "--novikov-degree", "2"],
    "dt_z2edge": ["dt", "--diagram", "data/z2edge.json", "--max-degree", "6",
                  "--novikov-degree", "2"],
    "dt_z2chain": ["dt", "--diagram", "data/z2chain.json", "--max-degree", "4",
                   "--novikov-degree", "2"],
    "dt_novikov_zero": ["dt", "--diagram", "data/z3edge.json", "--max-degree", "4"],
    "crc_vertex": ["crc", "vertex", "--n", "2", "--lambda", "2", "--max-degree", "6"],
    "crc_vertex_corrupt": ["crc", "vertex", "--n", "2", "--lambda", "2", "--max-degree", "6",
                           "--corrupt-prefactor"],
    "crc_global_z2": ["crc", "global", "--diagram", "data/z2edge.json", "--max-degree", "4",
                      "--novikov-degree", "2"],
    "crc_global_z3": ["crc", "global", "--diagram", "data/z3edge.json", "--max-degree", "3",
                      "--novikov-degree", "1", "--format", "json"],
    "quotient_n5": ["quotient", "--n", "5", "--lambda", "9,9,3,3,2,2,1,1"],
    "quotient_n4": ["quotient", "--n", "4", "--quotient", ";3,3;;"],
    "quotient_unbalanced": ["quotient", "--n", "2", "--lambda", "1"],
    "dt_invalid": ["dt", "--diagram", "data/bad_cy.json", "--max-degree", "2"],
}


def render(code, out, err):
    return f"exit: {code}\n--- stdout\n{out}\n--- stderr\n{err}\n"


def run_cli(argv, threads):
    env = dict(os.environ, DTCRC_THREADS=str(threads))
    p = subprocess.run([sys.executable, "-m", "dtcrc", *argv], cwd=HERE, env=env,
                       capture_output=True, text=True)
    return render(p.returncode, p.stdout.rstrip("\n"), p.stderr.rstrip("\n"))


@pytest.fixture(autouse=True)
def _in_tests_dir(monkeypatch):
    monkeypatch.chdir(HERE)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_single_thread(name):
    assert run_cli(CASES[name], 1) == (GOLDEN / f"{name}.txt").read_text()


@pytest.mark.parametrize("name", ["dt_z2edge", "dt_z2chain", "crc_global_z2", "crc_global_z3"])
def test_golden_multi_thread(name):
    assert run_cli(CASES[name], 4) == (GOLDEN / f"{name}.txt").read_text()


def test_vertex_examples():
    assert run(CASES["vertex_empty"])[:2] == (0, "1")
    assert run(CASES["vertex_z2_operator"])[1] == run(CASES["vertex_z2_oracle"])[1]
    assert run(CASES["vertex_z2_operator"])[1] == run(CASES["vertex_z2_schur"])[1]


def test_vertex_matches_library():
    from dtcrc.vertex import orbifold_vertex_operator
    code, out, _ = run(CASES["vertex_one_leg"])
    assert code == 0
    assert out == orbifold_vertex_operator((1,), (), (), 1, 3).value.to_text()


def test_dt_matches_library():
    from dtcrc.geometry import WebDiagram, dt_series
    d = WebDiagram.load("data/conifold.json")
    assert run(CASES["dt_conifold"])[1] == dt_series(d, 5, 2).to_text()
    assert run(CASES["dt_novikov_zero"])[:2] == (0, "1")


def test_crc_exit_codes():
    code, out, _ = run(CASES["crc_vertex"])
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(CASES["crc_vertex_corrupt"])
    assert code == 1 and out.startswith("FAIL") and "first mismatch" in out
    code, out, _ = run(CASES["crc_global_z2"])
    assert code == 0 and out.startswith("PASS")


def test_quotient_examples():
    assert run(CASES["quotient_n5"])[1].splitlines()[0] == "(1) | () | (2,1) | (2) | ()"
    assert run(CASES["quotient_n4"])[1].splitlines()[0] == "10,7,2,2,1,1,1"
    code, _, err = run(CASES["quotient_unbalanced"])
    assert code == 2 and "not balanced" in err


def test_invalid_diagram():
    code, _, err = run(CASES["dt_invalid"])
    assert code == 2
    assert "edge e" in err and "Calabi-Yau" in err


@pytest.mark.parametrize("argv", [
    ["vertex", "--n", "2", "--lambda", "2,3", "--max-degree", "2"],
    ["vertex", "--n", "2", "--lambda", "x", "--max-degree", "2"],
    ["quotient", "--n", "2"],
    ["dt", "--diagram", "data/missing.json", "--max-degree", "2"],
    ["crc"],
])
def test_malformed_input_exits_2(argv):
    assert run(argv)[0] == 2


if __name__ == "__main__":
    os.chdir(HERE)
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in sorted(CASES.items()):
        (GOLDEN / f"{name}.txt").write_text(run_cli(argv, 1))
        print("wrote", name)
