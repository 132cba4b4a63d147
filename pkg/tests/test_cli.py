import json
import subprocess
import sys

import pytest

from ladic_monodromy.cli import SCHEMA_VERSION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out else None), err


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return write


def test_threshold_report(capsys):
    code, rep, _ = run_json(capsys, "threshold", "--ell", "3", "--q", "2")
    assert code == 0
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["summary"]["bound"] == "3/4" and rep["summary"]["N"] == 1
    assert rep["parameters"] == {"ell": 3, "q": 2, "surjective": False, "precision": 20}


def test_vsum_table(capsys):
    code, rep, _ = run_json(capsys, "vsum", "--ell", "3", "--q", "2", "--k", "4")
    assert code == 0
    last = rep["table"]["rows"][-1]
    assert last[3] == 2 and last[4] == "3"
    assert rep["summary"]["formula_matches_brute"]


def test_vsum_tsv(capsys):
    code, out, _ = run(capsys, "--format", "tsv", "vsum", "--ell", "3", "--q", "2", "--k", "4")
    lines = out.splitlines()
    assert lines[0] == f"#schema_version\t{SCHEMA_VERSION}"
    assert lines[-1] == "4\t1\t1\t2\t3"


def test_period_command(capsys, files):
    path = files("p.json", {"ell": 3, "precision": 6, "w": 1, "matrix": [["1", "3"], ["0", "10"]]})
    code, rep, _ = run_json(capsys, "period", "--input", path)
    assert code == 0 and rep["summary"]["period"] == 1


def test_check_rep_exit_codes(capsys, files):
    bad = files("r.json", {"ell": 3, "precision": 10, "dim": 2,
                           "generators": [[["4", "3"], ["3", "4"]]]})
    ident = files("i.json", {"ell": 3, "precision": 10, "dim": 2,
                             "generators": [[["1", "0"], ["0", "1"]]]})
    code, rep, _ = run_json(capsys, "check-rep", "--rep", bad, "--q", "2")
    assert code == 10 and rep["summary"]["classification"] == "EXCLUDED"
    code, rep, _ = run_json(capsys, "check-rep", "--rep", bad, "--q", "10")
    assert code == 0 and rep["summary"]["classification"] == "INCONCLUSIVE"
    code, rep, _ = run_json(capsys, "check-rep", "--rep", ident, "--q", "2")
    assert code == 0 and rep["summary"]["classification"] == "UNIPOTENT"


def test_input_errors_exit_two(capsys, files):
    broken = files("b.json", '{"ell": 3,\n "precision": 10\n "dim": 2}')
    code, _, err = run(capsys, "check-rep", "--rep", broken, "--q", "2")
    assert code == 2 and "line 3" in err
    missing = files("m.json", {"ell": 3, "precision": 10, "dim": 2})
    code, _, err = run(capsys, "r0", "--rep", missing)
    assert code == 2 and "generators" in err
    code, _, err = run(capsys, "threshold", "--ell", "9", "--q", "2")
    assert code == 2 and "--ell" in err
    code, _, err = run(capsys, "r0", "--rep", "/nonexistent.json")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["threshold"])
    assert exc.value.code == 2


def test_precision_exhaustion_exits_three(capsys):
    code, _, err = run(capsys, "threshold", "--ell", "3", "--q", "28", "--precision", "3")
    assert code == 3 and "precision" in err


def test_eigenlift_and_canonical_path(capsys, files):
    code, rep, _ = run_json(capsys, "eigenlift", "--ell", "3", "--q", "2", "--K", "4",
                            "--grades", "1,1")
    assert code == 0 and rep["summary"]["passed"]
    code, rep, _ = run_json(capsys, "canonical-path", "--ell", "3", "--q", "4", "--K", "6")
    rows = {r[0]: r[1] for r in rep["table"]["rows"]}
    assert rows[2] == 1 and rows[4] == 4
    sigma = files("s.json", {"ell": 3, "precision": 20, "degree_q": "2",
                             "generators": [{"name": "X", "grade": 1}, {"name": "Y", "grade": 1}],
                             "perturbations": {"X": "Y\t0\t1\n"}})
    code, _, err = run(capsys, "eigenlift", "--sigma", sigma, "--K", "3")
    assert code == 2 and "grade 1" in err


def test_r0_and_hopf(capsys, files):
    rep_path = files("t.json", {"ell": 3, "precision": 14, "dim": 2,
                                "generators": [[["1", "9"], ["0", "1"]], [["1", "0"], ["9", "1"]]]})
    code, rep, _ = run_json(capsys, "r0", "--rep", rep_path, "--S", "6")
    assert code == 0 and rep["summary"]["r0_lower"] == "2"
    code, rep, _ = run_json(capsys, "hopf-selftest", "--samples", "5", "--degree", "3")
    assert code == 0 and rep["summary"]["all_passed"]


def test_output_is_byte_deterministic(capsys):
    argv = ["--format", "tsv", "hopf-selftest", "--samples", "5", "--seed", "11", "--grades", "1,2"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ladic_monodromy", "threshold", "--ell", "2",
                           "--q", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["N"] == 3
