import json
import subprocess
import sys

import pytest

from bdtrees.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count(capsys):
    assert run(capsys, "count", "--kind", "free", "--delta", "4", "--n", "8")[:2] == (0, "18\n")
    code, out, _ = run(capsys, "count", "--kind", "free", "--delta", "4", "--n", "8", "--method", "enum")
    assert out == "18\n"
    code, out, _ = run(capsys, "count", "--delta", "4", "--n-range", "1:5", "--format", "csv")
    assert out.splitlines() == ["n,kind,delta,count", "1,free,4,1", "2,free,4,1", "3,free,4,1",
                                "4,free,4,2", "5,free,4,3"]


def test_x0(capsys):
    code, out, _ = run(capsys, "x0", "--delta", "4")
    assert code == 0
    lines = dict(line.split(" = ") for line in out.splitlines())
    assert float(lines["x0"]) == pytest.approx(0.3551817, abs=5e-6)
    assert float(lines["p(x0)"]) == pytest.approx(1.117421, abs=5e-5)


def test_mu(capsys):
    code, out, _ = run(capsys, "mu", "--delta", "4", "--subtree", "")
    assert code == 0 and out.startswith("mu = 1.000000")
    code, out, _ = run(capsys, "mu", "--delta", "4", "--subtree", "0", "--format", "json")
    assert json.loads(out)[0]["mu"] == pytest.approx(1.0, abs=1e-3)


def test_dist_both_methods_agree(capsys):
    args = ["dist", "--delta", "4", "--n-range", "1:9", "--subtree", "0 1 2", "--format", "csv"]
    _, enum_out, _ = run(capsys, *args)
    _, gf_out, _ = run(capsys, *args, "--method", "gf")
    assert enum_out == gf_out
    assert enum_out.splitlines()[0] == "n,delta,subtree,k,count"


def test_estrada_outputs(tmp_path, capsys):
    out = tmp_path / "survey.csv"
    code, text, _ = run(capsys, "estrada", "--delta", "4", "--n", "6", "--K", "2", "--output", str(out),
                        "--plot")
    assert code == 0 and "EE~D" in text
    assert out.read_text().splitlines()[0] == "tree,n,D,EE,M_2,M_4"
    assert (tmp_path / "survey_n6.svg").exists()


def test_deterministic_output(tmp_path, capsys):
    paths = [tmp_path / f"r{i}.json" for i in range(2)]
    for p in paths:
        run(capsys, "dist", "--delta", "4", "--n", "8", "--subtree", "0 0 0", "--output", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert json.loads(paths[0].read_text())


def test_exit_codes(capsys):
    assert run(capsys, "count", "--delta", "1", "--n", "4")[0] == 1
    assert run(capsys, "count", "--delta", "4")[0] == 1
    assert run(capsys, "mu", "--delta", "4", "--subtree", "0 5")[0] == 1
    assert run(capsys, "x0", "--delta", "4", "--tol", "-1")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["count", "--delta", "four"])
    assert exc.value.code == 1
    code, _, err = run(capsys, "mu", "--delta", "4", "--subtree", "0 1 2 3 4 5 6 7")
    assert code == 3 and "delta=4" in err
    assert run(capsys, "verify", "--suite", "nonsense")[0] == 1


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "pdz")
    assert code == 0 and out.startswith("[PASS]")


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "bdtrees.cli", "count", "--delta", "4", "--n", "8"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == "18\n"
