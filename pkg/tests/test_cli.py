import csv
import json

import numpy as np
import pytest

from taut import certify
from taut.cli import main
from taut.models import get_model
from taut.repbuilder import load_json


def test_list(capsys):
    assert main(["list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(certify.load_registry())
    assert any(line.startswith("so3-r3r3") for line in lines)


def test_run_writes_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["run", "--case", "so3-r3r3", "--out", str(out)]) == 0
    [doc] = json.loads(out.read_text())
    assert doc["case"] == "so3-r3r3" and doc["verdict"] == certify.CONSISTENT
    assert doc["seed"] == certify.case_seed(certify.master_seed(), "so3-r3r3")
    assert "exit 0" in capsys.readouterr().out


def test_run_seed_flag_and_env(tmp_path, monkeypatch):
    out = tmp_path / "r.csv"
    assert main(["run", "--case", "spin3-c2r3", "--seed", "5", "--out", str(out)]) == 0
    [row] = csv.DictReader(out.open())
    assert int(row["seed"]) == certify.case_seed(5, "spin3-c2r3")
    monkeypatch.setenv("TAUT_SEED", "6")
    assert main(["run", "--case", "spin3-c2r3", "--out", str(out)]) == 0
    [row] = csv.DictReader(out.open())
    assert int(row["seed"]) == certify.case_seed(6, "spin3-c2r3")


def test_unknown_case(capsys):
    assert main(["run", "--case", "nope"]) == 1
    assert main(["rep", "--dump", "nope"]) == 1
    assert main(["critical", "--case", "nope", "--q", "0"]) == 1


def test_rep_dump_round_trips(capsys):
    assert main(["rep", "--dump", "g2-r7r7"]) == 0
    rep = load_json(capsys.readouterr().out)
    assert np.allclose(rep.basis, get_model("g2-r7r7").rep.basis)


def test_critical_inventory(capsys):
    args = ["critical", "--case", "torus-t2-c3", "--point", "1; 1; 1", "--q", "1; 1; 1", "--starts", "300"]
    assert main(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count_by_dim"] == {"0": 6}


def test_critical_needs_point(capsys):
    assert main(["critical", "--case", "so3-r3r3", "--q", "e1; e1"]) == 0
    assert main(["critical", "--case", "torus-t2-c3", "--q", "1; 1; 1"]) == 1


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        main([])
