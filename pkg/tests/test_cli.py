import csv
import json

import pytest

from colormatch.cli import main


def test_analytic(tmp_path, capsys):
    out = tmp_path / "a.csv"
    assert main(["analytic", "--dmin", "4", "--dmax", "8", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert [int(r["correlated"]) for r in rows] == [20, 168, 1340]


def test_lattice(capsys, tmp_path):
    assert main(["lattice", "--d", "4", "--out", str(tmp_path / "lat.json")]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["qubits"] == 20 and all(info["invariants"].values())
    assert json.load(open(tmp_path / "lat.json"))["distance"] == 4


def test_config_errors_exit_2(capsys):
    assert main(["lattice", "--d", "5"]) == 2
    assert main(["sample", "--d", "4", "--p", "1.5", "--shots", "10"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--d", "4"])
    assert exc.value.code == 2


def test_capacity_exit_3(capsys):
    assert main(["enumerate", "--d", "16", "--repeats", "1"]) == 3


def test_internal_exit_4(capsys, monkeypatch):
    import colormatch.cli as cli

    monkeypatch.setattr(cli, "validate", lambda lat, distance_check_max: {"rank": False})
    assert main(["lattice", "--d", "4"]) == 4


def test_sample_and_fit(tmp_path, capsys):
    out = tmp_path / "s.csv"
    rc = main(["sample", "--d", "4", "6", "8", "--p", "0.06", "0.08", "0.10", "0.12", "0.14",
               "--shots", "300", "--logical", "blue", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 15
    assert set(rows[0]) == {"family", "decoder", "d", "p", "rounds", "shots", "fail_g", "fail_b",
                            "fail_any", "seed"}
    meta = json.load(open(str(out) + ".meta.json"))
    assert meta["seed"] == 0 and "version" in meta
    # too few shots for a clean crossing: either a fit or a domain error
    rc = main(["fit", "--in", str(out), "--which", "fail_b", "--bootstrap", "5",
               "--out", str(tmp_path / "fit.json")])
    assert rc in (0, 2)


def test_enumerate_and_decode(capsys):
    assert main(["enumerate", "--d", "4", "--decoder", "restricted", "--repeats", "8"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["configurations"] == 190 and res["decoder"] == "restricted"
    assert main(["decode", "--d", "6", "--errors", "3", "--trace"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["correction"] == [3] and "stage1" in res["trace"]
    assert main(["decode", "--d", "6", "--errors", "999"]) == 2


def test_table(tmp_path, capsys):
    out = tmp_path / "counts.csv"
    assert main(["enumerate", "--table", "--d", "6", "--repeats", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert rows[0]["pattern"] == "{D,S,N}" and rows[0]["N_prime"] == "0"


def test_lowrate(capsys):
    assert main(["lowrate", "--d", "4", "--decoder", "restricted", "--p", "1e-4", "1e-3",
                 "--shots", "500"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("p,p_fail")
