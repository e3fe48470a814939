import csv
import io
import json
import subprocess
import sys

import pytest

from fieldrat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def payload(text):
    doc = json.loads(text)
    assert doc["schema_version"] == 1
    return doc["result"]


def test_weil_enum(capsys):
    code, out, _ = run(capsys, "weil-enum", "--q", "2", "--weight", "1", "--degree", "2")
    assert code == 0
    res = payload(out)
    assert res["count"] == 6 and len(res["polynomials"]) == 6


def test_weil_enum_empty(capsys):
    code, out, _ = run(capsys, "weil-enum", "--q", "2", "--weight", "1", "--degree", "1")
    assert code == 0 and payload(out)["polynomials"] == []


def test_weil_enum_invalid(capsys):
    code, out, err = run(capsys, "weil-enum", "--q", "0", "--weight", "1", "--degree", "2")
    assert code == 2 and out == "" and "error" in err


def test_weil_check_and_count(capsys):
    code, out, _ = run(capsys, "weil-check", "--q", "2", "--coeffs", "2,-2,1")
    assert code == 0 and payload(out)["weil"] is True
    code, out, _ = run(capsys, "weil-check", "--q", "2", "--coeffs", "2,-3,1")
    assert payload(out)["weil"] is False and payload(out)["stage"] == "sturm"
    code, out, _ = run(capsys, "weil-count", "--q", "2", "--dmax", "2")
    assert payload(out)["cumulative"]["2"] == 6


def test_bounds(capsys):
    _, out, _ = run(capsys, "bounds", "depth", "--n", "1", "--A", "1", "--p", "5", "--eK", "1", "--method", "v1")
    assert payload(out)["depth"] == "1/2"
    _, out, _ = run(capsys, "bounds", "lcm-phi", "--B", "2")
    assert payload(out)["lcm"] == "12"
    _, out, _ = run(capsys, "bounds", "cyclotomic", "--n", "2", "--N", "8")
    res = payload(out)
    assert res["ratio"] == "1" and res["verdict"] == "<= n^n"
    code, _, _ = run(capsys, "bounds", "depth", "--n", "1", "--A", "1", "--p", "4")
    assert code == 2


def test_vaaler(capsys, tmp_path):
    path = tmp_path / "samples.csv"
    _, out, _ = run(capsys, "vaaler", "--interval", "0,0.5", "--kappa", "10", "--emit-csv", str(path))
    res = payload(out)
    assert res["mean_gap"] == "2/11" and abs(res["mean_gap_float"] - 0.181818) < 1e-6
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["x", "minorant", "indicator", "majorant"] and len(rows) == 513
    _, out, _ = run(capsys, "vaaler", "--interval", "0,0", "--kappa", "9")
    assert payload(out)["majorant_mean"] == "1/5"


def test_vaaler_kappa_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["vaaler", "--interval", "0,0.5", "--kappa", "0"])
    assert exc.value.code == 2


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--sizes", "100,1000,10000", "--q", "2", "--k", "2", "--A", "1", "--seed", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3 and all(r["schema_version"] == "1" for r in rows)
    ups = [float(r["upper"]) for r in rows]
    assert ups[0] > ups[1] > ups[2]
    _, again, _ = run(capsys, "simulate", "--sizes", "100,1000,10000", "--q", "2", "--k", "2", "--A", "1", "--seed", "3")
    assert again == out


def test_simulate_density_file(capsys, tmp_path):
    path = tmp_path / "density.json"
    path.write_text(json.dumps([[[0, 1], [0.5, 2], [1, 1]]]))
    code, out, _ = run(capsys, "--format", "json", "simulate", "--density", str(path), "--sizes", "100,200")
    assert code == 0 and payload(out)["density"]["tag"] == "product"
    code, _, _ = run(capsys, "simulate", "--density", str(tmp_path / "missing.json"))
    assert code == 2


def test_simulate_empty_set(capsys, monkeypatch):
    import fieldrat.cli as cli
    import fieldrat.plancherel as pl

    monkeypatch.setattr(pl, "trace_points", lambda q, k, A: [])
    monkeypatch.setattr(cli, "trace_points", lambda q, k, A: [])
    _, out, _ = run(capsys, "--format", "json", "simulate", "--sizes", "100,200")
    res = payload(out)
    assert res["empty_admissible_set"] is True
    assert all(r["upper"] == 0 for r in res["rows"])


def test_genus(capsys):
    _, out, _ = run(capsys, "genus", "lp", "--q", "3", "--angles", "0.5pi", "--nmax", "4")
    assert payload(out)["optimum"] == "41/9"
    _, out, _ = run(capsys, "genus", "fermat", "--p", "3", "--r", "1")
    res = payload(out)
    assert res["genus"] == 3 and res["maximal"] is True
    _, out, _ = run(capsys, "genus", "dejong", "--q", "2", "--d", "1")
    assert payload(out)["P1_product"] == "120"
    _, out, _ = run(capsys, "genus", "ehr", "--q", "2", "--s", "1")
    assert payload(out)["log"] == "natural"
    code, _, _ = run(capsys, "genus", "madan", "--g", "2")
    assert code == 2


def test_csv_format_key_value(capsys):
    _, out, _ = run(capsys, "--format", "csv", "bounds", "lcm-phi", "--B", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["schema_version", "key", "value"]
    assert ["1", "lcm", "12"] in rows


def test_manifest_and_replay(capsys, tmp_path):
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "--out", str(out), "genus", "lp", "--q", "3", "--angles", "0.5pi", "--nmax", "4")
    assert code == 0
    mpath = tmp_path / "out.json.manifest.json"
    m = json.loads(mpath.read_text())
    assert m["subcommand"] == "genus" and m["parameters"]["q"] == 3
    code, text, _ = run(capsys, "replay", str(mpath))
    assert code == 0 and json.loads(text)["identical"] is True
    m["output_sha256"] = "0" * 64
    mpath.write_text(json.dumps(m))
    code, _, _ = run(capsys, "replay", str(mpath))
    assert code == 3


def test_manifest_on_stderr(capsys):
    _, _, err = run(capsys, "bounds", "lcm-phi", "--B", "3")
    m = json.loads(err)
    assert m["tool"] == "fieldrat" and len(m["output_sha256"]) == 64


def test_simulate_replay_with_seed(capsys, tmp_path):
    mpath = tmp_path / "sim.manifest.json"
    run(capsys, "--manifest", str(mpath), "simulate", "--sizes", "100,1000", "--seed", "11")
    assert json.loads(mpath.read_text())["seed"] == 11
    code, _, _ = run(capsys, "replay", str(mpath))
    assert code == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fieldrat", "bounds", "lcm-phi", "--B", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["lcm"] == "12"
