import csv
import io
import json

import pytest

from app.cli import main
from app.services.metrics import DENSITY_COLUMNS


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_density_at_point_json(capsys):
    code, out, _ = _run(capsys, "density", "--domain", "disk:0,0,2", "--at", "1")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["mu"] == pytest.approx(4 / 3)
    assert row["eps"] == pytest.approx(1 / 3)


def test_density_scan_csv(capsys):
    code, out, _ = _run(capsys, "density", "--domain", "ann:0.5", "--grid", "200", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == DENSITY_COLUMNS
    assert len(rows) > 10
    assert all(len(r) == len(DENSITY_COLUMNS) for r in rows)


def test_density_at_infinity_csv(capsys):
    code, out, _ = _run(capsys, "density", "--domain", "ext:2", "--at", "inf", "--format", "csv")
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert row[0] == "inf"
    assert float(row[DENSITY_COLUMNS.index("mu")]) == pytest.approx(2.0)


def test_constants_command(capsys):
    code, out, _ = _run(capsys, "constants", "--domain", "disk:0,0,2")
    assert code == 0
    report = json.loads(out)
    assert report["Ctilde"] == pytest.approx(0.4, abs=1e-8)
    assert set(report) >= {"domain", "C", "Ctilde", "Chat", "Ctilde_prime", "Chat_prime", "sigma_diam_complement", "witnesses", "budget", "closed_form_used"}
    assert "trend" not in report


def test_constants_trend_for_punctured_disk(capsys):
    code, out, err = _run(capsys, "constants", "--domain", "punct:1", "--grid", "64")
    assert code == 0
    report = json.loads(out)
    trend = [r["value"] for r in report["trend"]["d_lambda"]]
    assert len(trend) == 3
    assert trend[-1] <= trend[0]
    assert "isolated boundary point" in err


def test_perfectness_generate(capsys):
    code, out, _ = _run(capsys, "perfectness", "--generate", "cantor:4")
    assert code == 0
    report = json.loads(out)
    assert report["k_hat"] >= 0.2
    assert set(report["witness"]) == {"center", "inner", "outer"}


def test_perfectness_points_file(capsys, tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("re,im\n0,0\n0.5,0\n1,0\n", encoding="utf-8")
    code, out, _ = _run(capsys, "perfectness", "--points", str(path))
    assert code == 0
    assert json.loads(out)["label"] == "pts.csv"


def test_example1_command(capsys):
    code, out, _ = _run(capsys, "example1", "--R", "2")
    assert code == 0
    report = json.loads(out)
    assert report["passed"]
    assert all(r["abs_diff"] <= 1e-7 for r in report["rows"])


def test_verify_writes_report(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = _run(capsys, "verify", "--suite", "minda_upper", "--points", "10", "--json", str(target))
    assert code == 0
    assert json.loads(target.read_text(encoding="utf-8")) == json.loads(out)


def test_verify_is_byte_identical(capsys):
    _, first, _ = _run(capsys, "verify", "--suite", "covering", "--seed", "42", "--points", "10")
    _, second, _ = _run(capsys, "verify", "--suite", "covering", "--seed", "42", "--points", "10")
    assert first == second


def test_verify_corpus_file(capsys, tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("disk:0,0,1\next:2\n", encoding="utf-8")
    code, out, _ = _run(capsys, "verify", "--suite", "exterior_degeneration", "--corpus", str(path))
    assert code == 0
    assert json.loads(out)["corpus"] == ["disk:0.0,0.0,1.0", "ext:2.0"]


# -----------------------------------------------------------------------------
# exit codes
# -----------------------------------------------------------------------------

def test_bad_domain_is_usage_error(capsys):
    code, _, err = _run(capsys, "density", "--domain", "disk:0,0", "--at", "0")
    assert code == 2
    assert "domain  :=" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = _run(capsys, "density", "--domian", "disk:0,0,1")
    assert code == 2
    assert "domain  :=" in err


def test_missing_subcommand(capsys):
    code, _, _ = _run(capsys)
    assert code == 2


def test_point_outside_domain_is_fault(capsys):
    code, _, err = _run(capsys, "density", "--domain", "disk:0,0,1", "--at", "2")
    assert code == 1
    assert "not in" in err


def test_perfectness_needs_one_source(capsys):
    code, _, _ = _run(capsys, "perfectness", "--generate", "cantor:2", "--domain", "ext:1")
    assert code == 2


def test_unknown_suite(capsys):
    code, _, _ = _run(capsys, "verify", "--suite", "lemma7")
    assert code == 2
