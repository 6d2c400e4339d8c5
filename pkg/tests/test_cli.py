import json
import shutil
import subprocess
import sys

import pytest

from cubicmoments.cli import main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def tsv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    head = lines[0].split("\t")
    return [dict(zip(head, ln.split("\t"))) for ln in lines[1:]]


def test_family_g0(tmp_path, capsys):
    code, out = run(["family", "--q", "5", "--g", "0", "--cache-dir", str(tmp_path)], capsys)
    assert code == 0
    assert tsv(out)[0]["count"] == "20"
    assert (tmp_path / "q5_g0.cmc").exists()


def test_verify_g2_exit_zero(tmp_path, capsys):
    report = tmp_path / "verify.json"
    code, out = run(["verify", "--q", "5", "--g", "2", "--cache-dir", str(tmp_path), "--out", str(report)], capsys)
    assert code == 0
    assert "# 8/8 suites passed" in out
    assert all(r["status"] == "PASS" for r in tsv(out))
    doc = json.loads(report.read_text())
    rows = doc["results"]["2"]
    assert len(rows) == 8 and all(r["ok"] for r in rows)
    assert set(doc["provenance"]) >= {r["name"] for r in rows}


@pytest.mark.parametrize("q", ["7", "4", "9", "x"])
def test_invalid_q_is_usage_error(q, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--q", q])
    assert exc.value.code == 2


def test_odd_kkappa_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["moments", "--q", "5", "--g", "0", "--kind", "mollified-second", "--k", "1",
              "--cache-dir", str(tmp_path)])
    assert exc.value.code == 2


def test_constants_json(capsys):
    code, out = run(["constants", "--q", "5"], capsys)
    assert code == 0
    r = json.loads(out)["results"]
    assert abs(r["eta"] - 1.676972) < 1e-6
    assert abs(r["S_2"] - 3967.15) < 0.01
    assert 0.76 < r["c3"] < 0.79
    assert r["first_moment_floor"] >= 0.6143


def test_section7_json(capsys):
    code, out = run(["section7"], capsys)
    r = json.loads(out)["results"]
    assert abs(r["d"] - 8.15) < 0.01


def _strip(doc):
    doc = json.loads(doc)
    doc.pop("timestamp")
    return doc


def test_rerun_identical(tmp_path, capsys):
    args = ["moments", "--q", "5", "--g", "0", "2", "--kind", "table", "--cache-dir", str(tmp_path / "c"),
            "--out", str(tmp_path / "r" / "table.json")]
    assert main(args) == 0
    first = (tmp_path / "r" / "table.json").read_text()
    cache_bytes = (tmp_path / "c" / "q5_g2.cmc").read_bytes()
    png = sorted(p.name for p in (tmp_path / "r").glob("*.png"))
    assert png
    png_bytes = [(tmp_path / "r" / n).read_bytes() for n in png]
    assert main(args) == 0
    assert _strip((tmp_path / "r" / "table.json").read_text()) == _strip(first)
    assert (tmp_path / "c" / "q5_g2.cmc").read_bytes() == cache_bytes
    assert [(tmp_path / "r" / n).read_bytes() for n in png] == png_bytes


def test_census_tsv_and_figures(tmp_path):
    out = tmp_path / "census.tsv"
    assert main(["census", "--q", "5", "--g", "2", "--format", "tsv", "--cache-dir", str(tmp_path),
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    head = lines[0].split("\t")
    assert "nonvanishing" in head and "cs_bound" in head
    row = dict(zip(head, lines[1].split("\t")))
    assert float(row["cs_bound"]) <= int(row["nonvanishing"])
    assert list(tmp_path.glob("census*.png"))


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q = 5\ng = 2  # overridden below\nkind = second\n")
    code, out = run(["moments", "--config", str(cfg), "--g", "0", "--cache-dir", str(tmp_path)], capsys)
    doc = json.loads(out)
    assert doc["results"][0]["g"] == 0
    assert doc["results"][0]["kind"] == "second"


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("speed = 11\n")
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--config", str(cfg)])
    assert exc.value.code == 2


def test_gauss_tsv(capsys):
    code, out = run(["gauss", "--q", "5", "--f", "1 0 1", "--d", "0", "1"], capsys)
    lines = out.splitlines()
    assert lines[0].split("\t") == ["f", "d", "lhs_re", "lhs_im", "main_re", "main_im", "ratio"]
    assert len(lines) == 3


def test_console_script(tmp_path):
    exe = shutil.which("cubicmoments")
    cmd = [exe] if exe else [sys.executable, "-m", "cubicmoments.cli"]
    res = subprocess.run(cmd + ["family", "--q", "5", "--g", "0", "--cache-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert tsv(res.stdout)[0]["count"] == "20"
    bad = subprocess.run(cmd + ["family", "--q", "13"], capture_output=True, text=True)
    assert bad.returncode == 2
