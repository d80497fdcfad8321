import math
import subprocess
import sys

import numpy as np
import pytest

from powerlabel.cli import main
from powerlabel.graph import Graph, read_edge_list, write_edge_list
from powerlabel.labeling import load_label_dump
from powerlabel.powerlaw import constants
from powerlabel.report import read_reports


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as e:
        code = e.code
    out, err = capsys.readouterr()
    return code, out, err


def fields(out):
    return dict(line.split(": ", 1) for line in out.splitlines() if ": " in line)


@pytest.fixture
def triangle(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("1 2\n2 3\n3 1\n")
    return p


@pytest.fixture
def edgeless(tmp_path):
    p = tmp_path / "none.txt"
    p.write_text("1 1\n2 2\n3 3\n4 4\n")  # self-loops only: four isolated vertices
    return p


def test_fit_triangle(capsys, triangle):
    code, out, _ = run(capsys, "fit", str(triangle))
    f = fields(out)
    assert code == 0
    assert (f["n"], f["m"], f["max_degree"]) == ("3", "3", "2")
    assert float(f["alpha"]) == pytest.approx(1 + 3 / (3 * math.log(4)), abs=1e-4)


def test_fit_empty_file(capsys, tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("")
    code, _, err = run(capsys, "fit", str(p))
    assert code == 1 and "n=0" in err


def test_fit_missing_and_malformed(capsys, tmp_path):
    code, _, err = run(capsys, "fit", str(tmp_path / "nope.txt"))
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\nfoo bar\n")
    code, _, err = run(capsys, "fit", str(bad))
    assert code == 1 and "line 2" in err


def test_label_threshold_one_on_edgeless(capsys, edgeless, tmp_path):
    dump = tmp_path / "labels.txt"
    code, out, _ = run(capsys, "label", str(edgeless), "--threshold", "1", "--out", str(dump))
    assert code == 0
    header, rows = load_label_dump(open(dump))
    assert header["idbits"] == "3"
    assert [lab.length for _, lab in rows] == [4] * 4
    assert fields(out)["max_bits"] == "4"


def test_label_invalid_threshold_is_usage_error(capsys, triangle):
    code, _, err = run(capsys, "label", str(triangle), "--threshold", "lots")
    assert code == 2 and "invalid threshold" in err
    code, _, _ = run(capsys, "label", str(triangle), "--threshold", "0")
    assert code == 2


def test_label_predicted_uses_alpha_flag(capsys, triangle):
    code, out, _ = run(capsys, "label", str(triangle), "--alpha", "2.5", "--mode", "bitstring")
    f = fields(out)
    assert code == 0 and f["alpha"] == "2.5000" and f["threshold"] == "2"
    # all fat at threshold 2: 1 + 2 + 3 bits
    assert f["max_bits"] == "6" and f["fat"] == "3"


def test_label_output_is_deterministic(capsys, tmp_path):
    g = tmp_path / "g.txt"
    run(capsys, "generate", "--kind", "powerlaw", "--n", "3000", "--alpha", "2.3", "--seed", "5",
        "--out", str(g))
    for name in ("a.txt", "b.txt"):
        run(capsys, "label", str(g), "--threshold", "sparse", "--out", str(tmp_path / name))
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()


def test_sweep_csv_and_trailer(capsys, tmp_path, triangle):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", str(triangle), "--alpha", "2.5", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0
    assert lines[0] == "threshold,max_thin_bits,max_fat_bits,max_bits"
    # idbits 2; t=1,2: all fat, 2 fat neighbors each (CONCAT) -> 7; t=3: all thin -> 7
    assert lines[1:4] == ["1,0,7,7", "2,0,7,7", "3,7,0,7"]
    assert lines[4] == ("# empirical_threshold=1,empirical_bits=7,"
                        "predicted_threshold=2,predicted_bits=7")


def test_sweep_columns_monotone(capsys, tmp_path):
    g = tmp_path / "g.txt"
    run(capsys, "generate", "--kind", "ba", "--n", "2000", "--m", "3", "--seed", "1", "--out", str(g))
    out = tmp_path / "s.csv"
    run(capsys, "sweep", str(g), "--out", str(out))
    rows = np.array([[int(x) for x in l.split(",")] for l in out.read_text().splitlines()[1:-1]])
    assert np.all(np.diff(rows[:, 1]) >= 0) and np.all(np.diff(rows[:, 2]) <= 0)


def test_generate_is_byte_identical(capsys, tmp_path):
    for name in ("x.txt", "y.txt"):
        code, out, _ = run(capsys, "generate", "--kind", "powerlaw", "--n", "5000", "--alpha", "2.4",
                           "--seed", "3", "--out", str(tmp_path / name))
        assert code == 0 and fields(out)["n"] == "5000"
    assert (tmp_path / "x.txt").read_bytes() == (tmp_path / "y.txt").read_bytes()


def test_generate_ba_writes_log(capsys, tmp_path):
    code, _, _ = run(capsys, "generate", "--kind", "ba", "--n", "50", "--m", "1", "--seed", "0",
                     "--out", str(tmp_path / "ba.txt"), "--log", str(tmp_path / "ba.log"))
    assert code == 0
    g = read_edge_list(tmp_path / "ba.txt")
    assert g.m == 49
    assert len((tmp_path / "ba.log").read_text().splitlines()) == 48


@pytest.mark.parametrize("argv", [
    ["--kind", "powerlaw", "--n", "100"],
    ["--kind", "powerlaw", "--n", "100", "--alpha", "2.5", "--m", "2"],
    ["--kind", "ba", "--n", "100", "--alpha", "2.5"],
    ["--kind", "ba", "--n", "3", "--m", "2"],
])
def test_generate_inconsistent_flags(capsys, argv):
    code, _, _ = run(capsys, "generate", *argv)
    assert code == 2


def test_verify_exit_codes(capsys, triangle, tmp_path):
    code, out, _ = run(capsys, "verify", str(triangle), "--alpha", "2.5", "--family", "proper")
    assert code == 2 and "condition 2 at 2" in out
    code, out, _ = run(capsys, "verify", str(triangle), "--alpha", "2.5", "--family", "palpha")
    assert code == 0 and out.strip() == "member"
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    code, out, _ = run(capsys, "verify", str(empty), "--alpha", "2.5", "--family", "proper")
    assert code == 0 and "vacuous" in out
    code, _, _ = run(capsys, "verify", str(tmp_path / "missing"), "--alpha", "2.5", "--family", "proper")
    assert code == 1


def test_embed_and_verify(capsys, tmp_path):
    n, a = 20_000, 2.5
    i1 = constants(n, a).i1
    h = tmp_path / "h.txt"
    with open(h, "w") as f:
        write_edge_list(Graph.complete(i1), f)
    code, _, err = run(capsys, "embed", "--h-input", str(h), "--n", str(n), "--alpha", str(a),
                       "--out-graph", str(tmp_path / "g.txt"), "--out-mapping", str(tmp_path / "map.txt"))
    assert code == 0 and "verified" in err
    code, _, _ = run(capsys, "verify", str(tmp_path / "g.txt"), "--alpha", str(a), "--family", "proper")
    assert code == 0
    mapping = [tuple(map(int, l.split())) for l in (tmp_path / "map.txt").read_text().splitlines()]
    assert len(mapping) == i1 and len({g for _, g in mapping}) == i1


def test_embed_empty_h_via_padding(capsys, tmp_path):
    n, a = 20_000, 2.8
    h = tmp_path / "h.txt"
    h.write_text("")
    code, _, _ = run(capsys, "embed", "--h-input", str(h), "--h-n", str(constants(n, a).i1),
                     "--n", str(n), "--alpha", str(a),
                     "--out-graph", str(tmp_path / "g.txt"), "--out-mapping", str(tmp_path / "m.txt"))
    assert code == 0


def test_embed_i1_mismatch_and_infeasible(capsys, tmp_path, triangle):
    code, _, err = run(capsys, "embed", "--h-input", str(triangle), "--n", "20000", "--alpha", "2.5",
                       "--out-graph", str(tmp_path / "g"), "--out-mapping", str(tmp_path / "m"))
    assert code == 2 and "i1" in err
    code, _, err = run(capsys, "embed", "--h-input", str(triangle), "--n", "1000", "--alpha", "2.0",
                       "--out-graph", str(tmp_path / "g"), "--out-mapping", str(tmp_path / "m"))
    assert code in (2, 3)


def test_report_rows(capsys, tmp_path, triangle, edgeless):
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "report", str(triangle), str(edgeless), "powerlaw:300000:2.2:0",
                     "--alpha", "tri=2.5", "--out", str(out))
    rows = read_reports(open(out))
    assert code == 0
    assert [r["dataset"] for r in rows] == ["tri", "none", "powerlaw-n300000-a2.2-s0"]
    assert rows[0]["alpha"] == "2.5000" and rows[0]["fitted_alpha"] != ""
    assert rows[1]["m"] == "0" and rows[1]["empirical_bits"] == "4" and rows[1]["alpha"] == ""
    assert rows[1]["aktz_bits"] == "8"
    assert rows[2]["aktz_bits"] == "150006"
    for r in rows:
        if r["predicted_bits"]:
            assert int(r["empirical_bits"]) <= int(r["predicted_bits"])


def test_report_keeps_going_after_failure(capsys, tmp_path, triangle):
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "report", str(tmp_path / "missing.txt"), str(triangle), "--out", str(out))
    rows = read_reports(open(out))
    assert code == 1
    assert rows[0]["error"] and not rows[1]["error"]


def test_output_dir_env(capsys, tmp_path, triangle, monkeypatch):
    monkeypatch.setenv("POWERLABEL_OUTPUT_DIR", str(tmp_path / "outdir"))
    code, _, _ = run(capsys, "sweep", str(triangle), "--out", "s.csv")
    assert code == 0 and (tmp_path / "outdir" / "s.csv").exists()
    code, _, _ = run(capsys, "label", str(triangle), "--threshold", "2")
    assert (tmp_path / "outdir" / "labels.txt").exists()


def test_module_entry_point(triangle):
    r = subprocess.run([sys.executable, "-m", "powerlabel", "fit", str(triangle)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "alpha: 1.7213" in r.stdout
