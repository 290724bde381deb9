"""Figure rendering from harness CSV files."""
import csv
import io
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

import render


def parsed(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))

SUMMARY = """mode,finisher,checkpoint,min,q1,median,q3,max,mean
basic,mst,0,100.0000,101.5000,103.0000,104.5000,106.0000,103.0000
basic,mst,50,100.0000,100.5000,101.0000,102.0000,103.0000,101.2000
basic,mst,100,100.0000,100.0000,100.0000,100.0000,100.0000,100.0000
"""

RECORDS = """instance,mode,checkpoint,finisher,weight,quality,visited_vertices,ratios_recalculated,elapsed_ms
a,basic,0,mst,15,100.0000,0,0,0
a,basic,50,mst,15,100.0000,9,5,0
a,basic,100,mst,15,100.0000,14,8,0
a,basic,0,mst_plus,15,100.0000,0,0,0
a,basic,50,mst_plus,15,100.0000,9,5,0
a,basic,100,mst_plus,15,100.0000,14,8,0
a,improved,0,mst,15,100.0000,0,0,0
a,improved,50,mst,15,100.0000,21,3,0
a,improved,100,mst,15,100.0000,21,3,0
"""

HISTOGRAM = ("mode,size,count\n"
             + "".join(f"basic,{s},{c}\n" for s, c in
                       zip(list(range(2, 10)) + ["10+"], range(9, 0, -1)))
             + "".join(f"improved,{s},1\n" for s in
                       list(range(2, 10)) + ["10+"]))


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.mark.parametrize("kind,text,name", [
    ("bands", SUMMARY, "summary.csv"),
    ("work", RECORDS, "records.csv"),
    ("quality-vs-work", RECORDS, "records.csv"),
    ("histogram", HISTOGRAM, "star_sizes.csv"),
])
def test_each_kind_writes_an_image(tmp_path, kind, text, name):
    out = tmp_path / f"{kind}.png"
    code = render.main(["--kind", kind, "--in", write(tmp_path, name, text),
                        "--out", str(out)])
    assert code == 0
    assert out.stat().st_size > 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_histogram_has_one_bar_per_size_and_mode():
    fig = render.build_figure("histogram", parsed(HISTOGRAM))
    ax = fig.axes[0]
    assert len(ax.patches) == 18  # 9 sizes x 2 modes
    assert [t.get_text() for t in ax.get_xticklabels()] == \
        ["2", "3", "4", "5", "6", "7", "8", "9", "10+"]


def test_bands_one_chart_per_finisher():
    fig = render.build_figure("bands", parsed(SUMMARY))
    assert len(fig.axes) == 1
    assert fig.axes[0].get_title() == "basic / mst"


def test_empty_csv_is_an_error(tmp_path, capsys):
    out = tmp_path / "fig.png"
    code = render.main(["--kind", "bands",
                        "--in", write(tmp_path, "empty.csv", ""),
                        "--out", str(out)])
    assert code == 1
    assert "no data rows" in capsys.readouterr().err
    assert not out.exists()


def test_missing_columns_are_an_error(tmp_path, capsys):
    path = write(tmp_path, "bad.csv", "mode,checkpoint\nbasic,0\n")
    assert render.main(["--kind", "bands", "--in", path,
                        "--out", str(tmp_path / "fig.png")]) == 1
    err = capsys.readouterr().err
    assert "missing columns" in err and "finisher" in err


def test_missing_file_is_an_error(tmp_path, capsys):
    assert render.main(["--kind", "work", "--in", str(tmp_path / "nope.csv"),
                        "--out", str(tmp_path / "fig.png")]) == 1
    assert "error:" in capsys.readouterr().err


def test_unknown_kind_exits_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        render.main(["--kind", "pie", "--in", "x.csv", "--out", "y.png"])
    assert exc.value.code == 2


STP = """SECTION Graph
Nodes 4
Edges 4
E 1 2 5
E 1 3 5
E 2 4 5
E 3 4 5
END

SECTION Terminals
Terminals 4
T 1
T 2
T 3
T 4
END

EOF
"""


@pytest.mark.skipif(shutil.which("steinerkit") is None,
                    reason="experiment harness not installed")
def test_renders_harness_produced_csvs(tmp_path):
    (tmp_path / "c4.stp").write_text(STP)
    run = tmp_path / "run"
    subprocess.run(["steinerkit", "experiment", str(tmp_path / "c4.stp"),
                    "--out", str(run), "--checkpoints", "0,50,100"],
                   check=True, capture_output=True)
    subprocess.run(["steinerkit", "aggregate", str(run)],
                   check=True, capture_output=True)
    script = Path(__file__).resolve().parent.parent / "render.py"
    for kind, src in (("bands", "summary.csv"), ("work", "records.csv"),
                      ("quality-vs-work", "records.csv"),
                      ("histogram", "star_sizes.csv")):
        out = run / f"{kind}.png"
        proc = subprocess.run(
            [sys.executable, str(script), "--kind", kind,
             "--in", str(run / src), "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert out.stat().st_size > 0
