"""Command line interface, both in-process and as an installed module."""
import subprocess
import sys

import pytest

from steinerkit import Instance, write_stp
from steinerkit.cli import main
from tests.instances import gadget

C4 = Instance(4, ((0, 1, 5), (0, 2, 5), (1, 3, 5), (2, 3, 5)),
              frozenset({0, 1, 2, 3}))


@pytest.fixture
def gadget_stp(tmp_path):
    path = tmp_path / "hub.stp"
    path.write_text(write_stp(gadget()))
    return str(path)


def solved_value(out: str) -> int:
    lines = out.splitlines()
    assert lines[0].startswith("VALUE ")
    return int(lines[0].split()[1])


def test_solve_every_method(gadget_stp, capsys):
    for method in ("mst", "mst_plus", "zelikovsky",
                   "zelikovsky_minus", "zelikovsky_plus"):
        assert main(["solve", gadget_stp, "--method", method]) == 0
        out = capsys.readouterr().out
        assert solved_value(out) == 5
        assert len(out.splitlines()) == 6


def test_solve_with_contraction(gadget_stp, capsys):
    assert main(["solve", gadget_stp, "--method", "mst",
                 "--contract", "inf", "--mode", "improved"]) == 0
    assert solved_value(capsys.readouterr().out) == 5
    assert main(["solve", gadget_stp, "--method", "mst_plus",
                 "--contract", "2"]) == 0
    assert solved_value(capsys.readouterr().out) == 5


def test_exact_command(gadget_stp, capsys):
    assert main(["--seed", "7", "exact", gadget_stp]) == 0
    assert solved_value(capsys.readouterr().out) == 5


def test_preprocess_command(gadget_stp, capsys):
    assert main(["preprocess", gadget_stp]) == 0
    res = capsys.readouterr()
    assert "SECTION Graph" in res.out
    assert "Nodes 1" in res.out and "Edges 0" in res.out
    assert res.err.splitlines()[0] == "rule,applications,edges_bought"
    assert "# bought weight 5;" in res.err


def test_rect_command(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("# corners\n0 0\n\n2 3\n")
    assert main(["rect", str(pts)]) == 0
    out = capsys.readouterr().out
    assert "Nodes 4" in out and "Edges 4" in out and "Terminals 2" in out
    pts.write_text("0 0\n2\n")
    assert main(["rect", str(pts)]) == 1
    assert "error: line 2" in capsys.readouterr().err


def test_experiment_and_aggregate(tmp_path, capsys):
    a = tmp_path / "a.stp"
    a.write_text(write_stp(C4))
    b = tmp_path / "b.stp"
    b.write_text(write_stp(gadget()))
    out = tmp_path / "run"
    code = main(["experiment", str(a), str(b), "--out", str(out),
                 "--checkpoints", "0,100", "--jobs", "1"])
    assert code == 0
    capsys.readouterr()
    records = (out / "records.csv").read_text()
    assert records.startswith("instance,mode,checkpoint,finisher,weight,")
    assert "a,basic,0,mst,15,100.0000" in records
    assert (out / "star_sizes.csv").read_text().startswith("mode,size,count")
    assert main(["aggregate", str(out)]) == 0
    summary = (out / "summary.csv").read_text()
    assert summary.startswith("mode,finisher,checkpoint,min,q1,median,q3,max,mean")
    assert "basic,mst,0," in summary


def test_experiment_skips_disconnected(tmp_path, capsys):
    a = tmp_path / "a.stp"
    a.write_text(write_stp(C4))
    c = tmp_path / "c.stp"
    c.write_text(write_stp(Instance(3, ((0, 1, 1),), frozenset({0, 2}))))
    out = tmp_path / "run"
    code = main(["experiment", str(a), str(c), "--out", str(out),
                 "--checkpoints", "100"])
    assert code == 1
    assert "skipping c" in capsys.readouterr().err
    lines = (out / "records.csv").read_text().splitlines()
    assert not any(line.startswith("c,") for line in lines)
    assert any(line.startswith("a,") for line in lines)


def test_experiment_rejects_duplicate_names(tmp_path, capsys):
    a = tmp_path / "a.stp"
    a.write_text(write_stp(C4))
    out = tmp_path / "run"
    code = main(["experiment", str(a), str(a), "--out", str(out)])
    assert code == 1
    assert "duplicate instance name" in capsys.readouterr().err


def test_experiment_reference_file(tmp_path, capsys):
    a = tmp_path / "a.stp"
    a.write_text(write_stp(C4))
    ref = tmp_path / "ref.csv"
    ref.write_text("instance,weight\na,10\n")
    out = tmp_path / "run"
    assert main(["experiment", str(a), "--out", str(out),
                 "--checkpoints", "100", "--reference", str(ref)]) == 0
    capsys.readouterr()
    assert "a,basic,100,mst,15,150.0000" in (out / "records.csv").read_text()


def test_missing_file_is_reported(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.stp"), "--method", "mst"]) == 1
    assert "error:" in capsys.readouterr().err


def test_bad_stp_is_reported(tmp_path, capsys):
    bad = tmp_path / "bad.stp"
    bad.write_text("SECTION Graph\nNodes 1\nEdges 0\nEND\n")
    assert main(["solve", str(bad), "--method", "mst"]) == 1
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["solve", "x.stp", "--method", "dijkstra"],
    ["solve", "x.stp", "--method", "mst", "--contract", "1"],
    ["experiment", "x.stp", "--out", "o", "--modes", "fancy"],
    ["experiment", "x.stp", "--out", "o", "--checkpoints", "a,b"],
    [],
])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    capsys.readouterr()


def test_module_entry_point(gadget_stp):
    proc = subprocess.run([sys.executable, "-m", "steinerkit",
                           "exact", gadget_stp],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("VALUE 5\n")
