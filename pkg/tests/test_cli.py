import json

import pytest

from mvhac.cli import cli_main
from mvhac.dataset import synthetic_fixture
from mvhac.output import render_panel


@pytest.fixture
def panels(tmp_path):
    data = synthetic_fixture(1, 8, 9)
    cur, prev = tmp_path / "cur.csv", tmp_path / "prev.csv"
    cur.write_text(render_panel(data.current))
    prev.write_text(render_panel(data.previous))
    return tmp_path, str(cur), str(prev)


def test_mvhac_happy_path(panels, capsys):
    tmp, cur, prev = panels
    argv = [
        "mvhac", "--current", cur, "--previous", prev, "--reference", "Province",
        "--linkage", "average", "--features", "lq", "--epsilon", "1e-9",
        "--out", str(tmp / "report.json"), "--newick", str(tmp / "trees"), "--format", "json",
    ]
    assert cli_main(argv) == 0
    report = json.loads((tmp / "report.json").read_text())
    nonempty = [v["quadrant"] for v in report["views"] if v["members"]]
    assert sorted(p.name for p in (tmp / "trees").iterdir()) == [f"{q}.nwk" for q in nonempty]


def test_missing_previous_is_usage_error(panels, capsys):
    _, cur, _ = panels
    assert cli_main(["mvhac", "--current", cur, "--reference", "Province"]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_subcommand(capsys):
    assert cli_main(["frobnicate"]) == 2


def test_negative_cell_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("region,S1,S2\nA,-5,10\nProv,100,300\n")
    assert cli_main(["validate", "--current", str(bad), "--reference", "Prov"]) == 1
    err = capsys.readouterr().err
    assert "bad.csv" in err and "row 2" in err and "'S1'" in err


def test_validate_ok(panels, capsys):
    _, cur, prev = panels
    assert cli_main(["validate", "--current", cur, "--previous", prev, "--reference", "Province"]) == 0
    assert capsys.readouterr().out.startswith("ok:")


def test_validate_mismatch(panels, tmp_path, capsys):
    _, cur, _ = panels
    other = tmp_path / "other.csv"
    other.write_text("region,S1\nD01,1\nProvince,5\n")
    assert cli_main(["validate", "--current", cur, "--previous", str(other), "--reference", "Province"]) == 1
    assert "sector-mismatch" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert cli_main(["validate", "--current", str(tmp_path / "nope.csv"), "--reference", "P"]) == 1
    assert "nope.csv" in capsys.readouterr().err


@pytest.mark.parametrize("fmt", ["text", "csv", "json"])
def test_klassen_and_lq_subcommands(panels, fmt, capsys):
    _, cur, prev = panels
    assert cli_main(["klassen", "--current", cur, "--previous", prev, "--reference", "Province", "--sectors", "--format", fmt]) == 0
    out = capsys.readouterr().out
    assert "D01" in out
    assert cli_main(["lq", "--current", cur, "--reference", "Province", "--format", fmt]) == 0
    assert "S9" in capsys.readouterr().out


@pytest.mark.parametrize("fmt", ["text", "newick", "dot", "json"])
def test_hac_subcommand(tmp_path, fmt, capsys):
    vec = tmp_path / "v.csv"
    vec.write_text("label,x\na,0\nb,1\nc,5\n")
    assert cli_main(["hac", "--input", str(vec), "--linkage", "single", "--format", fmt, "--cut", "2"]) == 0
    out = capsys.readouterr().out
    if fmt == "newick":
        assert out.startswith("((a:1,b:1):3,c:4);")
    if fmt == "json":
        assert json.loads(out)["cut"] == [["a", "b"], ["c"]]


def test_hac_bad_cut(tmp_path, capsys):
    vec = tmp_path / "v.csv"
    vec.write_text("label,x\na,0\nb,1\n")
    assert cli_main(["hac", "--input", str(vec), "--cut", "5"]) == 1
    assert "[hac]" in capsys.readouterr().err


def test_dot_and_tables_outputs(panels):
    tmp, cur, prev = panels
    args = ["mvhac", "--current", cur, "--previous", prev, "--reference", "Province",
            "--dot", str(tmp / "dot"), "--tables", str(tmp / "tables.txt"), "--out", str(tmp / "r.json")]
    assert cli_main(args) == 0
    assert (tmp / "dot" / "Q1.dot").read_text().startswith('digraph "dendrogram" {')
    assert not (tmp / "dot" / "Q3.dot").exists()
    assert "Klassen typology" in (tmp / "tables.txt").read_text()


def test_negative_epsilon_usage(panels, capsys):
    _, cur, _ = panels
    assert cli_main(["lq", "--current", cur, "--reference", "Province", "--epsilon", "-1"]) == 2


def test_fixture_subcommand(tmp_path, capsys):
    assert cli_main(["fixture", "--seed", "1", "--out-dir", str(tmp_path)]) == 0
    data = synthetic_fixture(1, 8, 9)
    assert (tmp_path / "current.csv").read_text() == render_panel(data.current)
