import io
import json

import pytest

from pathsquare import cli
from pathsquare.formulas import formula_row, table1_polynomials
from pathsquare.graph import Graph, graph6_encode
from pathsquare.patterns import PatternId, build
from pathsquare.search import SearchSpec, exhaustive_max


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_table_csv(capsys):
    code, out, _ = run(capsys, ["table", "--from", "11", "--to", "17"])
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 8
    assert lines[0] == "n,t2,f,g,ex_edges_p62,ex_tri_p62,ex_tri_p52,ex_edges_tp2,tri_tp2_bound"
    for line in lines[1:]:
        n, t2, f, g = map(int, line.split(",")[:4])
        assert (t2, f, g) == table1_polynomials(n)


def test_table_json(capsys):
    code, out, _ = run(capsys, ["--json", "table", "--from", "6", "--to", "7"])
    assert json.loads(out) == [formula_row(6).as_dict(), formula_row(7).as_dict()]
    code, out2, _ = run(capsys, ["table", "--from", "6", "--to", "7", "--json"])
    assert out2 == out


def test_verify_line(capsys):
    code, out, _ = run(capsys, ["--no-cache", "verify", "ex-tri-p62", "--from", "11", "--to", "11"])
    assert code == 0
    assert out.strip() == "n=11: Verified (32), extremal: {H(11,6)}"


def test_check(capsys, monkeypatch):
    data = graph6_encode(build(PatternId.hni(12, 6))) + "\n" + graph6_encode(Graph.complete(6)) + "\n"
    code, out, _ = run(capsys, ["check", "--free", "P6^2"], data, monkeypatch)
    lines = out.splitlines()
    assert code == 1
    assert lines[0] == "true" and lines[1].startswith("false\t")


def test_build_and_count(capsys, monkeypatch):
    code, out, _ = run(capsys, ["build", "H(12,6)"])
    assert code == 0
    code, out, _ = run(capsys, ["count"], out, monkeypatch)
    assert out.strip() == "12\t42\t38"


def test_search_matches_module(capsys, tmp_path):
    code, out, _ = run(capsys, ["--json", "--cache-dir", str(tmp_path), "search", "--n", "8", "--forbid", "P5^2", "--objective", "triangles"])
    got = json.loads(out)
    direct = exhaustive_max(SearchSpec(8, PatternId.path_power(5, 2), "triangles"))
    assert (got["optimum"], got["extremal"], got["completeness"]) == (direct.optimum, direct.extremal, "proven")
    assert (tmp_path / "P5_2" / "triangles.json").exists()
    code, out, _ = run(capsys, ["--no-cache", "search", "--n", "8", "--forbid", "P5^2", "--objective", "triangles"])
    assert out.split() == direct.extremal


def test_decompose(capsys):
    g6 = graph6_encode(build(PatternId.hni(12, 6)))
    code, out, _ = run(capsys, ["decompose", g6])
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2
    assert lines[0].split("\t")[0].startswith("K5-")
    code, out, _ = run(capsys, ["decompose", g6, "--json"])
    data = json.loads(out)
    assert len(data["blocks"]) == 2 and data["counts"]["triangles"] == 38


def test_discharge(capsys):
    g6 = graph6_encode(build(PatternId.k5_minus()))
    code, out, _ = run(capsys, ["discharge", g6])
    assert code == 0 and out.startswith("pass")
    code, out, _ = run(capsys, ["discharge", g6, "--trace"])
    rows = out.strip().splitlines()
    assert rows[0] == "edge\ttriangle\tcharge" and len(rows) == 1 + 21
    code, _, err = run(capsys, ["discharge", graph6_encode(Graph.complete(6))])
    assert code == 2 and "P6^2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "Q7"],
        ["decompose", "B"],
        ["search", "--n", "70", "--forbid", "K3"],
        ["table", "--from", "9", "--to", "3"],
        ["frobnicate"],
        ["--jobs", "0", "table"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 2
    assert err.count("\n") == 1 and err.startswith("error:")
