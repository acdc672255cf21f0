import json

from src.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main


def test_rect_json(capsys):
    assert main(["rect", "4", "9", "--json"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["parity"] == "even"
    assert out["guaranteed_valuation"] == "2"


def test_rect_text(capsys):
    assert main(["rect", "2", "3"]) == EXIT_OK
    assert "parity: Odd" in capsys.readouterr().out


def test_rect_without_matchings(capsys):
    assert main(["rect", "1", "1"]) == EXIT_OK
    assert "R1x1 has an odd number of vertices, no matchings" in capsys.readouterr().out


def test_analyze_outputs(tmp_path, capsys):
    good = tmp_path / "r4x9.txt"
    good.write_text("\n".join(["#" * 9] * 4) + "\n", encoding="utf-8")
    table = tmp_path / "out.tsv"
    assert main(["analyze", str(good), "--json", "--table", str(table)]) == EXIT_OK
    (item,) = json.loads(capsys.readouterr().out)
    assert item["report"]["dim_C_B"] == "2"
    assert item["report"]["exact_count"] == "6336"
    assert table.read_text(encoding="utf-8").startswith("Source\tGraph ID")


def test_analyze_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("#?#\n", encoding="utf-8")
    assert main(["analyze", str(bad)]) == EXIT_INPUT
    assert "RegionParseError" in capsys.readouterr().out


def test_billiards_and_svg(tmp_path, capsys):
    region = tmp_path / "r5x4.txt"
    region.write_text("\n".join(["####"] * 5) + "\n", encoding="utf-8")
    svg = tmp_path / "paths.svg"
    assert main(["billiards", str(region), "--outer", "--json", "--svg", str(svg)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["d"] == "1"
    assert out["dim_C_B"] == "0"
    assert svg.read_text(encoding="utf-8").count("<polyline") == 1


def test_billiards_rejects_graph_json(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"vertices": ["a", "b"], "edges": [["a", "b"]]}', encoding="utf-8")
    assert main(["billiards", str(path)]) == EXIT_INPUT


def test_reduce_trace(tmp_path, capsys):
    path = tmp_path / "sq.txt"
    path.write_text("##\n##\n", encoding="utf-8")
    assert main(["reduce", str(path), "--json"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["fully_reduced"] is True
    assert out["isolated_count"] == "2"


def test_verify_vacuous(capsys):
    assert main(["verify", "--sizes", "0", "--json"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert all(r["cases"] == "0" for r in out["results"])


def test_verify_reports_injected_fault(capsys):
    code = main(["verify", "--fault", "kasteleyn-sign", "--check", "kasteleyn", "--sizes", "4", "--cases", "20"])
    assert code == EXIT_FAILED
    assert "reproducer:" in capsys.readouterr().out


def test_missing_file(tmp_path):
    assert main(["reduce", str(tmp_path / "nothing.txt")]) == EXIT_INPUT
