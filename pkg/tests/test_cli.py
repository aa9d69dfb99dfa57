import json

import pytest

from maxrect.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, RunConfig, load_polygon, main, parse_args, write_polygon
from maxrect.corpus import FIXTURES


def _write(tmp_path, name, doc):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(doc))
    return path


def _fixture_file(tmp_path, name):
    path = tmp_path / f"{name}.json"
    write_polygon(FIXTURES[name](), path)
    return path


def test_unit_square_run(tmp_path, capsys):
    path = _write(tmp_path, "sq", {"outer": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    svg = tmp_path / "sq.svg"
    assert main(["--input", str(path), "--svg", str(svg)]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["area"] == pytest.approx(1.0)
    assert rec["center"] == pytest.approx([0.5, 0.5])
    assert 0 <= rec["theta"] < 1.5707963267948966
    for key in ("width", "height", "type", "stats"):
        assert key in rec
    assert svg.read_text().count("<path") == 2


def test_invalid_polygon_exit(tmp_path, capsys):
    path = _write(tmp_path, "bow", {"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]})
    assert main(["--input", str(path)]) == EXIT_INVALID
    rec = json.loads(capsys.readouterr().out)
    assert rec["valid"] is False and rec["errors"]


def test_missing_file_exit(tmp_path):
    assert main(["--input", str(tmp_path / "nope.json")]) == EXIT_IO


def test_unwritable_svg(tmp_path):
    path = _fixture_file(tmp_path, "square")
    assert main(["--input", str(path), "--svg", str(tmp_path / "no" / "dir.svg")]) == EXIT_IO


def test_oracle_check_l_shape(tmp_path, capsys):
    path = _fixture_file(tmp_path, "l_shape")
    assert main(["--input", str(path), "--oracle-check", "720", "0.005"]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert rec["area"] == pytest.approx(2.0)
    assert rec["oracle"]["passed"]
    assert rec["oracle"]["area_lower_bound"] <= 2.0


def test_plus_all_svg(tmp_path, capsys):
    path = _fixture_file(tmp_path, "plus_shape")
    svg = tmp_path / "plus.svg"
    assert main(["--input", str(path), "--all", "--svg", str(svg)]) == EXIT_OK
    rec = json.loads(capsys.readouterr().out)
    assert len(rec["rects"]) == 2
    assert svg.read_text().count("<path") == 3


def test_holed_svg_evenodd(tmp_path, capsys):
    path = _fixture_file(tmp_path, "holed_square")
    svg = tmp_path / "h.svg"
    assert main(["--input", str(path), "--svg", str(svg)]) == EXIT_OK
    assert 'fill-rule="evenodd"' in svg.read_text()


def test_trace_written(tmp_path, capsys):
    path = _fixture_file(tmp_path, "l_shape")
    trace = tmp_path / "trace.txt"
    assert main(["--input", str(path), "--trace", str(trace)]) == EXIT_OK
    assert trace.read_text().strip()


def test_round_trip(tmp_path):
    for name in ("l_shape", "holed_square", "pentagon"):
        p = FIXTURES[name]()
        path = tmp_path / f"{name}.json"
        write_polygon(p, path)
        q = load_polygon(path)
        path2 = tmp_path / f"{name}2.json"
        write_polygon(q, path2)
        assert json.loads(path.read_text()) == json.loads(path2.read_text())
        assert (q.verts == p.verts).all()


def test_parse_args(tmp_path):
    cfg = parse_args(["--input", "x.json", "--types", "a,f", "--oracle-check", "10", "0.1", "--threads", "2"])
    assert cfg.types == frozenset("AF")
    assert cfg.oracle_check == (10, 0.1)
    assert cfg.threads == 2
    with pytest.raises(SystemExit):
        parse_args(["--input", "x.json", "--types", "Q"])
    with pytest.raises(SystemExit):
        parse_args(["--input", "x.json", "--oracle-check", "0", "0.1"])
    with pytest.raises(ValueError):
        RunConfig(tmp_path, types=frozenset())
