"""Command-line behaviour: outputs, exit codes, reproducibility."""

import json

import pytest

from redei.cli import main
from redei import formats
from redei.errors import FormatError
from redei.ff import construct_field
from redei.plane import PlanePointSet
from redei.affgroup import AffSet


SQUARE4_TEXT = "4 2 2 3\n0 0\n0 1\n1 0\n1 1\n"


@pytest.fixture
def square4(tmp_path):
    path = tmp_path / "square4.txt"
    path.write_text(SQUARE4_TEXT)
    return str(path)


def test_field_command(capsys):
    assert main(["field", "3", "2"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "p=3 e=2 q=9 modulus=x^2+1"


def test_field_command_json(capsys):
    assert main(["field", "2", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"p": 2, "e": 2, "q": 4, "modulus_code": 3,
                    "modulus": "x^2+x+1"}


def test_field_command_bad_p(capsys):
    assert main(["field", "6", "1"]) == 2
    assert "NonPrimeCharacteristic" in capsys.readouterr().err


def test_directions_command(capsys, square4):
    assert main(["directions", square4, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["D"] == [0, 1, "inf"]
    assert data["size"] == 4
    assert data["collinear"] is False


def test_redei_command(capsys, tmp_path):
    path = tmp_path / "two.txt"
    path.write_text("3 3 1 0\n0 0\n1 0\n")
    assert main(["redei", str(path), "--slope", "1", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["H"] == "0 1 1"
    assert data["f"] == "2 1"
    assert data["g"] == "0 2"
    assert data["in_direction_set"] is False

    # both points lie on the slope-0 line through the origin
    assert main(["redei", str(path), "--slope", "0", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["all_on_one_line"] is True
    assert data["l1"] is None

    corner = tmp_path / "corner.txt"
    corner.write_text("3 3 1 0\n0 0\n1 0\n0 1\n")
    assert main(["redei", str(corner), "--slope", "0", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["in_direction_set"] is True
    assert (data["l1"], data["l2"]) == (0, 0)


def test_bounds_command(capsys, square4):
    assert main(["bounds", square4, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["lower"], data["upper"]) == (3, 3)
    assert (data["l1"], data["l2"]) == (1, 1)
    assert data["holds"] is True


def test_bounds_trivial_upper(capsys, tmp_path):
    path = tmp_path / "corner.txt"
    path.write_text("3 3 1 0\n0 0\n1 0\n0 1\n")
    assert main(["bounds", str(path), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["upper"] == "trivial"
    assert data["lower"] == 3


def test_classify_command(capsys, tmp_path):
    field = construct_field(2, 2)
    A = AffSet(field, [(1, b) for b in range(4)])
    path = tmp_path / "u4.txt"
    path.write_text(formats.serialize_aff_set(A))
    assert main(["classify", str(path), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["C"] == "1"
    assert data["regime"] == "small"
    assert data["case_b"] == {"pi": 1, "bound": "4", "holds": True}
    assert data["holds"] is True


def test_verify_exit_zero_and_reproducible(capsys):
    argv = ["verify", "--target", "szonyi", "--q", "3", "--exhaustive",
            "--sizes", "2..3", "--json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    data = json.loads(first)
    assert data["violations"] == []
    assert data["target"] == "szonyi"


def test_verify_parallel_matches_serial(capsys):
    base = ["verify", "--target", "maindir", "--q", "4", "--samples", "200",
            "--seed", "5", "--sizes", "2..4", "--json"]
    assert main(base) == 0
    serial = capsys.readouterr().out
    assert main(base + ["--jobs", "4"]) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_verify_usage_errors(capsys):
    assert main(["verify", "--target", "szonyi", "--q", "3",
                 "--sizes", "2..3"]) == 2
    assert "mode" in capsys.readouterr().err
    assert main(["verify", "--target", "szonyi", "--q", "12",
                 "--exhaustive", "--sizes", "2..3"]) == 2
    assert "prime power" in capsys.readouterr().err


def test_verify_budget_exit(capsys, monkeypatch):
    monkeypatch.setenv("REDEI_BUDGET", "100")
    argv = ["verify", "--target", "szonyi", "--q", "5", "--exhaustive",
            "--sizes", "2..5", "--json"]
    assert main(argv) == 3
    assert "budget" in capsys.readouterr().err


def test_verify_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    argv = ["verify", "--target", "kneser", "--q", "4", "--exhaustive",
            "--sizes", "1..4", "--json", "--out", str(out)]
    assert main(argv) == 0
    stdout = capsys.readouterr().out
    assert out.read_text() == stdout


def test_malformed_set_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("4 2 2 3\n0 0\n0 9\n")
    assert main(["directions", str(path)]) == 2
    err = capsys.readouterr().err
    assert "line 3" in err

    path.write_text("4 2 2 3\n0 0\n0 0\n")
    assert main(["directions", str(path)]) == 2
    assert "duplicate" in capsys.readouterr().err

    path.write_text("4 2 2 1\n0 0\n")
    assert main(["directions", str(path)]) == 2
    assert "canonical" in capsys.readouterr().err


def test_search_command(capsys):
    assert main(["search", "--q", "4", "--size", "4", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["min_D"] == 3
    assert data["mode"] == "exhaustive"
    assert [[0, 0], [0, 1], [1, 0], [1, 1]] in data["witnesses"]

    assert main(["search", "--q", "4", "--size", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["mode"] == "exempt"


def test_point_set_roundtrip():
    field = construct_field(2, 2)
    A = PlanePointSet(field, [(0, 0), (1, 3), (2, 2)])
    text = formats.serialize_point_set(A)
    B = formats.parse_point_set(text)
    assert B.points == A.points
    assert formats.serialize_point_set(B) == text


def test_aff_set_zero_scale_rejected():
    with pytest.raises(FormatError):
        formats.parse_aff_set("4 2 2 3\n0 1\n")
