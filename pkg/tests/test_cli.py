import json
from argparse import ArgumentTypeError
from pathlib import Path

import pytest

from gorhom.workflows.cli import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, degree_range, main


def test_degree_range() -> None:
    assert degree_range("-2..3") == (-2, 3)
    assert degree_range("4") == (4, 4)
    with pytest.raises(ArgumentTypeError):
        degree_range("3..1")


def test_load_reports_counts(fixtures_dir: Path, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "summary.json"
    assert main(["load", str(fixtures_dir / "corpus_valid.json"), "--json", str(out)]) == EXIT_OK
    assert "2 rings, 5 modules, 2 complexes, 1 resolutions" in capsys.readouterr().out
    summary = json.loads(out.read_text())
    assert summary["total"]["resolutions"] == 1


@pytest.mark.parametrize("name", ["bad_differential.json", "bad_schema.json", "duplicate.json"])
def test_load_rejects_bad_files(fixtures_dir: Path, capsys: pytest.CaptureFixture, name: str) -> None:
    assert main(["load", str(fixtures_dir / name)]) == EXIT_INPUT
    assert name in capsys.readouterr().err


def test_tor(capsys: pytest.CaptureFixture) -> None:
    assert main(["tor", "f2x2.k", "f2x2.k_left", "--range", "0..2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "tor_0 = " in out and "tor_2 = " in out


def test_negative_tor_of_modules_is_an_input_error() -> None:
    assert main(["tor", "f2x2.k", "f2x2.k_left", "--range", "-1..1"]) == EXIT_INPUT


def test_unknown_object_is_an_input_error() -> None:
    assert main(["tate", "missing", "f2x2.k_left"]) == EXIT_INPUT


def test_tate_json(tmp_path: Path) -> None:
    out = tmp_path / "tate.json"
    assert main(["tate", "zc2.Z", "zc2.Z_left", "--range", "-1..2", "--json", str(out)]) == EXIT_OK
    values = json.loads(out.read_text())["values"]
    assert values["1"]["torsion"] == [2]
    assert values["2"]["text"] == "0"
    assert values["-1"]["text"] == "Z/2"


def test_extra_corpus_file(fixtures_dir: Path, capsys: pytest.CaptureFixture) -> None:
    args = ["--corpus", str(fixtures_dir / "corpus_valid.json"), "stor", "dn.k", "dn.k_left", "--range", "0..1"]
    assert main(args) == EXIT_OK
    assert "stor_1 = " in capsys.readouterr().out


def test_resolve(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["resolve", "f2x2.k", "--kind", "projective", "--length", "3"]) == EXIT_OK
    assert "truncated resolution" in capsys.readouterr().out
    out = tmp_path / "res.json"
    assert main(["resolve", "f2x2.k", "--json", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["g"] == 0
    assert data["certificates"]["split_surjective"] is True
    assert main(["resolve", "tb03", "--kind", "proper"]) == EXIT_INPUT


def test_tensor(capsys: pytest.CaptureFixture) -> None:
    assert main(["tensor", "tb03", "f2x2.k_left", "--range", "0..1"]) == EXIT_OK
    assert "H_1 = " in capsys.readouterr().out


def test_gdim(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["gdim", "tb02"]) == EXIT_OK
    assert "Gfd = 2" in capsys.readouterr().out
    out = tmp_path / "bound.json"
    assert main(["gdim", "tb04", "--bound", "--json", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["holds"] is True


def test_gdim_over_integers_fails() -> None:
    assert main(["gdim", "zc2.Z"]) == EXIT_FAILURE
    assert main(["gdim", "zc2.Z", "--flavor", "Gpd"]) == EXIT_OK


def test_check(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "suite.json"
    assert main(["check", "subadditivity", "--json", str(out)]) == EXIT_OK
    assert "2 checks: 2 passed" in capsys.readouterr().out
    report = json.loads(out.read_text())
    assert [c["status"] for c in report["checks"]] == ["passed", "passed"]


def test_check_with_config(fixtures_dir: Path) -> None:
    assert main(["-c", str(fixtures_dir / "suite.yaml"), "check", "theorem_c/f2x2-k-k"]) == EXIT_OK


def test_unknown_check_selection() -> None:
    assert main(["check", "no_such_check"]) == EXIT_INPUT


def test_missing_config_file(tmp_path: Path) -> None:
    assert main(["-c", str(tmp_path / "missing.yaml"), "check"]) == EXIT_INPUT


def test_bad_range_exits_through_argparse() -> None:
    with pytest.raises(SystemExit) as info:
        main(["tor", "f2x2.k", "f2x2.k_left", "--range", "3..1"])
    assert info.value.code == 2
