from pathlib import Path

import pytest
from pydantic import ValidationError

from gorhom.algebras import direct_sum, module_hom, ring_dual
from gorhom.api import FailureCountDoneCallback, InputError
from gorhom.apps.checks import (
    BALANCE_TATE,
    DIMENSION_BOUND,
    ERROR,
    PASSED,
    SKIPPED,
    CheckInput,
    CheckSettings,
)
from gorhom.apps.checks.app import (
    CheckApplication,
    check_balance_tate,
    check_dimension_bound,
    check_subadditivity_report,
    check_theorem_c,
    check_vanishing_and_dim_formulas,
)
from gorhom.corpus import Corpus
from gorhom.functors import HomologyFunctors
from gorhom.parsl import ThreadSettings
from gorhom.workflows.suite import BUILTIN_SUITE, SuiteSettings, run_suite, select_checks

SMALL = (-1, 2)


@pytest.fixture
def app(tmp_path: Path, corpus: Corpus, functors: HomologyFunctors) -> CheckApplication:
    return CheckApplication(CheckSettings(output_dir=tmp_path, probe_range=SMALL), corpus, functors)


def test_select_checks() -> None:
    everything = select_checks("all")
    assert len(everything) == len(BUILTIN_SUITE)
    assert [c.check_id for c in everything] == sorted(c.check_id for c in BUILTIN_SUITE)
    assert len(select_checks(BALANCE_TATE)) == 4
    assert len(select_checks("dimension_bound/")) == 12
    assert [c.check_id for c in select_checks("theorem_c/f2x2-k-k")] == ["theorem_c/f2x2-k-k"]
    with pytest.raises(InputError):
        select_checks("no_such_check")


def test_check_ids_are_unique() -> None:
    ids = [c.check_id for c in BUILTIN_SUITE]
    assert len(ids) == len(set(ids))


def test_unknown_theorem_tag() -> None:
    with pytest.raises(ValidationError):
        CheckInput(check_id="x", theorem="theorem_z", left="f2x2.k")


def test_tate_balance(corpus: Corpus, functors: HomologyFunctors) -> None:
    report = check_balance_tate(corpus.module("f2x2.k"), corpus.module("f2x2.k_left"), SMALL, functors)
    assert report.passed, report.error
    assert report.rows


def test_tate_balance_over_integral_group_ring(corpus: Corpus, functors: HomologyFunctors) -> None:
    report = check_balance_tate(corpus.module("zc2.Z"), corpus.module("zc2.Z_left"), SMALL, functors)
    assert report.passed, report.error


def test_theorem_c(corpus: Corpus, functors: HomologyFunctors) -> None:
    report = check_theorem_c(corpus.module("f2x2.k"), corpus.module("f2x2.k_left"), functors)
    assert report.passed, report.error


def test_dimension_bound_report(corpus: Corpus, functors: HomologyFunctors) -> None:
    report = check_dimension_bound(corpus.complex("tb04"), functors)
    assert report.passed, report.error
    assert report.rows[-1].label == "upper and lower witnesses agree"


def test_subadditivity_report(corpus: Corpus, functors: HomologyFunctors) -> None:
    report = check_subadditivity_report(corpus.sequence("f2x2.kRk"), functors)
    assert report.passed
    assert report.instance.startswith("0 -> ")


@pytest.mark.parametrize("summands", [["k"], ["R"], ["k", "k"], ["k", "R"], ["k", "k", "k"]], ids="+".join)
def test_vanishing_over_small_modules(corpus: Corpus, functors: HomologyFunctors, summands: list) -> None:
    # every left module of dimension <= 3 over F2[x]/(x^2) is a sum of copies of k and R
    k = corpus.module("f2x2.k")
    N = direct_sum([corpus.module(f"f2x2.{s}_left") for s in summands])
    report = check_vanishing_and_dim_formulas(k, [N], (0, 3), functors)
    assert report.passed, report.error or report.failing_rows()
    assert functors.unbounded_tor(k, N, 0).dimension == module_hom(ring_dual(k), N).dim
    assert all(functors.unbounded_tor(k, N, i).is_zero for i in range(1, 4))


@pytest.mark.parametrize(
    "check_id",
    [
        "balance_unbounded/f2x2-k-k",
        "relative_comparison/f2x2-k-k",
        "stor_sequences/f2x2-k-k-1",
        "vanishing/f2x2-k",
        "dimension_bound/tb06",
    ],
)
def test_builtin_checks_pass(app: CheckApplication, check_id: str) -> None:
    (input_data,) = select_checks(check_id)
    report = app.run(input_data)
    assert report.check_id == check_id
    assert report.status == PASSED, report.error or report.failing_rows()
    assert report.replay == {}


def test_errors_are_reported_with_replay(app: CheckApplication) -> None:
    input_data = CheckInput(check_id="dimension_bound/zc2-Z", theorem=DIMENSION_BOUND, left="zc2.Z")
    report = app.run(input_data)
    assert report.status == ERROR
    assert "DimensionError" in report.error
    assert report.replay["input"]["left"] == "zc2.Z"
    assert report.replay["objects"]["zc2.Z"]["side"] == "right"


def test_unknown_object_is_an_error(app: CheckApplication) -> None:
    report = app.run(CheckInput(check_id="x", theorem=DIMENSION_BOUND, left="missing"))
    assert report.status == ERROR
    assert "InputError" in report.error


def test_reports_are_saved(tmp_path: Path, corpus: Corpus, functors: HomologyFunctors) -> None:
    config = CheckSettings(output_dir=tmp_path, probe_range=SMALL, save_reports=True)
    app = CheckApplication(config, corpus, functors)
    app.run(select_checks("theorem_c/f2x2-k-k")[0])
    assert (app.workdir / "input.yaml").exists()
    assert (app.workdir / "report.json").exists()
    assert app.workdir.parent == tmp_path.resolve()


def test_serial_suite(tmp_path: Path) -> None:
    inputs = select_checks("subadditivity")
    suite = run_suite(inputs, CheckSettings(output_dir=tmp_path))
    assert suite.passed
    assert suite.counts()[PASSED] == 2
    assert "2 checks: 2 passed" in suite.table()
    suite.dump_json(tmp_path / "suite.json")
    assert (tmp_path / "suite.json").read_text().startswith("{")


def test_suite_stops_on_callback(tmp_path: Path) -> None:
    inputs = select_checks("subadditivity")
    suite = run_suite(inputs, CheckSettings(output_dir=tmp_path), done_callbacks=[FailureCountDoneCallback(0)])
    assert suite.counts()[SKIPPED] == 2
    assert not suite.passed


def test_suite_on_threads(tmp_path: Path) -> None:
    inputs = select_checks("subadditivity")
    parsl_config = ThreadSettings(max_threads=2).config_factory(tmp_path / "run-info")
    suite = run_suite(inputs, CheckSettings(output_dir=tmp_path), parsl_config)
    assert suite.passed
    assert [c.check_id for c in suite.checks] == [c.check_id for c in inputs]


def test_suite_settings_from_yaml(fixtures_dir: Path, tmp_path: Path) -> None:
    cfg = SuiteSettings.from_yaml(fixtures_dir / "suite.yaml")
    assert cfg.probe_range == (-1, 2)
    assert cfg.periodicity_horizon == 12
    assert len(cfg.done_callbacks()) == 1
    assert cfg.parsl_config() is None
    assert cfg.run_dir is not None and cfg.run_dir.name.startswith("gorhom-test-")
    check_settings = cfg.check_settings()
    assert check_settings.probe_range == (-1, 2)
    assert check_settings.gdim_depth_cap == 4
    cfg.dump_yaml(tmp_path / "params.yaml")
    again = SuiteSettings.from_yaml(tmp_path / "params.yaml")
    assert again.probe_range == cfg.probe_range
    assert again.run_dir == cfg.run_dir


def test_invalid_settings() -> None:
    with pytest.raises(ValidationError):
        SuiteSettings(probe_range=(3, 1))
    with pytest.raises(ValidationError):
        SuiteSettings(periodicity_horizon=0)
    with pytest.raises(FileNotFoundError):
        SuiteSettings(corpus_files=["does/not/exist.json"])
