"""The builtin verification suite and its runner."""
import logging
import time
from typing import Dict, List, Optional, Sequence

from parsl.config import Config

from gorhom.api import DoneCallback, FailureCountDoneCallback, GorhomSettings, InputError, TimeoutDoneCallback
from gorhom.apps.checks import (
    BALANCE_TATE,
    BALANCE_UNBOUNDED,
    CHECK_TAGS,
    DIMENSION_BOUND,
    FAILED,
    PASSED,
    RELATIVE_COMPARISON,
    SKIPPED,
    STOR_SEQUENCES,
    SUBADDITIVITY,
    THEOREM_C,
    VANISHING,
    CheckInput,
    CheckReport,
    CheckSettings,
    SuiteReport,
)
from gorhom.parsl import ComputeSettingsTypes

logger = logging.getLogger(__name__)


def _check(check_id: str, theorem: str, left: str = "", right: Sequence[str] = (), **kwargs: object) -> CheckInput:
    return CheckInput(check_id=check_id, theorem=theorem, left=left, right=list(right), **kwargs)


SMALL_RANGE = (-2, 3)

BUILTIN_SUITE: List[CheckInput] = [
    _check("balance_tate/f2x2-k-k", BALANCE_TATE, "f2x2.k", ["f2x2.k_left"]),
    _check("balance_tate/f2c2-k-k", BALANCE_TATE, "f2c2.k", ["f2c2.k_left"]),
    _check("balance_tate/zc2-Z-Z", BALANCE_TATE, "zc2.Z", ["zc2.Z_left"]),
    _check("balance_tate/f2x2-R-k", BALANCE_TATE, "f2x2.R", ["f2x2.k_left"]),
    _check("balance_unbounded/f2x2-k-k", BALANCE_UNBOUNDED, "f2x2.k", ["f2x2.k_left"]),
    _check("balance_unbounded/f2x2-k-E1", BALANCE_UNBOUNDED, "f2x2.k", ["f2x2.E1"]),
    _check("balance_unbounded/f2c2-k-k", BALANCE_UNBOUNDED, "f2c2.k", ["f2c2.k_left"]),
    _check("balance_unbounded/f3x3-k-M2", BALANCE_UNBOUNDED, "f3x3.k", ["f3x3.M2_left"]),
    _check("theorem_c/f2x2-k-k", THEOREM_C, "f2x2.k", ["f2x2.k_left"]),
    _check("theorem_c/f2x2-R-k", THEOREM_C, "f2x2.R", ["f2x2.k_left"]),
    _check("theorem_c/zc2-R-Z", THEOREM_C, "zc2.R", ["zc2.Z_left"]),
    _check("theorem_c/f3x3-M2-k", THEOREM_C, "f3x3.M2", ["f3x3.k_left"]),
    _check("stor_sequences/f2x2-k-k-0", STOR_SEQUENCES, "f2x2.k", ["f2x2.k_left"], n=0, probe_range=SMALL_RANGE),
    _check("stor_sequences/f2x2-k-k-1", STOR_SEQUENCES, "f2x2.k", ["f2x2.k_left"], n=1, probe_range=SMALL_RANGE),
    _check("stor_sequences/f2c2-k-k-0", STOR_SEQUENCES, "f2c2.k", ["f2c2.k_left"], n=0, probe_range=SMALL_RANGE),
    _check("relative_comparison/f2x2-k-k", RELATIVE_COMPARISON, "f2x2.k", ["f2x2.k_left"]),
    _check("relative_comparison/f2c2-k-k", RELATIVE_COMPARISON, "f2c2.k", ["f2c2.k_left"]),
    _check("relative_comparison/f2x2-R-k", RELATIVE_COMPARISON, "f2x2.R", ["f2x2.k_left"]),
    _check("relative_comparison/f2ut-S1-S1", RELATIVE_COMPARISON, "f2ut.S1", ["f2ut.S1_left"]),
    _check("vanishing/f2x2-k", VANISHING, "f2x2.k", ["f2x2.k_left", "f2x2.R_left", "f2x2.E1"]),
    _check("vanishing/f2ut-S1", VANISHING, "f2ut.S1", ["f2ut.S1_left", "f2ut.S2_left"]),
    _check("vanishing/tb02", VANISHING, "tb02", ["f2x2.k_left"]),
    _check("vanishing/intro", VANISHING, "intro", ["f2x2.k_left"]),
    *(
        _check(f"dimension_bound/{name}", DIMENSION_BOUND, name)
        for name in ["intro", *(f"tb{i:02d}" for i in range(1, 12))]
    ),
    _check("subadditivity/f2x2-kRk", SUBADDITIVITY, sequence="f2x2.kRk"),
    _check("subadditivity/f2x2-RRkk", SUBADDITIVITY, sequence="f2x2.RRkk"),
]


def select_checks(selection: str, suite: Sequence[CheckInput] = tuple(BUILTIN_SUITE)) -> List[CheckInput]:
    """``all``, a theorem tag, or a check id (or a prefix of ids ending in ``/``)."""
    if selection == "all":
        chosen = list(suite)
    elif selection in CHECK_TAGS:
        chosen = [c for c in suite if c.theorem == selection]
    else:
        prefix = selection.endswith("/")
        chosen = [c for c in suite if c.check_id == selection or (prefix and c.check_id.startswith(selection))]
        if not chosen:
            raise InputError("<selection>", f"no check matches {selection!r}")
    return sorted(chosen, key=lambda c: c.check_id)


def run_check(input_data: CheckInput, config: CheckSettings) -> CheckReport:
    from gorhom.apps.checks.app import CheckApplication

    app = CheckApplication(config)
    output_data = app.run(input_data)
    return output_data


def _skipped(input_data: CheckInput) -> CheckReport:
    return CheckReport(
        check_id=input_data.check_id,
        theorem=input_data.theorem,
        instance=input_data.left or input_data.sequence,
        status=SKIPPED,
        error="not scheduled: the suite stopped early",
    )


def _stop(callbacks: Sequence[DoneCallback], completed: int, failed: int) -> bool:
    return any(cb.suite_finished(completed, failed) for cb in callbacks)


def run_suite(
    inputs: Sequence[CheckInput],
    config: CheckSettings,
    parsl_config: Optional[Config] = None,
    done_callbacks: Sequence[DoneCallback] = (),
) -> SuiteReport:
    """Run the checks serially, or as parsl apps when ``parsl_config`` is given.

    The report lists the checks in id order; checks a callback kept from being
    scheduled are reported as skipped.
    """
    ordered = sorted(inputs, key=lambda c: c.check_id)
    start = time.perf_counter()
    reports: Dict[str, CheckReport] = {}
    if parsl_config is None:
        failed = 0
        for input_data in ordered:
            if _stop(done_callbacks, len(reports), failed):
                break
            report = run_check(input_data, config)
            failed += report.status != PASSED
            reports[input_data.check_id] = report
    else:
        import parsl
        from parsl import python_app

        parsl.load(parsl_config)
        try:
            app = python_app(run_check, executors="all")
            futures = {}
            for input_data in ordered:
                done = [f for f in futures.values() if f.done()]
                failed = sum(f.result().status != PASSED for f in done)
                if _stop(done_callbacks, len(done), failed):
                    break
                futures[input_data.check_id] = app(input_data, config)
            for check_id, future in futures.items():
                reports[check_id] = future.result()
        finally:
            parsl.dfk().cleanup()
            parsl.clear()
    out = [reports.get(c.check_id) or _skipped(c) for c in ordered]
    suite = SuiteReport(checks=out, runtime=time.perf_counter() - start)
    counts = suite.counts()
    logger.info(
        f"suite finished: {counts[PASSED]} passed, {counts[FAILED]} failed, "
        f"{counts[SKIPPED]} skipped in {suite.runtime:.1f}s"
    )
    return suite


class SuiteSettings(GorhomSettings):
    """Provide a YAML interface to configure a suite run."""

    compute_settings: Optional[ComputeSettingsTypes] = None
    """Executor for concurrent checks; checks run serially without one."""
    max_failures: Optional[int] = None
    """Stop scheduling checks after this many failures."""
    duration_sec: Optional[float] = None
    """Stop scheduling checks after this many seconds."""
    save_reports: bool = False

    def check_settings(self) -> CheckSettings:
        assert self.run_dir is not None
        return CheckSettings(
            output_dir=self.run_dir / "checks",
            corpus_files=self.corpus_files,
            probe_range=self.probe_range,
            periodicity_horizon=self.periodicity_horizon,
            isomorphism_search_limit=self.isomorphism_search_limit,
            gdim_depth_cap=self.gdim_depth_cap,
            save_reports=self.save_reports,
        )

    def done_callbacks(self) -> List[DoneCallback]:
        callbacks: List[DoneCallback] = []
        if self.max_failures is not None:
            callbacks.append(FailureCountDoneCallback(self.max_failures))
        if self.duration_sec is not None:
            callbacks.append(TimeoutDoneCallback(self.duration_sec))
        return callbacks

    def parsl_config(self) -> Optional[Config]:
        if self.compute_settings is None:
            return None
        return self.compute_settings.config_factory(self.ensure_run_dir() / "run-info")
