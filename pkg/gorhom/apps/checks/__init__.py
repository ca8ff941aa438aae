from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import validator

from gorhom.api import ApplicationSettings, BaseModel, path_validator

BALANCE_TATE = "balance_tate"
BALANCE_UNBOUNDED = "balance_unbounded"
THEOREM_C = "theorem_c"
STOR_SEQUENCES = "stor_sequences"
RELATIVE_COMPARISON = "relative_comparison"
VANISHING = "vanishing"
DIMENSION_BOUND = "dimension_bound"
SUBADDITIVITY = "subadditivity"
CHECK_TAGS = (
    BALANCE_TATE,
    BALANCE_UNBOUNDED,
    THEOREM_C,
    STOR_SEQUENCES,
    RELATIVE_COMPARISON,
    VANISHING,
    DIMENSION_BOUND,
    SUBADDITIVITY,
)

PASSED = "passed"
FAILED = "failed"
ERROR = "error"
SKIPPED = "skipped"


class CheckInput(BaseModel):
    check_id: str
    """Unique id; suite reports are ordered by it."""
    theorem: str
    left: str = ""
    """Corpus id of the first argument (``M``)."""
    right: List[str] = []
    """Corpus ids of the second argument, or of the test modules of ``vanishing``."""
    sequence: str = ""
    """Corpus id of a short exact sequence (``subadditivity``)."""
    n: int = 0
    """Cosyzygy degree of ``stor_sequences``."""
    probe_range: Optional[Tuple[int, int]] = None
    """Overrides the configured range for this check."""

    @validator("theorem")
    def known_theorem(cls, v: str) -> str:
        if v not in CHECK_TAGS:
            raise ValueError(f"unknown theorem tag {v!r}; expected one of {', '.join(CHECK_TAGS)}")
        return v


class ComparisonRow(BaseModel):
    label: str
    degree: Optional[int] = None
    relation: str
    """``iso``, ``zero``, ``exact`` or ``<=``."""
    left: str
    right: str = ""
    passed: bool
    witness: Dict[str, Any] = {}


class CheckReport(BaseModel):
    check_id: str
    theorem: str
    instance: str
    rows: List[ComparisonRow] = []
    status: str = PASSED
    error: str = ""
    runtime: float = 0.0
    replay: Dict[str, Any] = {}
    """JSON of the check input and its objects, filled in when the check does not pass."""

    @property
    def passed(self) -> bool:
        return self.status == PASSED

    def failing_rows(self) -> List[ComparisonRow]:
        return [r for r in self.rows if not r.passed]


class SuiteReport(BaseModel):
    checks: List[CheckReport] = []
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def counts(self) -> Dict[str, int]:
        out = {PASSED: 0, FAILED: 0, ERROR: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def table(self) -> str:
        """Human readable summary, one line per check plus the failing rows."""
        lines = []
        for c in self.checks:
            lines.append(f"{c.status.upper():8} {c.check_id:40} {c.instance} ({c.runtime:.2f}s)")
            if c.error:
                lines.append(f"         {c.error}")
            for r in c.failing_rows():
                where = "" if r.degree is None else f" [{r.degree}]"
                lines.append(f"         {r.label}{where}: {r.left} {r.relation} {r.right}")
        counts = self.counts()
        lines.append(
            f"{len(self.checks)} checks: {counts[PASSED]} passed, {counts[FAILED]} failed, "
            f"{counts[ERROR]} errors, {counts[SKIPPED]} skipped"
        )
        return "\n".join(lines)


class CheckSettings(ApplicationSettings):
    corpus_files: List[Path] = []
    """Corpus files loaded next to the builtin fixtures."""
    probe_range: Tuple[int, int] = (-4, 6)
    periodicity_horizon: int = 24
    isomorphism_search_limit: int = 64
    gdim_depth_cap: int = 8
    save_reports: bool = False
    """Write the input and report of every check to its work directory."""

    # validators
    _corpus_files_exist = path_validator("corpus_files")
