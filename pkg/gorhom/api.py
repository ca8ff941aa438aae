import json
import logging
import sys
import time
import uuid
from abc import ABC, abstractmethod
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar, Union

import yaml
from pydantic import BaseModel as _BaseModel
from pydantic import BaseSettings as _BaseSettings
from pydantic import root_validator, validator

_T = TypeVar("_T")

PathLike = Union[str, Path]


class GorhomError(Exception):
    """Base class of every error raised by gorhom."""


class DomainError(GorhomError):
    """Operation requested over an unsupported coefficient domain."""


class ShapeError(GorhomError):
    """Incompatible matrix shapes."""


class AlgebraError(GorhomError):
    """Structure constants violate the algebra axioms."""


class ModuleError(GorhomError):
    """Module axioms fail, or sides/algebras do not match."""


class ComplexError(GorhomError):
    """A complex or chain map is malformed in some degree."""

    def __init__(self, message: str, degree: Optional[int] = None) -> None:
        super().__init__(message)
        self.degree = degree


class ResolutionError(GorhomError):
    """A resolution cannot be built or lacks a required certificate."""


class WindowError(GorhomError):
    """No finite window computes the requested tensor homology."""


class DegreeError(GorhomError):
    """A module functor was requested in a negative degree."""


class DimensionError(GorhomError):
    """A Gorenstein dimension could not be determined."""


class InputError(GorhomError):
    """An input file violates the corpus schema."""

    def __init__(self, path: PathLike, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = Path(path)
        self.reason = reason


def _resolve_path_exists(value: Optional[Path]) -> Optional[Path]:
    if value is None:
        return None
    p = value.resolve()
    if not p.exists():
        raise FileNotFoundError(p)
    return p


def path_validator(field: str) -> classmethod:
    decorator = validator(field, allow_reuse=True, each_item=True)
    _validator = decorator(_resolve_path_exists)
    return _validator


class _FileMixin:
    """YAML and JSON round trips shared by settings and records."""

    def dump_yaml(self, filename: PathLike) -> None:
        with open(filename, mode="w") as fp:
            yaml.dump(json.loads(self.json()), fp, indent=4, sort_keys=False)  # type: ignore[attr-defined]

    @classmethod
    def from_yaml(cls: Type[_T], filename: PathLike) -> _T:
        with open(filename) as fp:
            raw_data = yaml.safe_load(fp) or {}
        return cls(**raw_data)  # type: ignore

    def dump_json(self, filename: PathLike) -> None:
        with open(filename, mode="w", encoding="utf-8") as fp:
            fp.write(self.json(indent=2, sort_keys=False))  # type: ignore[attr-defined]
            fp.write("\n")


class BaseSettings(_FileMixin, _BaseSettings):
    """Base settings to provide an easier interface to read/write YAML files."""


class BaseModel(_FileMixin, _BaseModel):
    """Data records (reports, corpus entries); unlike settings they ignore the environment."""


class ApplicationSettings(BaseSettings):
    output_dir: Path = Path("runs")

    @validator("output_dir")
    def resolve_output_dir(cls, v: Path) -> Path:
        return v.resolve()


class GorhomSettings(BaseSettings):
    experiment_name: str = "gorhom"
    """Name of the experiment to label the run directory."""
    runs_dir: Path = Path("runs")
    """Main directory to organize all run directories."""
    run_dir: Optional[Path] = None
    """Path this particular run writes to (set automatically, created lazily)."""
    corpus_files: List[Path] = []
    """Extra JSON corpus files loaded next to the builtin fixtures."""
    probe_range: Tuple[int, int] = (-4, 6)
    """Default degree range of every comparison indexed by the integers."""
    periodicity_horizon: int = 24
    """Resolution steps searched for a repeating syzygy before failing."""
    gdim_depth_cap: int = 8
    """Tor scan depth used when no certified upper bound exists."""
    isomorphism_search_limit: int = 64
    """Seeded random intertwiner combinations tried before the isomorphism search walks all of Hom."""
    log_level: str = "INFO"
    """Threshold of the root logger."""

    @validator("probe_range")
    def ordered_range(cls, v: Tuple[int, int]) -> Tuple[int, int]:
        if v[0] > v[1]:
            raise ValueError(f"probe range {v[0]}..{v[1]} is empty")
        return v

    @validator("periodicity_horizon", "gdim_depth_cap", "isomorphism_search_limit")
    def positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be positive")
        return v

    @root_validator(pre=True)
    def set_run_dir(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Generate a unique run path within runs_dir with a timestamp."""
        if values.get("run_dir") is None:
            runs_dir = Path(values.get("runs_dir", "runs")).resolve()
            experiment_name = values.get("experiment_name", "gorhom")
            timestamp = datetime.now().strftime("%d%m%y-%H%M%S")
            values["run_dir"] = runs_dir / f"{experiment_name}-{timestamp}"
        return values

    # validators
    _corpus_files_exist = path_validator("corpus_files")

    def ensure_run_dir(self) -> Path:
        assert self.run_dir is not None
        self.run_dir.mkdir(exist_ok=True, parents=True)
        return self.run_dir

    def configure_logging(self, to_file: bool = False) -> None:
        """Set up logging."""
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stdout)]
        if to_file:
            handlers.append(logging.FileHandler(self.ensure_run_dir() / "runtime.log"))
        logging.basicConfig(
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            level=getattr(logging, self.log_level.upper(), logging.INFO),
            handlers=handlers,
        )


class Application(ABC):
    """Application interface for suite components. Provides
    standard access to a per-run work directory."""

    def __init__(self, config: ApplicationSettings) -> None:
        self.config = config
        self.__workdir: Optional[Path] = None

    @property
    def workdir(self) -> Path:
        """Returns a directory path for application.run to write files to,
        of the form output_dir / run-<uuid>. Created on first access."""
        if isinstance(self.__workdir, Path):
            return self.__workdir

        workdir = self.config.output_dir / f"run-{uuid.uuid4()}"
        workdir.mkdir(exist_ok=True, parents=True)
        self.__workdir = workdir
        return workdir

    @abstractmethod
    def run(self, input_data: Any) -> Any:
        ...


class DoneCallback(ABC):
    @abstractmethod
    def suite_finished(self, completed: int, failed: int) -> bool:
        """Returns True, if no further checks should be scheduled."""
        ...


class TimeoutDoneCallback(DoneCallback):
    def __init__(self, duration_sec: float) -> None:
        """Stop scheduling checks after duration_sec seconds has elapsed.

        Parameters
        ----------
        duration_sec : float
            Seconds to run the suite for.
        """
        self.duration_sec = duration_sec
        self.start_time = time.time()

    def suite_finished(self, completed: int, failed: int) -> bool:
        elapsed_sec = time.time() - self.start_time
        return elapsed_sec > self.duration_sec


class FailureCountDoneCallback(DoneCallback):
    def __init__(self, max_failures: int) -> None:
        """Stop scheduling checks once a number of checks have failed.

        Parameters
        ----------
        max_failures : int
            Number of failing checks tolerated before stopping.
        """
        self.max_failures = max_failures

    def suite_finished(self, completed: int, failed: int) -> bool:
        return failed >= self.max_failures
