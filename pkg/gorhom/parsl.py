"""Executors for running verification checks concurrently.

Checks are pure Python and CPU bound: ``threads`` keeps everything in one
process (cheap to start, shares the memoized resolutions, but serialized by
the GIL) while ``local`` spreads checks over worker processes, each of which
rebuilds its own corpus and caches.
"""
import os
from abc import ABC, abstractmethod
from typing import Literal, Tuple, Union

from parsl.config import Config
from parsl.executors import HighThroughputExecutor, ThreadPoolExecutor
from parsl.executors.base import ParslExecutor
from parsl.providers import LocalProvider

from gorhom.api import BaseSettings, PathLike


def _cpu_count() -> int:
    return max(1, (os.cpu_count() or 2) - 1)


class BaseComputeSettings(BaseSettings, ABC):
    """Executor kind and the number of checks in flight."""

    name: Literal[""] = ""
    """Discriminator used in the suite YAML (``compute_settings.name``)."""
    retries: int = 0
    """Resubmissions of a check whose worker died; a failing verdict is never retried."""

    @abstractmethod
    def executor(self) -> ParslExecutor:
        ...

    def config_factory(self, run_dir: PathLike) -> Config:
        """Parsl configuration with its logs under ``run_dir``."""
        return Config(run_dir=str(run_dir), strategy=None, retries=self.retries, executors=[self.executor()])


class ThreadSettings(BaseComputeSettings):
    """Checks share the process and its memoized functor values."""

    name: Literal["threads"] = "threads"  # type: ignore[assignment]
    max_threads: int = 4

    def executor(self) -> ParslExecutor:
        return ThreadPoolExecutor(label="checks-threads", max_threads=self.max_threads)


class LocalSettings(BaseComputeSettings):
    """One check per worker process on this machine."""

    name: Literal["local"] = "local"  # type: ignore[assignment]
    max_workers: int = _cpu_count()
    worker_port_range: Tuple[int, int] = (10000, 20000)

    def executor(self) -> ParslExecutor:
        return HighThroughputExecutor(
            address="localhost",
            label="checks-htex",
            max_workers=self.max_workers,
            cores_per_worker=1,
            worker_port_range=self.worker_port_range,
            provider=LocalProvider(init_blocks=1, max_blocks=1),  # type: ignore[no-untyped-call]
        )


ComputeSettingsTypes = Union[ThreadSettings, LocalSettings]
