from pathlib import Path

import pytest

from gorhom.corpus import Corpus, builtin_corpus
from gorhom.functors import HomologyFunctors

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus() -> Corpus:
    return builtin_corpus()


@pytest.fixture(scope="session")
def functors() -> HomologyFunctors:
    return HomologyFunctors()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
