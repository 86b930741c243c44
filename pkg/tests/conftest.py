import pytest

from corpus_util import feasible_corpus


@pytest.fixture(scope="session")
def unique_corpus():
    """500 solvable instances with brute-verified unique minimizers."""
    return list(feasible_corpus(seed=20240601, count=500, unique_only=True))


@pytest.fixture(scope="session")
def small_unique_corpus(unique_corpus):
    return unique_corpus[:120]
