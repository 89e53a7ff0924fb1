import pytest

from aged.corpus import load_mini_framenet
from aged.encoding import build_vocabulary


@pytest.fixture(scope="session")
def mini():
    """(store, train_instances, test_instances) for the bundled corpus."""
    return load_mini_framenet()


@pytest.fixture(scope="session")
def store(mini):
    return mini[0]


@pytest.fixture(scope="session")
def train_instances(mini):
    return mini[1]


@pytest.fixture(scope="session")
def test_instances(mini):
    return mini[2]


@pytest.fixture(scope="session")
def vocab(mini):
    store, train, _ = mini
    return build_vocabulary(train, store)
