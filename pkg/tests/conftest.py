import time

import pytest

from jacwall import enumerate_tree_type_graphs
from testutil import GN_SET

SESSION_START = time.monotonic()


def session_elapsed() -> float:
    return time.monotonic() - SESSION_START


@pytest.fixture(scope="session")
def corpus4():
    """Full acceptance corpus: all tree-type graphs with at most 4 vertices."""
    return {gn: enumerate_tree_type_graphs(*gn, 4) for gn in GN_SET}


@pytest.fixture(scope="session")
def corpus3():
    """Smaller corpus for unit-level sweeps."""
    return {gn: enumerate_tree_type_graphs(*gn, 3) for gn in GN_SET}
