import os
import sys
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from analysis.weyl_group import create_weyl_group
from backend.config import settings


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SPRINGER_DEEP", "0") == "1":
        return
    skip_deep = pytest.mark.skip(reason="deep run, set SPRINGER_DEEP=1")
    for item in items:
        if "deep" in item.keywords:
            item.add_marker(skip_deep)


@pytest.fixture
def rng():
    return np.random.default_rng(settings.seed)


@pytest.fixture(scope="session")
def g2():
    return create_weyl_group("G", 2)


@pytest.fixture(scope="session")
def c2():
    return create_weyl_group("C", 2)
