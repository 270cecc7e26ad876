import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from wreduce.series import SummationConfig


@pytest.fixture(scope="session")
def cfg6():
    return SummationConfig(tolerance=1e-6)


@pytest.fixture(scope="session")
def cfg8():
    return SummationConfig(tolerance=1e-8)
