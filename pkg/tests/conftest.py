import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import fixtures  # noqa: E402


@pytest.fixture
def hidden_pattern():
    return fixtures.hidden_pattern()


@pytest.fixture
def strictly_unbounded():
    return fixtures.strictly_unbounded()


@pytest.fixture
def two_branch_stair():
    return fixtures.two_branch("stair-parity")


@pytest.fixture
def two_branch_parity():
    return fixtures.two_branch("parity")
