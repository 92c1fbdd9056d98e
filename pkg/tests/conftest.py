import sys
from pathlib import Path

import pytest

from exploitlab import builtin, load_system_file

TESTS_DIR = Path(__file__).parent
REPO_DIR = TESTS_DIR.parent
FIXTURES_DIR = REPO_DIR / "fixtures"

sys.path.insert(0, str(TESTS_DIR))  # oracles / generators / helpers


@pytest.fixture
def login():
    return builtin("login")


@pytest.fixture
def lockpad():
    return builtin("lockpad")


@pytest.fixture
def echo():
    return builtin("echo")


@pytest.fixture
def coin():
    return load_system_file(str(FIXTURES_DIR / "coin.sys.json"))
