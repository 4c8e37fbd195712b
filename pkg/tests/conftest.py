import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from lifshitz_cp.materials import FIXTURES, load_atom, load_wall  # noqa: E402

UM = 1e-4


@pytest.fixture(scope="session")
def atom():
    return load_atom()


@pytest.fixture(scope="session")
def walls():
    return {name: load_wall(name) for name in FIXTURES}


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
