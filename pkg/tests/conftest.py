import sys

import pytest

from pradagger.registry import default_registry
from pradagger.tower import tower_for

# assertion messages may print very large codes
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def registry():
    return tower_for().registry


@pytest.fixture(scope="session")
def tower():
    return tower_for()


@pytest.fixture(scope="session")
def p(registry):
    return registry.g_index


@pytest.fixture()
def fresh_registry():
    return default_registry()


@pytest.fixture()
def acceptance_log():
    """Collects the PASS/FAIL lines of the acceptance suite for the terminal summary."""
    return _ACCEPTANCE.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
