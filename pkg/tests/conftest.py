import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dgmorse.corpus import CATALOG, load_example  # noqa: E402

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def corpus():
    return {name: load_example(name) for name in CATALOG}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
