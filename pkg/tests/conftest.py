from __future__ import annotations

import pytest

from cspace import prim

S1, S2, S3, S4, S5 = (prim(f"S{i}") for i in range(1, 6))


@pytest.fixture
def prims():
    return S1, S2, S3, S4, S5


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
