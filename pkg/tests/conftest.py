"""Shared fixtures and the acceptance-summary hook."""

import pytest

from atchain import ParamVector

# Verdict lines recorded by tests/test_acceptance.py.  Printed after the
# run so each criterion shows one visible pass/fail line even when all
# tests pass and pytest swallows stdout.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def hand3() -> ParamVector:
    """n = 3 with p12 = p23 = 1/2, p13 = 0.7: exactly one neutral label (2)."""
    return ParamVector(3, {(1, 2): 0.5, (1, 3): 0.7, (2, 3): 0.5})
