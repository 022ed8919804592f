from __future__ import annotations

import pytest

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE_LINES: dict = {}


def record(criterion: int, passed: bool, text: str) -> None:
    line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {text}"
    ACCEPTANCE_LINES[criterion] = line
    print(line)


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
