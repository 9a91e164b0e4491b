import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

# (number, passed, description) per acceptance criterion, in run order
ACCEPTANCE: list[tuple[int, bool, str]] = []


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, text: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}"
        print(line)
        ACCEPTANCE.append((number, ok, text))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}")
