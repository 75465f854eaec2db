import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from infovalue.lp import available_backends  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def acceptance():
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
