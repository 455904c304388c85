import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import golden  # noqa: E402
from hadablom.scheme import MODIFIED, SchemeParams, provision  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def worked_network():
    return provision(SchemeParams(MODIFIED, 8, 6, 31), secret=golden.S)


ACCEPTANCE_RESULTS: list[tuple[str, bool, float, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, elapsed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status}  {name}  ({elapsed:.2f}s)  {detail}")
