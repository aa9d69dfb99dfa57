import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
CRITERIA: dict[int, str] = {}


def record(num: int, ok: bool, detail: str) -> None:
    CRITERIA[num] = f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}"
    print(CRITERIA[num])


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
