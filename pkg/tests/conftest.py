import numpy as np
import pytest


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# filled by test_acceptance.report; printed after the run so the per-criterion
# PASS/FAIL lines survive output capture
ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
