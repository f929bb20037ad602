import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = {}
_START = time.perf_counter()
RUNTIME_BUDGET = 60.0  # seconds, for the whole suite


@pytest.fixture
def criterion():
    """Record the verdict of an acceptance criterion for the end-of-run summary."""

    def record(number, title, passed, detail=""):
        _RESULTS[number] = (title, bool(passed), detail)
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        print(line)
        return passed

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def _runtime_ok():
    return time.perf_counter() - _START < RUNTIME_BUDGET


def pytest_sessionfinish(session, exitstatus):
    # the golden-report criterion also carries the suite runtime budget
    if 9 in _RESULTS and not _runtime_ok() and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, detail = _RESULTS[number]
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
    if 9 in _RESULTS:
        elapsed = time.perf_counter() - _START
        verdict = "PASS" if elapsed < RUNTIME_BUDGET else "FAIL"
        terminalreporter.write_line(
            f"{verdict} criterion 9 runtime: suite finished in {elapsed:.1f} s (budget {RUNTIME_BUDGET:.0f} s)")
