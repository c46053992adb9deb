import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES = {}


def record_acceptance(number, passed, detail):
    """passed=None marks a report-only criterion."""
    status = "REPORT" if passed is None else "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES[number] = f"{status} criterion {number:>2}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
