"""Acceptance-gate bookkeeping shared by the test suite.

test_acceptance.py records one verdict per criterion; after the run the
terminal summary prints a pass/fail line for each so the whole gate can
be read at a glance even when pytest's own output scrolls away.
"""

import pytest

_RESULTS = {}


class _Gate:
    def expect(self, number, label):
        """Reserve a summary line; overwritten by record on completion."""
        _RESULTS.setdefault(number, (label, False, "did not finish"))

    def record(self, number, label, ok, detail=""):
        _RESULTS[number] = (label, bool(ok), detail)


@pytest.fixture
def gate():
    return _Gate()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance gate")
    for number in sorted(_RESULTS):
        label, ok, detail = _RESULTS[number]
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
