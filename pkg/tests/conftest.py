"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""
from contextlib import contextmanager

import pytest

RESULTS: dict[int, tuple[bool, str]] = {}


@contextmanager
def _record(number: int, title: str):
    try:
        yield
    except BaseException:
        RESULTS[number] = (False, title)
        raise
    RESULTS[number] = (True, title)


@pytest.fixture
def criterion():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance")
    for number in sorted(RESULTS):
        ok, title = RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}")
