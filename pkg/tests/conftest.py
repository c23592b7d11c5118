import contextlib
import time

import pytest

_results = []


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for one acceptance criterion."""

    @contextlib.contextmanager
    def record(number, title):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            _results.append((number, "FAIL", title, time.perf_counter() - start, str(exc).splitlines()[0:1]))
            raise
        _results.append((number, "PASS", title, time.perf_counter() - start, []))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, seconds, detail in sorted(_results):
        line = f"[{status}] criterion {number:>2}: {title} ({seconds:.1f}s)"
        if detail:
            line += f" -- {detail[0]}"
        terminalreporter.write_line(line)
