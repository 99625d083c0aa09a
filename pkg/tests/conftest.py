import contextlib
import time

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# criterion number -> (ok, elapsed seconds, limit seconds, note)
_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """``with criterion(n, limit): ...`` records PASS/FAIL for criterion n,
    failing it when the body raises or overruns its time limit."""

    @contextlib.contextmanager
    def run(n: int, limit: float):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as ex:
            _ACCEPTANCE[n] = (False, time.perf_counter() - t0, limit, type(ex).__name__)
            raise
        elapsed = time.perf_counter() - t0
        ok = elapsed < limit
        _ACCEPTANCE[n] = (ok, elapsed, limit, "" if ok else "time limit exceeded")
        assert ok, f"criterion {n} took {elapsed:.2f}s, limit {limit}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, elapsed, limit, note = _ACCEPTANCE[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {elapsed:8.3f}s (limit {limit:g}s)"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))
