import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    ok = outcome.excinfo is None
    elapsed = time.perf_counter() - start
    prev = _ACCEPTANCE.get(n)
    if prev is not None:
        ok = ok and prev[0]
        elapsed += prev[2]
    _ACCEPTANCE[n] = (ok, text, elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, text, elapsed = _ACCEPTANCE[n]
        terminalreporter.write_line(
            f"criterion {n}: {'PASS' if ok else 'FAIL'} - {text} ({elapsed:.2f} s)")
