import pytest
from hypothesis import settings

# property tests check correctness, not speed; timings vary with machine load
settings.register_profile("default", deadline=None)
settings.load_profile("default")

_verdicts = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.skipped:
        return
    key = mark.args
    if report.failed:
        _verdicts[key] = "FAIL"
    elif report.when == "call":
        _verdicts.setdefault(key, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), verdict in sorted(_verdicts.items()):
        terminalreporter.write_line(f"{verdict} {number}: {title}")
