from __future__ import annotations

import pytest

# criterion number -> (title, outcome), filled as acceptance tests finish
_ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    num = getattr(item.function, "criterion_num", None)
    if num is not None:
        title = getattr(item.function, "criterion_title", "")
        _ACCEPTANCE_RESULTS[num] = (title, report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_RESULTS):
        title, outcome = _ACCEPTANCE_RESULTS[num]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {verdict}  {title}")
