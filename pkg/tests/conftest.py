from __future__ import annotations

from collections import OrderedDict

import pytest

# criterion number -> (title, list of (test id, outcome))
_RESULTS: "OrderedDict[int, tuple[str, list]]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_finish(session):
    for item in session.items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, title = m.args
            _RESULTS.setdefault(num, (title, []))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    num, title = m.args
    entries = _RESULTS.setdefault(num, (title, []))[1]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entries.append((item.nodeid, "passed" if rep.passed else rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_RESULTS):
        title, entries = _RESULTS[num]
        if not entries:
            status = "NOT RUN"
        elif all(o == "passed" for _, o in entries):
            status = "PASS"
        else:
            status = "FAIL"
        tr.write_line(f"criterion {num:2d} {status:7s} {title} ({len(entries)} test(s))")
