"""Per-criterion summary for the acceptance suite."""

import re

_RESULTS = {}
_TITLES = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = re.match(r"test_criterion_(\d+)_", item.name)
        if m and item.module.__name__.endswith("test_acceptance"):
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _TITLES[item.nodeid] = (int(m.group(1)), doc)


def pytest_runtest_logreport(report):
    if report.nodeid not in _TITLES:
        return
    if report.when == "call" or report.failed:
        prev = _RESULTS.get(report.nodeid, "pass")
        _RESULTS[report.nodeid] = "fail" if (report.failed or prev == "fail") else "pass"
    if report.skipped:
        _RESULTS[report.nodeid] = "skip"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (num, title) in sorted(_TITLES.items(), key=lambda t: t[1][0]):
        status = _RESULTS.get(nodeid, "not run").upper()
        terminalreporter.write_line(f"criterion {num:2d}: {status:<5} {title}")
