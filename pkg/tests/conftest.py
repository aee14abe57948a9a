"""Shared pytest wiring: one-line summary per acceptance criterion."""

_outcomes = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    labels = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}
    for nodeid in sorted(_outcomes):
        name = nodeid.rsplit("::", 1)[-1]
        label = labels.get(_outcomes[nodeid], _outcomes[nodeid].upper())
        terminalreporter.write_line(f"{label}  {name}")
