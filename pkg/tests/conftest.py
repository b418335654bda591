"""Shared pytest wiring: prints one pass/fail line per acceptance
criterion at the end of any run that collected test_acceptance.py."""

import pytest

_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    if not item.nodeid.split("::")[0].endswith("test_acceptance.py"):
        return
    doc = (getattr(item.function, "__doc__", "") or "").strip().splitlines()
    _acceptance_results.append((item.name, doc[0] if doc else "", rep.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, doc, ok in sorted(_acceptance_results):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}: {doc}")
