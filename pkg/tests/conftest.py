from __future__ import annotations

import re

_CRITERIA = {
    1: "JK6 reproduction",
    2: "Ising reproduction",
    3: "gYBE and far commutativity",
    4: "eigenvalue certification",
    5: "SO(2r+1)_2 gYBE objects, r = 1..5",
    6: "B_4 braid representation",
    7: "B_3 group closure",
    8: "property suites",
}
_outcomes: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_", report.nodeid)
    if not m:
        return
    k = int(m.group(1))
    if report.when == "call" or report.failed:
        if _outcomes.get(k) != "FAIL":
            _outcomes[k] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k, label in _CRITERIA.items():
        terminalreporter.write_line(f"criterion {k} ({label}): {_outcomes.get(k, 'NOT RUN')}")
