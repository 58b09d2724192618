import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))

TITLES = {
    1: "center table", 2: "Langlands involution and B/C swap", 3: "extended-group duality",
    4: "component group equals center", 5: "rank-one Weyl invariants and lifts", 6: "J-sections",
    7: "Lagrangian counts and double annihilators", 8: "Spin(4) diagonal Lagrangian",
    9: "Heisenberg suite", 10: "grading map and index map", 11: "duality involution", 12: "self-duality",
}
_outcomes = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_c(\d\d)_", report.nodeid)
    if not match or (report.when != "call" and report.passed):
        return
    k = int(match.group(1))
    _outcomes.setdefault(k, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(TITLES):
        if k in _outcomes:
            status = "PASS" if all(_outcomes[k]) else "FAIL"
            terminalreporter.write_line(f"criterion {k:2d}: {status}  {TITLES[k]}")
