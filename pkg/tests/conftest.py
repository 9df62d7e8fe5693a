import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dmforms.algebra import FieldParams  # noqa: E402

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "failed": [], "ran": 0})
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        entry["ran"] += 1
        if rep.failed:
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {n:2d}: {status}  {e['title']}"
        if e["failed"]:
            line += f"  (failing: {', '.join(e['failed'])})"
        tr.write_line(line)


@pytest.fixture(scope="session")
def F3():
    return FieldParams(3)


@pytest.fixture(scope="session")
def F5():
    return FieldParams(5)


@pytest.fixture(scope="session")
def F9():
    return FieldParams(3, 2)
