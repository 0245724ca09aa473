"""Per-criterion summary for the acceptance suite.

Every acceptance test carries ``@pytest.mark.criterion(n, title)``; a
criterion passes when all of its tests pass. Tests may attach a short
measurement with ``record_property("detail", ...)``.
"""

from collections import defaultdict

import pytest
from hypothesis import settings

settings.register_profile("lanefree", deadline=None)
settings.load_profile("lanefree")

_results = defaultdict(lambda: {"title": "", "outcomes": [], "details": []})


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test checks")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            item.user_properties.append(("criterion", m.args))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    n, title = props["criterion"]
    entry = _results[n]
    entry["title"] = title
    if report.when == "call" or report.outcome != "passed":
        entry["outcomes"].append(report.outcome)
    if report.when == "call":
        entry["details"] += [v for k, v in report.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_results):
        e = _results[n]
        ok = e["outcomes"] and all(o == "passed" for o in e["outcomes"])
        line = f"AC{n:<2} {'PASS' if ok else 'FAIL'}  {e['title']}"
        if e["details"]:
            line += "  [" + "; ".join(e["details"]) + "]"
        tr.write_line(line)
