from collections import OrderedDict

import pytest

_criteria: "OrderedDict[str, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, title): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    key, title = mark.args
    entry = _criteria.setdefault(key, {"title": title, "passed": True, "tests": 0, "failed": []})
    if rep.when == "call":
        entry["tests"] += 1
    if rep.failed:
        entry["passed"] = False
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key, e in _criteria.items():
        status = "PASS" if e["passed"] else "FAIL"
        extra = f"  failed: {', '.join(e['failed'])}" if e["failed"] else ""
        tr.write_line(f"{status}  {key:<4} {e['title']} ({e['tests']} checks){extra}")
