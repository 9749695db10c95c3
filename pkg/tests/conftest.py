import re
from collections import OrderedDict

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: "OrderedDict[int, list]" = OrderedDict()


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results.setdefault(int(m.group(1)), []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        subs = _results[k]
        ok = all(outcome == "passed" for _, outcome in subs)
        failed = [name for name, outcome in subs if outcome != "passed"]
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}"
        if failed:
            line += f"  (failed: {', '.join(failed)})"
        terminalreporter.write_line(line)
