import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call" or report.failed:
        prev = _results.get(num)
        status = "FAIL" if report.failed or (prev and prev[1] == "FAIL") else "PASS"
        _results[num] = (m.group(2), status, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        name, status, took = _results[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}  {name.replace('_', ' ')} ({took:.1f}s)")
