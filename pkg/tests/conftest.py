import sys
from pathlib import Path

# helper modules (strategies, oracles) live next to the tests
sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, str] = {}
_outcomes: dict[int, list[bool]] = {}
_of_item: dict[str, int] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            number, title = m.args
            _criteria[number] = title
            _of_item[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _of_item.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(number, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        runs = _outcomes.get(number, [])
        verdict = "PASS" if runs and all(runs) else "FAIL"
        terminalreporter.write_line(f"C{number} {verdict} {_criteria[number]}")
