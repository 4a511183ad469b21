import pytest

from nanocasimir import cli

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _criteria.get(report.nodeid)
    if marker is None:
        return
    number, title, outcomes = marker
    outcomes.append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = (mark.args[0], mark.args[1], [])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    by_number = {}
    for number, title, outcomes in _criteria.values():
        entry = by_number.setdefault(number, [title, []])
        entry[1].extend(outcomes)
    terminalreporter.section("acceptance criteria")
    for number in sorted(by_number, key=lambda n: (int(str(n).rstrip("ab")), str(n))):
        title, outcomes = by_number[number]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {number:>3}: {status:7} {title}")


@pytest.fixture(scope="session")
def figure1_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig1")
    assert cli.main(["figure", "1", "--out", str(out)]) == 0
    return out
