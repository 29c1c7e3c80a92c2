import pytest

from dimultiverse.oracle import fixture_path, load_fixture


@pytest.fixture(scope="session")
def g1():
    return load_fixture("g1")


@pytest.fixture(scope="session")
def g2():
    return load_fixture("g2")


@pytest.fixture
def g1_files():
    return str(fixture_path("g1_metadata.csv")), str(fixture_path("g1_edges.csv"))


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    if report.when == "setup" and report.passed:
        return
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    prev = _ACCEPTANCE.get(number)
    if prev is None or prev[1] == "PASS":
        _ACCEPTANCE[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number}. {title}")
