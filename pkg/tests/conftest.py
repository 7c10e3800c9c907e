import pytest
from hypothesis import HealthCheck, settings

from symmoments.eigenform import delta_coefficients

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def delta_1e4():
    return delta_coefficients(10**4)


@pytest.fixture(scope="session")
def delta_1e5():
    return delta_coefficients(10**5)


@pytest.fixture(scope="session")
def delta_1e6():
    return delta_coefficients(10**6)


# -- acceptance reporting: one pass/fail line per criterion ----------------

_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or not (report.when == "call" or report.failed):
        return
    number, title = marker.args
    previous_ok = _CRITERIA.get(number, (title, True))[1]
    _CRITERIA[number] = (title, previous_ok and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
