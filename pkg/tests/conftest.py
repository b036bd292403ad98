import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for the acceptance criterion named by the test."""
    number, title = request.node.get_closest_marker("criterion").args
    _CRITERIA[number] = [title, "FAIL"]
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        _CRITERIA[number][1] = "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"CRITERION {number}: {status}  {title}")
