import pytest

_RESULTS: dict[str, bool] = {}
_ORDER: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None and marker.args[0] not in _ORDER:
            _ORDER.append(marker.args[0])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    ok = not report.failed and not (report.when == "call" and report.skipped)
    _RESULTS[name] = _RESULTS.get(name, True) and ok


def pytest_terminal_summary(terminalreporter):
    ran = [name for name in _ORDER if name in _RESULTS]
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for name in ran:
        terminalreporter.write_line(f"{'PASS' if _RESULTS[name] else 'FAIL'}  {name}")
