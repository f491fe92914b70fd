import pytest

from mirrordesk.cli import bootstrap_store, load_evaluations
from mirrordesk.graph import MirrorGraph

CLOCK = "2025-01-10T09:00:00+00:00"


@pytest.fixture
def graph():
    g = MirrorGraph(owner_persona="CEO")
    g.advance_clock(CLOCK)
    return g


@pytest.fixture
def store(tmp_path):
    return bootstrap_store(tmp_path / "data")


@pytest.fixture
def evaluations():
    return load_evaluations()


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): top-level acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    line = f"[acceptance] {marker.args[0]}: {'PASS' if rep.passed else 'FAIL'}"
    if reporter is not None:
        reporter.write_line(line)
    else:
        print(line)
