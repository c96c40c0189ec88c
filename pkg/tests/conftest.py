from pathlib import Path

import pytest

from thinwall.config import default_config_text, parse_config

DEFAULT_CONFIG = Path(__file__).resolve().parents[1] / "src" / "thinwall" / "data" / "default.toml"


@pytest.fixture(scope="session")
def default_config_path():
    return DEFAULT_CONFIG


@pytest.fixture(scope="session")
def default_config():
    return parse_config(default_config_text())


_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = mark.args
    if rep.failed or (rep.when == "call" and key not in _CRITERIA):
        _CRITERIA[key] = "FAIL" if rep.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}")
