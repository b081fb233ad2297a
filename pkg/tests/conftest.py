from __future__ import annotations

import random

import pytest

from braided_gauge.anyonic import AnyonicModel, CompositeModel, truncated_line

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def anyonic() -> AnyonicModel:
    return AnyonicModel()


@pytest.fixture(scope="session")
def composite() -> CompositeModel:
    return CompositeModel(truncated_line("x", degree=0, order=2, name="N"))


@pytest.fixture
def rng(request) -> random.Random:
    # one stream per test, stable across runs and test selection
    return random.Random(request.node.nodeid)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
    passed = sum(1 for s, _ in _CRITERIA.values() if s == "PASS")
    terminalreporter.write_line(f"{passed}/{len(_CRITERIA)} criteria pass")
