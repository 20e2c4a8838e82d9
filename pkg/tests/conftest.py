import os
from importlib import resources
from pathlib import Path

import pytest

from ucpw.dataset_io import load_dataset

CRITERIA = {}


def data_path(name):
    return Path(resources.files("ucpw") / "data" / name)


def published_ochodek_path():
    """The transcribed 14-project Ochodek dataset, if one has been supplied."""
    env = os.environ.get("UCPW_OCHODEK_CSV")
    if env:
        return Path(env)
    return data_path("ochodek.csv")


def published_industrial_path():
    """Raw Industrial dataset, if the user has access to it."""
    env = os.environ.get("UCPW_INDUSTRIAL_CSV")
    return Path(env) if env else data_path("industrial.csv")


@pytest.fixture(scope="session")
def ochodek_surrogate():
    return load_dataset(data_path("ochodek_surrogate.csv"))


@pytest.fixture(scope="session")
def industrial_surrogate():
    return load_dataset(data_path("industrial_surrogate.csv"))


@pytest.fixture(scope="session")
def education_surrogate():
    return load_dataset(data_path("education_surrogate.csv"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = CRITERIA.get(num, (True, ""))
        ok = prev[0] and rep.outcome == "passed"
        CRITERIA[num] = (ok, marker.kwargs.get("title", ""))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        ok, title = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")
