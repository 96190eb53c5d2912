import os

import pytest

from mr_algebra import get_context


@pytest.fixture(scope="session")
def q2():
    return get_context(2, 0)


@pytest.fixture(scope="session")
def q3():
    return get_context(3, 0)


@pytest.fixture(scope="session")
def q4():
    return get_context(4, 0)


@pytest.fixture(scope="session")
def f2_2():
    return get_context(2, 2)


@pytest.fixture(scope="session")
def f3_3():
    return get_context(3, 3)


@pytest.fixture(autouse=True)
def default_cap(monkeypatch):
    """Every test starts from the configured cap, whatever a previous test set"""
    monkeypatch.delenv("MRW_CAP_N", raising=False)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    # session-scoped contexts are set up before the function-scoped default_cap,
    # so drop a cap leaked by the CLI's --cap before any fixture runs
    os.environ.pop("MRW_CAP_N", None)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the n=5 tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: n=5 checks, skipped unless --runslow is given")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
