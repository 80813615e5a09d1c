"""Shared fixtures and the --runslow switch"""

import pytest

from becorder.polynomials import reliability_poly


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run desk-scale tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rs_b_diff():
    """I_10 - I_01 = 2x^2 (1 - x)^2"""
    return reliability_poly("10") - reliability_poly("01")


@pytest.fixture
def incomparable_pair():
    return "100001", "011000"
