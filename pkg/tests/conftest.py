"""Shared fixtures: one million-limit sieve per session, plus suite timing."""

import time

import pytest

from gpflab.sieve import build_sieve


def pytest_configure(config):
    config._suite_t0 = time.monotonic()


def pytest_collection_modifyitems(config, items):
    # run the acceptance module last so its wall-clock check covers the suite
    acceptance = [it for it in items if "test_acceptance" in it.nodeid]
    rest = [it for it in items if "test_acceptance" not in it.nodeid]
    items[:] = rest + acceptance


@pytest.fixture(scope="session")
def sieve_m():
    return build_sieve(1_000_000)


@pytest.fixture(scope="session")
def sieve_10k():
    return build_sieve(10_000)
