"""Shared fixtures: project root on sys.path, sextic configurations, ledger capture."""

import os
import sys
import logging

import pytest

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, PROJECT_ROOT)

from modules import sextic
from modules.logger import LedgerCollector
from modules.settings import load_config


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: grid-convergence checks that take more than a few seconds")


@pytest.fixture(scope="session")
def settings():
    return load_config()


@pytest.fixture
def figure_config():
    """B0 = 100 with x0² = 1."""
    return sextic.figure_config()


@pytest.fixture
def moderate_config():
    """B0 = 1, G0/B0 = 2.06: wide wells that small grids resolve."""
    return sextic.SexticConfig(1.0, 2.06)


@pytest.fixture
def ledger_records():
    """Ledger entries (as dicts) emitted while the test runs."""
    collector = LedgerCollector()
    ledger = logging.getLogger("ledger")
    ledger.setLevel(logging.DEBUG)
    ledger.addHandler(collector)
    sextic.clear_caches()
    yield collector.entries
    ledger.removeHandler(collector)
