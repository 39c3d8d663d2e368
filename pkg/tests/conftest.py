import random
import sys

import pytest
from hypothesis import HealthCheck, settings

import metaproof.theory as TH

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def pure():
    return TH.lookup("Pure")


@pytest.fixture(scope="session")
def ipl():
    return TH.lookup("IPL")


@pytest.fixture(scope="session")
def ifol():
    return TH.lookup("IFOL")


@pytest.fixture
def rng():
    return random.Random(20260816)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdict lines after capture is released."""
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None) if mod else None
    if not verdicts:
        return
    terminalreporter.write_sep("-", "acceptance verdicts")
    for line in verdicts:
        terminalreporter.write_line(line)
