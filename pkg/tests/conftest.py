import numpy as np
import pytest

from acceptance_log import VERDICTS
from wdbc_ml.dataset import load_wdbc


@pytest.fixture(scope="session")
def wdbc():
    return load_wdbc()


@pytest.fixture
def rng():
    return np.random.default_rng(20180202)


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[n])
