import json
from pathlib import Path

import pytest

from vfrac.corekernel import validate_params

HERE = Path(__file__).parent
FROZEN = json.loads((HERE / "oracles" / "frozen.json").read_text())


def oracle_params(name: str):
    return validate_params(FROZEN["params"][name])


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


@pytest.fixture
def unit():
    return validate_params((1, 1, 1, 1, 1, 1, 1, 1))


@pytest.fixture
def unit_half():
    return validate_params((1, 1, 1, 1, 1, 1, 0.5, 1))


@pytest.fixture
def mu_two_half():
    # lambda = 1/2, mu = 2
    return validate_params((2, 1, 1, 1, 1, 1, 0.5, 1))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
