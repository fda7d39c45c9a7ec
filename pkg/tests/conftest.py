import math

import pytest

from billiard_zeta.geometry import three_disks, two_disks

LOG_5_2R6 = math.log(5 + 2 * math.sqrt(6))
KAPPA_STAR = 1 + math.sqrt(6) / 2


@pytest.fixture(scope="session")
def two():
    return two_disks()


@pytest.fixture(scope="session")
def three():
    return three_disks()


@pytest.fixture(scope="session")
def three_table(three):
    from billiard_zeta.orbits import orbit_table
    return orbit_table(three, 6)


@pytest.fixture(scope="session")
def three_model(three):
    from billiard_zeta.thermo import PressureModel
    return PressureModel.from_scene(three, 6)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
