import math

import numpy as np
import pytest

from billiard_zeta.geometry import two_disks
from billiard_zeta.orbits import find_orbit, monodromy_eig, orbit_table
from conftest import LOG_5_2R6


def test_two_disk_orbit(two):
    o = find_orbit(two, (1, 2))
    np.testing.assert_allclose(o.points, [(1, 0), (5, 0)], atol=1e-12)
    assert o.T == pytest.approx(8) and o.m == 2 and o.r == 0
    assert o.lam == pytest.approx(49 + 20 * math.sqrt(6), rel=1e-13)
    assert o.delta == pytest.approx(-LOG_5_2R6, rel=1e-13)
    rec = monodromy_eig(o, two)
    assert rec["rel_diff"] < 1e-6


def test_lambda_limit():
    lams = [find_orbit(two_disks(2 + d), (1, 2)).lam for d in (1.0, 0.1, 0.01)]
    assert lams[0] > lams[1] > lams[2] > 1
    assert lams[2] - 1 < 0.5


def test_three_disk_orbits(three):
    assert find_orbit(three, (1, 2)).T == pytest.approx(8, abs=1e-12)
    o = find_orbit(three, (1, 2, 3))
    assert np.ptp(o.flights) < 1e-10
    assert o.r == 1 and o.sign == -1
    assert monodromy_eig(o, three)["rel_diff"] < 1e-6


def test_table_counts(two, three):
    assert len(orbit_table(two, 6)) == 1
    assert len(orbit_table(three, 2)) == 3
    assert len(orbit_table(three, 3)) == 5


def test_table_fd_agreement(three_table):
    assert not three_table.failures
    for o in three_table:
        assert abs(o.lam_fd - o.lam) / o.lam < 1e-6
