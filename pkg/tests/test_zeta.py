import cmath
import math

import numpy as np
import pytest

from billiard_zeta.orbits import OrbitTable, orbit_table
from billiard_zeta.zeta import (euler_product, factor_lattice, find_zeros, pseudo_pole_lattice,
                                zeta_log)
from conftest import LOG_5_2R6

DELTA = -0.5 * math.log(49 + 20 * math.sqrt(6))


@pytest.fixture(scope="module")
def two_table(two):
    return orbit_table(two, 6)


def test_zeta_log_closed_form(two_table):
    for s in (0.2 + 0.5j, -0.1, 1.0 - 2j):
        q = cmath.exp(-8 * s + DELTA)
        mm = 40
        assert abs(zeta_log(s, two_table, mm) + cmath.log(1 - q)) <= abs(q) ** (mm + 1) / (mm + 1) + 1e-15
    assert abs(zeta_log(50.0, two_table)) < 1e-100
    s_half = (DELTA + math.log(2)) / 8
    assert zeta_log(s_half, two_table, 80) == pytest.approx(math.log(2), abs=1e-15)


def test_euler_product(two_table, three_table):
    s = 0.3 - 1j
    assert euler_product(s, two_table) == pytest.approx(1 - cmath.exp(-8 * s + DELTA), abs=1e-15)
    empty = OrbitTable([], [], 0)
    assert euler_product(s, empty) == 1
    assert find_zeros((-1, 1, -1, 1), empty).zeros == []
    s0 = -0.1216
    for s in (s0 + 0.11, s0 + 0.3 + 2j, s0 + 1 - 5j):
        assert abs(cmath.exp(-zeta_log(s, three_table, 60)) - euler_product(s, three_table)) <= 1e-10


def test_two_disk_zeros(two_table):
    res = find_zeros((-0.4, 0, -3, 3), two_table)
    want = sorted(((DELTA + 2j * math.pi * k) / 8 for k in range(-3, 4)), key=lambda z: z.imag)
    got = sorted(res.locations(), key=lambda z: z.imag)
    assert len(got) == 7
    assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-8


def test_pseudo_poles(two, two_table):
    lat = pseudo_pole_lattice(two, range(-3, 4))
    assert np.allclose(lat.real, -LOG_5_2R6 / 8, atol=1e-12)
    assert np.allclose(np.diff(np.sort(lat.imag)), math.pi / 4)
    assert lat[3] == pytest.approx(-LOG_5_2R6 / 8, abs=1e-12)
    z = find_zeros((-0.4, 0, -3, 3), two_table).locations()
    assert all(min(abs(z - p)) <= 1e-8 for p in lat)


def test_three_disk_zero_stability(three):
    table = orbit_table(three, 8)
    res = find_zeros((-0.6, 0.0, 0.05, 0.5), table)
    assert not res.suspect
    lat = [z for z, _ in factor_lattice(table, (-0.6, 0.0, 0.05, 0.5))]
    for z in res.zeros:
        assert min(abs(z.s - p) for p in lat) < 1e-10
        if math.isfinite(z.stability):
            assert z.stability <= 1e-4


def test_window_touching_real_axis(three_table):
    res = find_zeros((-0.6, 0.0, 0.0, 3.0), three_table)
    lat = [z for z, _ in factor_lattice(three_table, (-0.6, 0.0, -1e-9, 3.0))]
    assert len(res) == len(lat) and not res.suspect
    assert all(min(abs(z.s - p) for p in lat) < 1e-10 for z in res.zeros)
