import math

import numpy as np
import pytest

from billiard_zeta.orbits import orbit_table
from billiard_zeta.realize import Realizer
from billiard_zeta.symbolic import alternation
from billiard_zeta.thermo import (PressureModel, abscissa_from_model, abscissa_s0,
                                  f_g_of_window, period_g_sum, sandwich_check, sinai_chi)
from billiard_zeta.zeta import zeta_abscissa
from conftest import LOG_5_2R6


def test_two_disk_weights(two):
    c = f_g_of_window(two, alternation(1, 2, 7))
    assert c.f == pytest.approx(4, abs=1e-12)
    assert c.g == pytest.approx(-0.5 * LOG_5_2R6, abs=1e-10)
    c = f_g_of_window(two, (1, 2), cyclic=True)
    assert c.g == pytest.approx(-0.5 * LOG_5_2R6, abs=1e-13)


def test_three_disk_weights_depth(three):
    d = []
    for k in (1, 2, 3, 4):
        w = (1, 2) * k + (1,) + (2, 1) * k
        a = f_g_of_window(three, w, center=2 * k, pad=4)
        b = f_g_of_window(three, (3,) + w[1:], center=2 * k, pad=4)
        d.append(abs(a.f - b.f))
    assert d[0] > 0
    assert all(x > y for x, y in zip(d, d[1:]))


def test_sinai_chi(two, three):
    R = Realizer(two, pad=8)
    seq = alternation(1, 2, 30)
    c1, c2, _, _ = sinai_chi(R, seq, 10, 6)
    assert abs(c1) < 1e-12 and abs(c2) < 1e-9
    assert sinai_chi(R, seq, 10, 0)[:2] == (0.0, 0.0)
    R3 = Realizer(three, pad=8)
    seq = (3, 1, 3, 2, 1, 2, 3, 1, 2, 3, 2, 1, 3, 2, 3, 1) + alternation(2, 1, 20)
    a = sinai_chi(R3, seq, 6, 6)[0]
    b = sinai_chi(R3, seq, 6, 12)[0]
    assert abs(a - b) < 0.1 ** 5


def test_constant_weights():
    for k in (2, 3, 4):
        m = PressureModel.constant(k, 3, f=2.0)
        assert m.value(0.3) == pytest.approx(math.log(k - 1) - 0.6, abs=1e-12)
        if k > 2:
            assert abscissa_from_model(m) == pytest.approx(math.log(k - 1) / 2, abs=1e-11)
            r = sandwich_check(m)
            assert r.lower == pytest.approx(r.s0, abs=1e-6) and r.upper == pytest.approx(r.s0, abs=1e-6)


def test_two_disk_pressure(two):
    m = PressureModel.from_scene(two, 4)
    for tau in (-0.5, 0.0, 0.7):
        assert m.value(tau) == pytest.approx(-4 * tau - 0.5 * LOG_5_2R6, abs=1e-10)
    assert abscissa_s0(two, 4) == pytest.approx(-LOG_5_2R6 / 8, abs=1e-10)
    r = sandwich_check(m)
    assert r.ok and abs(r.margin_lower) < 1e-6 and abs(r.margin_upper) < 1e-6


def test_three_disk_pressure(three, three_model):
    vals = [PressureModel.from_scene(three, n).value(0.0) for n in (2, 4)]
    assert abs(vals[0] - vals[1]) < 0.05
    s0 = three_model.s0()
    assert s0 < 0
    assert abs(s0 - zeta_abscissa(orbit_table(three, 12))) < 1e-3
    r = sandwich_check(three_model, s0)
    assert r.ok and r.margin_lower > 0 and r.margin_upper > 0


def test_period_g_sum(three, three_table):
    for o in three_table.truncated(4):
        assert period_g_sum(three, o.word) == pytest.approx(o.delta, rel=1e-9)
