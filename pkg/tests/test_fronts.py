import math

import numpy as np
import pytest

from billiard_zeta.fronts import (FrontState, boundary_eikonal, lambda_step, mirror, propagate,
                                  reflect_front, sample_lambda_steps, two_disk_fixed_point,
                                  unstable_front)
from billiard_zeta.geometry import GeometryError
from billiard_zeta.symbolic import alternation, fit_geometric, random_word
from conftest import KAPPA_STAR, LOG_5_2R6


def _front(k):
    return FrontState(np.zeros(2), np.array([1.0, 0.0]), k)


@pytest.mark.parametrize("k,t,out", [(2, 4, 2 / 9), (0, 7, 0), (1, 1, 0.5)])
def test_propagate(k, t, out):
    assert propagate(_front(k), t).curvature == pytest.approx(out, abs=1e-15)


def test_mirror():
    assert reflect_front(_front(0), 1.0, np.array([-1.0, 0.0])).curvature == 2
    assert mirror(2 / 9, 1, 1) == pytest.approx(20 / 9)
    with pytest.raises(GeometryError):
        mirror(1, 1, 0)


def test_fixed_point():
    assert two_disk_fixed_point() == pytest.approx(KAPPA_STAR, abs=1e-15)
    k = 0.0
    for _ in range(100):
        k = mirror(propagate(_front(k), 4).curvature, 1, 1)
    assert k == pytest.approx(KAPPA_STAR, abs=1e-14)


def test_lambda_step():
    assert lambda_step(KAPPA_STAR, 4, 0.5) == pytest.approx(math.exp(-0.5 * LOG_5_2R6), rel=1e-14)
    assert lambda_step(KAPPA_STAR, 4, 0.5) == pytest.approx(0.317837, abs=1e-6)
    assert lambda_step(1, 3, 1) == 0.25
    assert 1 - lambda_step(5.0, 1e-12) < 1e-11


def test_unstable_front_two_disk(two):
    past = alternation(1, 2, 30)
    assert unstable_front(two, past, m=0).curvature == 0
    assert abs(unstable_front(two, past).curvature - KAPPA_STAR) < 1e-10


def test_unstable_front_decay(three):
    rng = np.random.default_rng(3)
    w = tuple(random_word(3, 16, rng))
    while w[-1] != 2 or w[-2] != 1:
        w = tuple(random_word(3, 16, rng))
    ks = [unstable_front(three, w, m=m).curvature for m in range(1, 15)]
    diffs = np.abs(np.diff(ks))
    _, a = fit_geometric(range(1, 14), diffs)
    assert a < 1


def test_lambda_samples(three):
    rec = sample_lambda_steps(three, 500, seed=2)
    assert rec.steps.size == 500
    assert np.all((rec.steps > 0) & (rec.steps < 1))


def test_eikonal_examples():
    e = boundary_eikonal(0.0, 0.4)
    assert e.phi_xn == pytest.approx(math.sqrt(1 - 0.16), abs=1e-15)
    e = boundary_eikonal(0.7, 0.0)
    assert e.phi_xn == pytest.approx(1 / math.sqrt(1 + 0.49), abs=1e-15)
    h, c = 0.5, 0.3
    a = (h * c + math.sqrt(h * h * c * c + (1 - c * c) * (1 + h * h))) / (1 + h * h)
    e = boundary_eikonal(h, c)
    assert e.phi_xn == pytest.approx(a, abs=1e-15)
    assert e.residual <= 1e-14


def test_eikonal_rejects():
    with pytest.raises(GeometryError):
        boundary_eikonal(0.0, 1.0)
    with pytest.raises(GeometryError):
        boundary_eikonal(0.0, 0.95, mu=0.1)
