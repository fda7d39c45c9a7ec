import math

import numpy as np
import pytest

from billiard_zeta.geometry import GeometryError, boundary_point
from billiard_zeta.symbolic import alternation
from billiard_zeta.wkb import (BoundaryData, SeriesTruncation, U_sum, bump, default_data,
                               operator_side, phi_series, thm3_gap, u_term, w0_partial,
                               words_for)
from conftest import KAPPA_STAR

X2 = np.array([5.0, 0.0])


def _x3(three):
    return boundary_point(three.disk(2), math.radians(150))


def test_bump():
    assert bump(0.0) == 1.0 and bump(1.0) == 0.0 and bump(-1.5) == 0.0
    assert 0 < bump(0.5) < 1


def test_data_validation(three):
    with pytest.raises(GeometryError):
        BoundaryData(eta=0.99, mu=0.05)
    with pytest.raises(ValueError):
        BoundaryData(width=2.0)
    d = default_data(three)
    assert d.check(three) >= math.sqrt(2 * d.mu - d.mu ** 2)


def test_zero_data(two, three):
    d = default_data(two, height=0.0)
    assert u_term(two, d, (1, 2), X2, 0.3).value == 0
    assert U_sum(two, d, 1, 2, X2, 0.3) == 0
    assert np.all(w0_partial(two, d, 2, X2, 0.3, 3).partial == 0)
    d3 = default_data(three, height=0.0)
    x = _x3(three)
    assert operator_side(three, d3, 2, 2, x, 0.1).value == 0
    assert thm3_gap(three, d3, 2, 2, x, 0.1).gap == 0


def test_two_disk_term(two):
    t = u_term(two, default_data(two), (1, 2), X2, 0.3)
    assert t.value == pytest.approx(-math.exp(-0.9) / 3, rel=1e-14)
    assert t.phase == pytest.approx(3.0, abs=1e-14)


def test_sign_alternation(two):
    d = default_data(two)
    a = u_term(two, d, (1, 2), X2, 0.2)
    b = u_term(two, d, (1, 2, 1), np.array([1.0, 0.0]), 0.2)
    assert a.amplitude > 0 and b.amplitude > 0
    assert a.value.real * b.value.real < 0


def test_single_word_classes(two):
    d = default_data(two)
    for n in (1, 3):
        w = alternation(1, 2, n + 3)
        assert U_sum(two, d, n, 2, X2, 0.2) == u_term(two, d, w, X2, 0.2).value
        op = operator_side(two, d, n, 2, X2, 0.2)
        assert len(op.terms) == 1
        t = op.terms[0]
        assert op.value == pytest.approx((-1) ** n * t.weight * t.W, rel=1e-15)


def test_two_disk_series_vanish(two):
    d = default_data(two, launch_curvature=KAPPA_STAR)
    v = phi_series(two, d, (1, 2, 1, 2), (2, 1), X2, 0.2 + 1j)
    assert abs(v.phi_plus) < 1e-12 and abs(v.phi_minus) < 1e-12 and abs(v.chi) < 1e-12
    z = phi_series(two, d, (1, 2, 1, 2), (2, 1), X2, 0.2, trunc=0)
    assert z.phi_plus == z.phi_minus == z.chi == 0


def test_two_disk_w0_ratio(two):
    s0 = -math.log(5 + 2 * math.sqrt(6)) / 8
    d = default_data(two, launch_curvature=KAPPA_STAR)
    ps = w0_partial(two, d, 2, X2, s0 + 0.3, 5)
    c = ps.cauchy[ps.cauchy > 0]
    np.testing.assert_allclose(c[1:] / c[:-1], math.exp(-2.4), rtol=1e-12)


def test_phi_plus_depth(three):
    d = default_data(three)
    word = (1, 2, 3, 1, 2)
    x = _x3(three)
    a = phi_series(three, d, word, None, x, 0.1, trunc=8).phi_plus
    b = phi_series(three, d, word, None, x, 0.1, trunc=12).phi_plus
    assert abs(a - b) < 0.2 ** 8


def test_truncation_validation():
    with pytest.raises(ValueError):
        SeriesTruncation(plus=0)
    assert SeriesTruncation().doubled().plus == 32


def test_identity_small_n(three):
    d = default_data(three)
    r = thm3_gap(three, d, 2, 2, _x3(three), -0.1215 + 1j)
    assert r.identity <= 1e-10
    assert r.gap < 1e-3
    assert r.words == len(words_for(three, 2, 2))
