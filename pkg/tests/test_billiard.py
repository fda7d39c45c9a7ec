import math

import numpy as np
import pytest

from billiard_zeta.billiard import (Escape, FixedEnds, FrontLaunched, Periodic, PhasePoint,
                                    billiard_map, check_segment, first_intersection,
                                    fit_shadowing, reflect, segment_for_word,
                                    shadowing_pairs, trace)
from billiard_zeta.geometry import GeometryError
from billiard_zeta.orbits import find_orbit

R2 = math.sqrt(2) / 2


@pytest.mark.parametrize("u,nu,out", [
    ((1, 0), (-1, 0), (-1, 0)), ((1, 0), (0, 1), (1, 0)), ((R2, -R2), (0, 1), (R2, R2))])
def test_reflect(u, nu, out):
    np.testing.assert_allclose(reflect(u, nu), out, atol=1e-15)


def test_first_intersection(two):
    k, p, s = first_intersection((3, 0), (1, 0), two)
    assert k == 2 and s == pytest.approx(2) and np.allclose(p, (5, 0))
    assert first_intersection((3, 3), (0, 1), two) is Escape
    k, p, s = first_intersection((-3, 0), (1, 0), two)
    assert k == 1 and s == pytest.approx(2) and np.allclose(p, (-1, 0))


def test_inside_origin_rejected(two):
    with pytest.raises(GeometryError):
        first_intersection((0, 0), (1, 0), two)


def test_billiard_map(two, three):
    q = billiard_map(PhasePoint(1, np.array([1.0, 0]), np.array([1.0, 0])), two)
    assert q.obstacle == 2
    np.testing.assert_allclose(q.point, (5, 0))
    np.testing.assert_allclose(q.direction, (-1, 0))
    assert billiard_map(PhasePoint(1, np.array([0, 1.0]), np.array([0, 1.0])), two) is Escape
    c1, c3 = three.centers[0], three.centers[2]
    u = (c3 - c1) / np.linalg.norm(c3 - c1)
    q = billiard_map(PhasePoint(1, c1 + u, u), three)
    assert q.obstacle == 3
    np.testing.assert_allclose(q.point, c3 - u, atol=1e-12)


def test_trace(two, three):
    tr = trace(PhasePoint(1, np.array([1.0, 0]), np.array([1.0, 0])), two, 5)
    assert tuple(tr.itinerary) == (1, 2, 1, 2, 1, 2)
    np.testing.assert_allclose(tr.flight_lengths, 4.0)
    assert not tr.escaped
    tr = trace(PhasePoint(1, np.array([0, 1.0]), np.array([0, 1.0])), two, 5)
    assert tr.escaped and len(tr.itinerary) <= 1
    orb = find_orbit(three, (1, 2, 3))
    p0, p1 = orb.points[0], orb.points[1]
    u = (p1 - p0) / np.linalg.norm(p1 - p0)
    rot = np.array([[math.cos(1e-9), -math.sin(1e-9)], [math.sin(1e-9), math.cos(1e-9)]])
    tr = trace(PhasePoint(1, p0, rot @ u), three, 6)
    assert tuple(tr.itinerary[:3]) == (1, 2, 3)


def test_segment_fixed_and_launched(two):
    seg = segment_for_word(two, (1, 2), FixedEnds(start_angle=0.0, end_angle=math.pi))
    np.testing.assert_allclose(seg.points, [(1, 0), (5, 0)], atol=1e-12)
    seg = segment_for_word(two, (1, 2), FrontLaunched((-1.0, 0.0)))
    np.testing.assert_allclose(seg.points, [(1, 0), (5, 0)], atol=1e-12)


def test_triangle_orbit_symmetric(three):
    seg = segment_for_word(three, (1, 2, 3), Periodic())
    g = three.centers.mean(axis=0)
    for c, p in zip(three.centers, seg.points):
        b = c + (g - c) / np.linalg.norm(g - c)
        assert np.linalg.norm(p - b) < 1e-10
    check_segment(three, seg, cyclic=True)


def test_shadowing_small(three):
    dev = shadowing_pairs(three, n_pairs=10, length=20, seed=1)
    C, a = fit_shadowing(dev)
    assert 0 < a < 1
    i = np.arange(20)
    assert np.all(dev <= C * (a ** i + a ** (19 - i)) + 1e-10)
