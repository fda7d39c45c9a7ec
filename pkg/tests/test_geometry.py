import math

import numpy as np
import pytest

from billiard_zeta.geometry import (Disk, GeometryError, Scene, boundary_curvature,
                                    boundary_point, check_no_eclipse, outward_normal)

UNIT = Disk((0, 0), 1)
RIGHT = Disk((6, 0), 1)


@pytest.mark.parametrize("disk,t,expected", [
    (UNIT, 0.0, (1, 0)), (UNIT, math.pi, (-1, 0)), (RIGHT, math.pi, (5, 0))])
def test_boundary_point(disk, t, expected):
    np.testing.assert_allclose(boundary_point(disk, t), expected, atol=1e-15)


@pytest.mark.parametrize("disk,p,expected", [
    (UNIT, (1, 0), (1, 0)), (UNIT, (0, 1), (0, 1)), (RIGHT, (5, 0), (-1, 0))])
def test_outward_normal(disk, p, expected):
    np.testing.assert_allclose(outward_normal(disk, p), expected, atol=1e-15)


def test_outward_normal_off_boundary():
    with pytest.raises(GeometryError):
        outward_normal(UNIT, (0.5, 0))


@pytest.mark.parametrize("r,k", [(1, 1), (2, 0.5), (0.25, 4)])
def test_boundary_curvature(r, k):
    assert boundary_curvature(Disk((0, 0), r)) == k


def test_bad_radius():
    with pytest.raises(GeometryError):
        Disk((0, 0), 0)
    with pytest.raises(GeometryError):
        Disk((0, 0), -1)


def test_no_eclipse_cases(two, three):
    assert check_no_eclipse(three).ok
    assert check_no_eclipse(two).ok
    assert check_no_eclipse(two).triples == ()
    col = Scene([Disk((0, 0), 1), Disk((4, 0), 1), Disk((8, 0), 1)], check_h=False)
    rep = check_no_eclipse(col)
    assert not rep.ok
    assert any(v[2] == 2 for v in rep.violations)
    with pytest.raises(GeometryError):
        Scene([Disk((0, 0), 1), Disk((4, 0), 1), Disk((8, 0), 1)])


def test_overlap_rejected():
    with pytest.raises(GeometryError):
        Scene([Disk((0, 0), 1), Disk((1.5, 0), 1)])


def test_scene_roundtrip(three):
    s = Scene.from_dict(three.to_dict())
    assert s.kappa0 == 3
    np.testing.assert_array_equal(s.centers, three.centers)
