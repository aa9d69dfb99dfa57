import math

import numpy as np
import pytest

from maxrect.corpus import l_shape, random_holed, random_star, square, u_shape
from maxrect.polygon import segments_in_polygon
from maxrect.rayvis import build_event_map, mutually_visible, shoot, shoot_many, visibility_region


def test_shoot_square():
    f = shoot(square(), (0.5, 0.5), (-1, 0))
    assert f.foot == pytest.approx((0.0, 0.5))
    f = shoot(square(), (0.5, 0.5), (0, -1))
    assert f.foot == pytest.approx((0.5, 0.0))


def test_shoot_l_shape():
    p = l_shape()
    f = shoot(p, (0.5, 1.5), (1, 0))
    assert f.foot == pytest.approx((1.0, 1.5))
    a, b = p.E0[f.edge], p.E1[f.edge]
    assert {tuple(a), tuple(b)} == {(1.0, 1.0), (1.0, 2.0)}


def test_feet_on_boundary_and_segments_inside(rng):
    for _ in range(4):
        p = random_holed(rng, 14) if rng.uniform() < 0.5 else random_star(rng, 20)
        origins = rng.uniform(-0.3, 0.3, (100, 2))
        origins = origins[p.classify(origins) == 1]
        a = np.arange(8) * (math.pi / 4) + 0.01
        O = np.repeat(origins, 8, axis=0)
        D = np.tile(np.column_stack((np.cos(a), np.sin(a))), (len(origins), 1))
        t, e = shoot_many(p, O, D)
        feet = O + t[:, None] * D
        assert (e >= 0).all()
        assert (p.classify(feet, tol=1e-9) == 0).all()
        assert segments_in_polygon(p, O, feet, 1e-9).all()


def test_visibility_convex_is_whole():
    vr = visibility_region(square(), 0)
    assert vr.polygon().area == pytest.approx(1.0)


def test_visibility_l_shape():
    p = l_shape()
    assert visibility_region(p, 3).polygon().area == pytest.approx(3.0)
    # from (2,0) the window through (1,1) ends on the top edge at (0,2)
    vr = visibility_region(p, 1)
    want = 3.0 - 0.5  # triangle (1,1),(1,2),(0,2) hidden
    assert vr.polygon().area == pytest.approx(want)


def test_visibility_region_inside(rng):
    p = random_star(rng, 18)
    for v in p.reflex_ids[:3]:
        poly = visibility_region(p, int(v)).polygon()
        pts = rng.uniform(-1, 1, (400, 2))
        from shapely import contains_xy

        sel = pts[contains_xy(poly, pts[:, 0], pts[:, 1])]
        src = np.repeat(p.verts[v][None, :], len(sel), axis=0)
        assert segments_in_polygon(p, src, sel, 1e-9).all()


def test_event_map_shapes():
    em = build_event_map(square())
    assert not em.C and not em.L
    em = build_event_map(l_shape())
    assert not em.C
    assert any(len(v) for (u, e), v in em.L.items() if u == 3)
    p = u_shape()
    assert mutually_visible(p, 4, 5)
    em = build_event_map(p)
    cl = em.C[(4, 5)]
    assert len(cl) > 0 and np.all(np.diff(cl.angles) >= 0)
    for fe in em.L.values():
        assert np.all(np.diff(fe.theta) >= 0)
