import math

import numpy as np
import pytest

from maxrect.corpus import holed_square, l_shape, random_star, square
from maxrect.geom import RectSpec, orient, same_rect
from maxrect.polygon import InvalidPolygon, PolygonShape, contains_boxes, contains_rect


def test_orientation_and_reflex():
    p = l_shape()
    assert p.k == 1 and list(p.reflex_ids) == [3]
    assert square().is_convex
    assert not holed_square().is_convex


def test_from_rings_fixes_orientation():
    p = PolygonShape.from_rings([(0, 0), (0, 1), (1, 1), (1, 0)], [[(0.4, 0.4), (0.6, 0.4), (0.6, 0.6), (0.4, 0.6)]])
    assert p.report().ok


def test_self_intersection_rejected():
    p = PolygonShape.from_rings([(0, 0), (1, 1), (1, 0), (0, 1)])
    with pytest.raises(InvalidPolygon):
        p.require_valid()


def test_exact_orient_fallback():
    assert orient((0, 0), (1, 1), (2, 2)) == 0
    assert orient((0, 0), (1, 0), (0.5, 1e-300)) == 1


def test_classify():
    p = holed_square()
    codes = p.classify([(0.1, 0.1), (0.5, 0.5), (1.5, 0.5), (0.0, 0.5)])
    assert list(codes) == [1, -1, -1, 0]


def test_contains_rect_basic():
    p = l_shape()
    assert contains_rect(p, RectSpec((1.0, 0.5), 0.0, 2.0, 1.0))
    assert not contains_rect(p, RectSpec((1.0, 1.0), 0.0, 2.0, 2.0))
    assert not contains_rect(holed_square(), RectSpec((0.5, 0.5), 0.0, 0.9, 0.9))


def test_contains_boxes_matches_scalar(rng):
    for _ in range(5):
        p = random_star(rng, 15)
        th = rng.uniform(0, 2 * math.pi, 300)
        c = np.cos(th)
        s = np.sin(th)
        cx, cy = rng.uniform(-0.4, 0.4, (2, 300))
        w, h = rng.uniform(0.05, 0.8, (2, 300))
        fx, fy = cx * c + cy * s, -cx * s + cy * c
        got = contains_boxes(p, th, fx - w / 2, fx + w / 2, fy - h / 2, fy + h / 2)
        want = [contains_rect(p, RectSpec((x, y), t, a, b)) for x, y, t, a, b in zip(cx, cy, th, w, h)]
        assert list(got) == want


def test_rect_canonical_and_same():
    r = RectSpec((0, 0), math.pi / 2 + 0.1, 2.0, 1.0)
    c = r.canonical()
    assert 0 <= c.theta < math.pi / 2
    assert (c.width, c.height) == (1.0, 2.0)
    assert same_rect(r, c, 1e-12)
