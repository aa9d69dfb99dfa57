import math

import numpy as np
import pytest

from maxrect.corpus import FIXTURES, random_star
from maxrect.geom import RectSpec
from maxrect.oracle import axis_aligned_best, sweep_oracle, verify
from maxrect.polygon import contains_rect


@pytest.mark.parametrize(
    "name,theta,bound",
    [("square", 0.0, 0.96), ("diamond", math.pi / 4, 1.9), ("l_shape", 0.0, 1.92)],
)
def test_axis_aligned_bounds(name, theta, bound):
    p = FIXTURES[name]()
    res = axis_aligned_best(p, theta, 0.01)
    assert res.area_lower_bound >= bound
    assert res.area_lower_bound == pytest.approx(res.rect.area)
    assert contains_rect(p, res.rect)


def test_axis_aligned_errors():
    p = FIXTURES["square"]()
    with pytest.raises(ValueError):
        axis_aligned_best(p, 0.0, 0.0)
    with pytest.raises(ValueError):
        axis_aligned_best(p, 0.0, 0.6)


def test_sweep_examples():
    assert sweep_oracle(FIXTURES["square"](), 4, 0.01).area_lower_bound >= 0.96
    assert sweep_oracle(FIXTURES["diamond"](), 2, 0.01).area_lower_bound >= 1.9
    tri = sweep_oracle(FIXTURES["right_triangle"](), 360, 0.005).area_lower_bound
    assert 0.25 - 0.02 <= tri <= 0.25
    with pytest.raises(ValueError):
        sweep_oracle(FIXTURES["square"](), 0, 0.01)


def test_sweep_monotone():
    p = FIXTURES["pentagon"]()
    a = sweep_oracle(p, 8, 0.02).area_lower_bound
    b = sweep_oracle(p, 16, 0.02).area_lower_bound
    c = sweep_oracle(p, 16, 0.01).area_lower_bound
    assert a <= b + 1e-12
    # halving h refines the grid, so nothing found before is lost
    assert b <= c + 1e-12


def test_verify_examples():
    sq = FIXTURES["square"]()
    assert verify(sq, RectSpec((0.5, 0.5), 0.0, 1.0, 1.0)) == (True, "ok")
    ok, why = verify(sq, RectSpec((0.505, 0.5), 0.0, 1.01, 1.0))
    assert not ok and why == "right side exits P"
    hs = FIXTURES["holed_square"]()
    x0, y0, x1, y1 = hs.bbox
    ok, why = verify(hs, RectSpec(((x0 + x1) / 2, (y0 + y1) / 2), 0.0, 0.9 * (x1 - x0), 0.9 * (y1 - y0)))
    assert not ok and why == "hole 0 intersects interior"


def test_verify_agrees_with_contains(rng):
    # 10^4 random (polygon, rect) pairs
    disagree = 0
    for _ in range(20):
        p = random_star(rng, int(rng.integers(6, 20)))
        x0, y0, x1, y1 = p.bbox
        for _ in range(500):
            c = (rng.uniform(x0, x1), rng.uniform(y0, y1))
            w, h = rng.uniform(0.01, 0.5, 2) * p.diameter
            r = RectSpec(c, rng.uniform(0, np.pi), w, h)
            disagree += verify(p, r)[0] != contains_rect(p, r)
    assert disagree == 0
