import math

import numpy as np
import pytest

from maxrect.corpus import FIXTURES, random_convex, random_star
from maxrect.geom import HALF_PI
from maxrect.oracle import sweep_oracle, verify
from maxrect.polygon import InvalidPolygon, PolygonShape, contains_rect
from maxrect.solvers.core import (
    SolveOptions,
    solve,
    solve_convex,
    solve_type_a,
    solve_type_cd,
    solve_type_e,
    solve_type_f,
)
from maxrect.solvers.type_a import type_a_squares


def test_type_a_diamond():
    sq = type_a_squares(FIXTURES["diamond"]())
    best = max(sq, key=lambda t: t[2].area)
    assert {best[0], best[1]} == {0, 2} or {best[0], best[1]} == {1, 3}
    assert best[2].area == pytest.approx(2.0, rel=1e-12)


def test_type_a_unit_square_diagonal():
    sq = type_a_squares(FIXTURES["square"]())
    assert max(r.area for _, _, r in sq) == pytest.approx(1.0, rel=1e-12)


def test_type_a_l_shape_matches_brute_force():
    p = FIXTURES["l_shape"]()
    got = {(a, b) for a, b, _ in type_a_squares(p)}
    conv = [i for i in range(p.n) if not p.reflex_mask[i]]
    want = set()
    from maxrect.geom import RectSpec

    for i, a in enumerate(conv):
        for b in conv[i + 1 :]:
            d = p.verts[b] - p.verts[a]
            side = math.hypot(*d) / math.sqrt(2)
            th = math.atan2(d[1], d[0]) - math.pi / 4
            r = RectSpec(0.5 * (p.verts[a] + p.verts[b]), th, side, side)
            if verify(p, r)[0]:
                want.add((a, b))
    assert got == want
    # the (2,0)-(0,2) diagonal square leaves the L
    assert (1, 5) not in got


def test_solve_type_a_tags():
    cands = solve_type_a(FIXTURES["right_triangle"]())
    assert all(c.source == "A" and c.det_set is not None for c in cands)
    # the diamond's best square also touches the other two vertices
    best = max(solve_type_a(FIXTURES["diamond"]()), key=lambda c: c.area)
    assert best.det_set.type == "F2"
    assert best.area == pytest.approx(2.0, rel=1e-12)


def test_convex_has_no_reflex_candidates():
    p = FIXTURES["hexagon"]()
    assert solve_type_cd(p) == []
    assert solve_type_e(p) == []


@pytest.mark.parametrize(
    "name,area",
    [("square", 1.0), ("right_triangle", 0.25)],
)
def test_type_f_fixtures(name, area):
    cands = solve_type_f(FIXTURES[name]())
    assert max(c.area for c in cands) == pytest.approx(area, rel=1e-6)


def test_type_f_pentagon_against_oracle():
    p = FIXTURES["pentagon"]()
    best = max(c.area for c in solve_type_f(p))
    orc = sweep_oracle(p, 360, p.diameter / 400)
    assert best >= orc.area_lower_bound
    assert best <= orc.area_lower_bound * 1.05


def test_solve_unit_square():
    res = solve(FIXTURES["square"]())
    assert res.best_area == pytest.approx(1.0, abs=1e-9)
    assert len(res.rects) == 1


def test_solve_diamond_orientation():
    res = solve(FIXTURES["diamond"]())
    assert res.best_area == pytest.approx(2.0, abs=1e-9)
    assert res.best.theta % HALF_PI == pytest.approx(math.pi / 4, abs=1e-6)


@pytest.mark.parametrize("name,area,count", [("l_shape", 2.0, 2), ("plus_shape", 3.0, 2)])
def test_solve_multiple_optima(name, area, count):
    p = FIXTURES[name]()
    res = solve(p)
    assert res.best_area == pytest.approx(area, abs=1e-9)
    assert len(res.rects) == count
    for r in res.rects:
        assert r.area == pytest.approx(area, rel=1e-8)
        assert 0 <= r.theta < HALF_PI
        assert contains_rect(p, r)


def test_solve_report_single():
    res = solve(FIXTURES["plus_shape"](), report_all=False)
    assert len(res.rects) == 1


def test_solve_stats_attribution():
    res = solve(FIXTURES["l_shape"]())
    assert sum(res.stats["optima_by_type"].values()) == len(res.rects)
    assert {"A", "engine", "F"} <= set(res.stats)


def test_solve_type_filter():
    p = FIXTURES["diamond"]()
    res = solve(p, types={"A"})
    assert res.best_area == pytest.approx(2.0, abs=1e-9)
    assert res.stats.keys() >= {"A"} and "F" not in res.stats
    with pytest.raises(ValueError):
        solve(p, types={"Z"})


def test_solve_rejects_invalid():
    bowtie = PolygonShape.from_rings([[0, 0], [1, 1], [1, 0], [0, 1]])
    with pytest.raises(InvalidPolygon):
        solve(bowtie)


def test_solve_convex_rejects_reflex():
    with pytest.raises(ValueError):
        solve_convex(FIXTURES["l_shape"]())


@pytest.mark.parametrize("name,area", [("square", 1.0), ("diamond", 2.0), ("right_triangle", 0.25)])
def test_solve_convex_fixtures(name, area):
    assert solve_convex(FIXTURES[name]()).best_area == pytest.approx(area, rel=1e-6)


def test_solve_convex_agrees(rng):
    for _ in range(5):
        p = random_convex(rng, int(rng.integers(5, 15)))
        a = solve(p).best_area
        b = solve_convex(p).best_area
        assert abs(a - b) <= 1e-9 * a


def test_convex_fast_path_option():
    p = FIXTURES["hexagon"]()
    a = solve(p, SolveOptions(convex_fast_path=True)).best_area
    assert a == pytest.approx(math.sqrt(3), rel=1e-9)


def test_solve_random_sound():
    rng = np.random.default_rng(99)
    for _ in range(3):
        p = random_star(rng, 12)
        res = solve(p)
        assert res.rects
        for r in res.rects:
            ok, why = verify(p, r)
            assert ok, why
