import math

import numpy as np
import pytest

from maxrect.corpus import l_shape, random_holed, random_star
from maxrect.geom import RectSpec
from maxrect.polygon import contains_rect
from maxrect.staircase import (
    OutsideInterval,
    StaircaseSweep,
    build_staircase,
    frame_axes,
    lower_left_range,
    staircase_pieces,
)


def test_l_shape_single_step():
    p = l_shape()
    s = build_staircase(p, 3, 0.3)
    assert len(s.steps) == 1 and s.tips(p) == []
    assert (s.eta_edge, s.delta_edge) == (5, 0)


def test_precondition_errors():
    p = l_shape()
    with pytest.raises(OutsideInterval):
        build_staircase(p, 0, 0.3)
    with pytest.raises(OutsideInterval):
        build_staircase(p, 3, 3.0)


def _left_x(pieces, y, p, phi, eta_x):
    X, Y = frame_axes(phi)
    for pc in pieces:
        if pc.y_bot - 1e-12 <= y <= pc.y_top + 1e-12:
            if pc.kind == "V":
                return p.verts[pc.owner] @ X if pc.owner >= 0 else eta_x
            a, b = p.E0[pc.edge], p.E1[pc.edge]
            s = (y - a @ Y) / ((b - a) @ Y)
            return (a + s * (b - a)) @ X
    return None


def _left_x_oracle(p, u, phi, y):
    X, Y = frame_axes(phi)
    ux, uy = p.verts[u] @ X, p.verts[u] @ Y
    lo, hi = ux - 3 * p.diameter, ux
    for _ in range(50):
        m = 0.5 * (lo + hi)
        if contains_rect(p, RectSpec.from_frame_box(m, ux, y, uy, phi), tol=1e-9):
            hi = m
        else:
            lo = m
    return hi


def test_frontier_matches_containment(rng):
    """The staircase is the left frontier of rectangles anchored at u."""
    bad = 0
    for trial in range(6):
        p = random_holed(rng, 12) if trial % 3 == 0 else random_star(rng, int(rng.integers(8, 20)))
        for u in p.reflex_ids[:3]:
            lo, hi = lower_left_range(p, u)
            phi = rng.uniform(lo + 1e-3, hi - 1e-3)
            _, _, te, td, pieces = staircase_pieces(p, u, phi)
            X, Y = frame_axes(phi)
            uy = p.verts[u] @ Y
            for y in rng.uniform(uy - td, uy, 4):
                a = _left_x(pieces, y, p, phi, p.verts[u] @ X - te)
                if a is None or abs(a - _left_x_oracle(p, u, phi, y)) > 1e-6:
                    bad += 1
    assert bad == 0


def test_maintained_equals_rebuilt_small(rng):
    for _ in range(3):
        p = random_star(rng, 20)
        for u in p.reflex_ids[:4]:
            sw = StaircaseSweep(p, int(u))
            sw.run()
            for phi in rng.uniform(sw.lo, sw.hi, 25):
                assert sw.state_at(phi).signature() == build_staircase(p, int(u), phi).signature()


def test_trace_lines():
    from maxrect.staircase import SweepTrace

    tr = SweepTrace()
    sw = StaircaseSweep(l_shape(), 3, trace=tr)
    sw.run()
    assert 0 < len(tr.lines) <= sw.stats.events
    th = [float(s.split()[0]) for s in tr.lines]
    assert th == sorted(th) and all(math.isfinite(t) for t in th)
