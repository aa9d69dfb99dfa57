"""Brute-force checks that share no code path with the solvers.

``axis_aligned_best`` rasterizes P in a rotated frame and runs the
largest-rectangle-in-histogram scan over the grid rows.  A cell counts
only when its four corners are inside P and no edge touches it, so the
rectangle it returns is provably contained: a lower bound, never more.
``verify`` tests a rectangle by dense sampling plus exact crossing tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .geom import HALF_PI, RectSpec, rect_corners, to_frame_array
from .polygon import PolygonShape

SIDE_NAMES = ("bottom", "right", "top", "left")


@dataclass(frozen=True)
class OracleResult:
    rect: RectSpec | None
    area_lower_bound: float
    resolution: float
    orientations_sampled: int


def axis_aligned_best(p: PolygonShape, theta: float, h: float) -> OracleResult:
    """Largest grid-aligned all-interior block in the frame at ``theta``."""
    if not h > 0:
        raise ValueError(f"grid resolution must be positive, got {h}")
    q0 = to_frame_array(p.E0, theta)
    q1 = to_frame_array(p.E1, theta)
    x0, y0 = q0.min(axis=0)
    x1, y1 = q0.max(axis=0)
    nx = max(int(math.ceil((x1 - x0) / h)), 1)
    ny = max(int(math.ceil((y1 - y0) / h)), 1)
    gx = x0 + h * np.arange(nx + 1)
    gy = y0 + h * np.arange(ny + 1)
    X, Y = np.meshgrid(gx, gy)
    edges = tuple(np.ascontiguousarray(a) for a in (q0[:, 0], q0[:, 1], q1[:, 0], q1[:, 1]))
    node = (_accel.classify_points(X.ravel(), Y.ravel(), edges, 0.0) > 0).reshape(ny + 1, nx + 1)
    cell = node[:-1, :-1] & node[:-1, 1:] & node[1:, :-1] & node[1:, 1:]
    blocked = np.zeros((ny, nx), dtype=np.bool_)
    _accel.mark_edge_cells(blocked, edges, float(x0), float(y0), float(h))
    cells, r0, r1, c0, c1 = _accel.largest_rect(cell & ~blocked)
    if cells == 0:
        raise ValueError(f"no interior grid cell at resolution {h} (theta={theta})")
    rect = RectSpec.from_frame_box(x0 + c0 * h, x0 + c1 * h, y0 + r0 * h, y0 + r1 * h, theta)
    return OracleResult(rect, rect.area, h, 1)


def sweep_oracle(p: PolygonShape, M: int, h: float) -> OracleResult:
    """Best of ``axis_aligned_best`` over ``M`` uniform orientations in [0, pi/2)."""
    if M < 1:
        raise ValueError(f"need at least one orientation, got M={M}")
    best: OracleResult | None = None
    for k in range(M):
        try:
            r = axis_aligned_best(p, k * HALF_PI / M, h)
        except ValueError:
            continue
        if best is None or r.area_lower_bound > best.area_lower_bound:
            best = r
    if best is None:
        return OracleResult(None, 0.0, h, M)
    return OracleResult(best.rect, best.area_lower_bound, h, M)


def _cross(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def verify(p: PolygonShape, r: RectSpec, samples: int = 1000, tol: float | None = None) -> tuple[bool, str]:
    """Containment of ``r`` in P with a diagnostic naming the first violation."""
    tol = p.eps if tol is None else tol
    C = np.array(rect_corners(r))  # bottom-left, bottom-right, top-right, top-left
    t = np.linspace(0.0, 1.0, samples)
    worst, worst_side = 0, None
    for s in range(4):
        a, b = C[s], C[(s + 1) % 4]
        pts = a + t[:, None] * (b - a)
        bad = int((_accel.classify_points(pts[:, 0], pts[:, 1], p.edges, tol) < 0).sum())
        if bad > worst:
            worst, worst_side = bad, s
    if worst_side is not None:
        return False, f"{SIDE_NAMES[worst_side]} side exits P"
    # proper crossings between rectangle sides and polygon edges
    ex0, ey0, ex1, ey1 = p.edges
    for s in range(4):
        (ax, ay), (bx, by) = C[s], C[(s + 1) % 4]
        d1 = _cross(ax, ay, bx, by, ex0, ey0)
        d2 = _cross(ax, ay, bx, by, ex1, ey1)
        d3 = _cross(ex0, ey0, ex1, ey1, ax, ay)
        d4 = _cross(ex0, ey0, ex1, ey1, bx, by)
        L = math.hypot(bx - ax, by - ay)
        le = np.hypot(ex1 - ex0, ey1 - ey0)
        hit = (d1 * d2 < 0) & (d3 * d4 < 0)
        hit &= (np.minimum(np.abs(d1), np.abs(d2)) > tol * L) & (np.minimum(np.abs(d3), np.abs(d4)) > tol * le)
        if hit.any():
            return False, f"{SIDE_NAMES[s]} side crosses edge {int(np.argmax(hit))}"
    # boundary vertices strictly inside
    q = to_frame_array(p.verts, r.theta)
    c = to_frame_array(np.array([r.center]), r.theta)[0]
    inside = (np.abs(q[:, 0] - c[0]) < r.width / 2 - tol) & (np.abs(q[:, 1] - c[1]) < r.height / 2 - tol)
    if inside.any():
        g = int(np.argmax(inside))
        ring = int(p.ring_of[g])
        if ring > 0:
            return False, f"hole {ring - 1} intersects interior"
        return False, f"vertex {g} lies inside the rectangle"
    return True, "ok"


__all__ = ["OracleResult", "axis_aligned_best", "sweep_oracle", "verify"]
