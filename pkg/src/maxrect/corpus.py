"""Random and hand-made test polygons."""

from __future__ import annotations

import math

import numpy as np

from .polygon import PolygonShape


def square() -> PolygonShape:
    return PolygonShape([(0, 0), (1, 0), (1, 1), (0, 1)])


def diamond() -> PolygonShape:
    return PolygonShape([(1, 0), (0, 1), (-1, 0), (0, -1)])


def right_triangle() -> PolygonShape:
    return PolygonShape([(0, 0), (1, 0), (0, 1)])


def l_shape() -> PolygonShape:
    return PolygonShape([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


def plus_shape() -> PolygonShape:
    return PolygonShape(
        [(1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (2, 2), (2, 3), (1, 3), (1, 2), (0, 2), (0, 1), (1, 1)]
    )


def u_shape() -> PolygonShape:
    return PolygonShape([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)])


def holed_square(side: float = 1.0, hole: float = 0.2) -> PolygonShape:
    c, h = 0.5 * side, 0.5 * hole
    return PolygonShape(
        [(0, 0), (side, 0), (side, side), (0, side)],
        [[(c - h, c - h), (c - h, c + h), (c + h, c + h), (c + h, c - h)]],
    )

def regular_polygon(n: int, radius: float = 1.0, phase: float = math.pi / 2) -> PolygonShape:
    a = phase + 2 * math.pi * np.arange(n) / n
    return PolygonShape(np.column_stack((radius * np.cos(a), radius * np.sin(a))))


def t_shape() -> PolygonShape:
    return PolygonShape([(1, 0), (2, 0), (2, 2), (3, 2), (3, 3), (0, 3), (0, 2), (1, 2)])


def h_shape() -> PolygonShape:
    return PolygonShape(
        [(0, 0), (1, 0), (1, 1), (2, 1), (2, 0), (3, 0), (3, 3), (2, 3), (2, 2), (1, 2), (1, 3), (0, 3)]
    )


def comb(teeth: int = 3) -> PolygonShape:
    pts = [(0.0, 0.0), (2.0 * teeth - 1, 0.0)]
    for i in reversed(range(teeth)):
        x = 2.0 * i
        pts += [(x + 1, 3.0), (x, 3.0)] if i == teeth - 1 else [(x + 1, 1.0), (x + 1, 3.0), (x, 3.0)]
        if i:
            pts.append((x, 1.0))
    return PolygonShape(pts)


def v_notch() -> PolygonShape:
    return PolygonShape([(0, 0), (4, 0), (4, 2), (2.5, 2), (2, 1), (1.5, 2), (0, 2)])


def notched_rectangle() -> PolygonShape:
    return PolygonShape([(0, 0), (3, 0), (3, 1.4), (2.2, 1.4), (2.2, 2), (0, 2)])


def chevron() -> PolygonShape:
    return PolygonShape([(0, 0), (2, 1), (4, 0), (4, 1.5), (2, 2.5), (0, 1.5)])


def staircase_shape(steps: int = 4) -> PolygonShape:
    pts = [(0.0, 0.0), (float(steps), 0.0)]
    for i in range(steps, 0, -1):
        pts += [(float(i), float(steps - i + 1)), (float(i - 1), float(steps - i + 1))]
    return PolygonShape(pts[:-1])


def frame(side: float = 3.0, hole: float = 2.0) -> PolygonShape:
    a, b = 0.5 * (side - hole), 0.5 * (side + hole)
    return PolygonShape([(0, 0), (side, 0), (side, side), (0, side)], [[(a, a), (a, b), (b, b), (b, a)]])


def two_holes() -> PolygonShape:
    return PolygonShape(
        [(0, 0), (4, 0), (4, 2), (0, 2)],
        [[(0.8, 0.7), (0.8, 1.3), (1.2, 1.3), (1.2, 0.7)], [(2.6, 0.5), (2.6, 1.1), (3.3, 1.1), (3.3, 0.5)]],
    )


def rotated_l(angle: float = 0.3) -> PolygonShape:
    c, s = math.cos(angle), math.sin(angle)
    return PolygonShape(l_shape().verts @ np.array([[c, s], [-s, c]]))


def parallelogram() -> PolygonShape:
    return PolygonShape([(0, 0), (3, 0), (4, 1), (1, 1)])



FIXTURES = {
    "square": square,
    "diamond": diamond,
    "right_triangle": right_triangle,
    "l_shape": l_shape,
    "plus_shape": plus_shape,
    "u_shape": u_shape,
    "holed_square": holed_square,
    "pentagon": lambda: regular_polygon(5),
    "hexagon": lambda: regular_polygon(6, phase=0.1),
    "t_shape": t_shape,
    "h_shape": h_shape,
    "comb": comb,
    "v_notch": v_notch,
    "notched_rectangle": notched_rectangle,
    "chevron": chevron,
    "staircase": staircase_shape,
    "frame": frame,
    "two_holes": two_holes,
    "rotated_l": rotated_l,
    "parallelogram": parallelogram,
}


def _jittered_angles(rng: np.random.Generator, n: int, jitter: float) -> np.ndarray:
    # consecutive gaps stay above (1 - 2 jitter) of the mean gap
    k = np.arange(n) + rng.uniform(-jitter, jitter, n)
    return rng.uniform(0, 2 * math.pi) + k * (2 * math.pi / n)


def random_star(rng: np.random.Generator, n: int, spike: float = 0.6) -> PolygonShape:
    """Star-shaped polygon: jittered angles, random radii."""
    while True:
        ang = _jittered_angles(rng, n, 0.4)
        r = 1.0 - spike * rng.uniform(0, 1, n)
        pts = np.column_stack((r * np.cos(ang), r * np.sin(ang)))
        p = PolygonShape(pts)
        if p.report().ok:
            return p


def random_reflex(rng: np.random.Generator, n: int, k: int, depth: float = 0.5) -> PolygonShape:
    """Star polygon with about ``k`` reflex vertices: k radii pushed inward, the rest on the circle."""
    while True:
        ang = _jittered_angles(rng, n, 0.4)
        r = np.ones(n)
        dent = rng.choice(n, size=min(k, n), replace=False)
        r[dent] = 1.0 - depth * rng.uniform(0.2, 1.0, len(dent))
        p = PolygonShape(np.column_stack((r * np.cos(ang), r * np.sin(ang))))
        if p.report().ok:
            return p


def random_convex(rng: np.random.Generator, n: int) -> PolygonShape:
    """Convex polygon with n vertices on a jittered ellipse."""
    while True:
        ang = _jittered_angles(rng, n, 0.42)
        a, b = 1.0, rng.uniform(0.4, 1.0)
        rot = rng.uniform(0, math.pi)
        pts = np.column_stack((a * np.cos(ang), b * np.sin(ang)))
        c, s = math.cos(rot), math.sin(rot)
        pts = pts @ np.array([[c, s], [-s, c]])
        p = PolygonShape(pts)
        if p.report().ok and p.is_convex:
            return p


def random_holed(rng: np.random.Generator, n: int, holes: int = 1) -> PolygonShape:
    """Star polygon with small convex holes near the center."""
    while True:
        outer = random_star(rng, n, spike=0.3)
        rings = []
        for h in range(holes):
            c = rng.uniform(-0.25, 0.25, 2)
            m = int(rng.integers(3, 6))
            ang = np.sort(rng.uniform(0, 2 * math.pi, m))[::-1]
            rad = rng.uniform(0.05, 0.12)
            rings.append(c + rad * np.column_stack((np.cos(ang), np.sin(ang))))
        p = PolygonShape(outer.rings[0], rings)
        if p.report().ok:
            return p


def corpus(seed: int, count: int, n_max: int = 40, holed_fraction: float = 0.2) -> list[PolygonShape]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(5, n_max + 1))
        u = rng.uniform()
        if u < holed_fraction:
            out.append(random_holed(rng, max(n - 4, 5), holes=1))
        elif u < 0.6:
            out.append(random_star(rng, n))
        else:
            out.append(random_reflex(rng, n, int(rng.integers(1, n // 2 + 1))))
    return out
