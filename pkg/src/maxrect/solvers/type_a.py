"""Squares whose diagonal joins two convex vertices (type A).

With only two opposite corners pinned, on convex vertices v and v', area
is maximized by the square on the diagonal vv'.  Testing every convex pair
is O(n^2) boxes, all checked in one vectorised containment call.
"""

from __future__ import annotations

import math

import numpy as np

from ..geom import HALF_PI, RectSpec
from ..polygon import PolygonShape, contains_boxes

QUARTER_PI = 0.5 * HALF_PI


def type_a_squares(p: PolygonShape, tol: float | None = None) -> list[tuple[int, int, RectSpec]]:
    """Contained squares on convex-vertex diagonals as ``(v, v', rect)``."""
    tol = p.eps if tol is None else tol
    conv = np.nonzero(~p.reflex_mask)[0]
    if len(conv) < 2:
        return []
    i, j = np.triu_indices(len(conv), k=1)
    a, b = conv[i], conv[j]
    d = p.verts[b] - p.verts[a]
    side = np.hypot(d[:, 0], d[:, 1]) / math.sqrt(2.0)
    theta = np.arctan2(d[:, 1], d[:, 0]) - QUARTER_PI
    c, s = np.cos(theta), np.sin(theta)
    x0 = p.verts[a, 0] * c + p.verts[a, 1] * s
    y0 = -p.verts[a, 0] * s + p.verts[a, 1] * c
    ok = contains_boxes(p, theta, x0, x0 + side, y0, y0 + side, tol)
    out = []
    for k in np.nonzero(ok)[0]:
        mid = 0.5 * (p.verts[a[k]] + p.verts[b[k]])
        out.append((int(a[k]), int(b[k]), RectSpec(mid, float(theta[k]) % (4 * HALF_PI), side[k], side[k])))
    return out


__all__ = ["type_a_squares"]
