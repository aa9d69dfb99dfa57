"""Planar primitives: points, rotated frames, segments, oriented rectangles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# relative tolerance multiplier; absolute tolerance is this times the diameter
EPS_REL = 1e-9


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Frame:
    """Axes rotated counterclockwise by ``theta``; the plane stays put."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    @property
    def x_axis(self) -> np.ndarray:
        return np.array([math.cos(self.theta), math.sin(self.theta)])

    @property
    def y_axis(self) -> np.ndarray:
        return np.array([-math.sin(self.theta), math.cos(self.theta)])


@dataclass(frozen=True)
class Segment2:
    a: Point2
    b: Point2

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


def axes(theta):
    """Unit x- and y-axis of the frame at ``theta`` (scalars or arrays)."""
    c, s = np.cos(theta), np.sin(theta)
    return (c, s), (-s, c)


def rotate_frame(p, f) -> Point2:
    """Coordinates of world point ``p`` in the frame ``f`` (Frame or angle)."""
    theta = f.theta if isinstance(f, Frame) else float(f)
    c, s = math.cos(theta), math.sin(theta)
    return Point2(p[0] * c + p[1] * s, -p[0] * s + p[1] * c)


def from_frame(p, f) -> Point2:
    """Inverse of :func:`rotate_frame`."""
    theta = f.theta if isinstance(f, Frame) else float(f)
    c, s = math.cos(theta), math.sin(theta)
    return Point2(p[0] * c - p[1] * s, p[0] * s + p[1] * c)


def to_frame_array(pts: np.ndarray, theta: float) -> np.ndarray:
    """Vectorised :func:`rotate_frame` for an ``(n, 2)`` array."""
    c, s = math.cos(theta), math.sin(theta)
    return np.column_stack((pts[:, 0] * c + pts[:, 1] * s, -pts[:, 0] * s + pts[:, 1] * c))


# Shewchuk's bound for the first-stage orientation filter
_CCW_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53


def orient(p, q, r) -> int:
    """Sign of det(q - p, r - p), exact for any finite double inputs.

    A floating-point filter decides almost every call; ties fall back to
    rational arithmetic, which is exact because every double is a
    dyadic rational.
    """
    detl = (q[0] - p[0]) * (r[1] - p[1])
    detr = (q[1] - p[1]) * (r[0] - p[0])
    det = detl - detr
    bound = _CCW_ERRBOUND * (abs(detl) + abs(detr))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    fp = [Fraction(v) for v in (p[0], p[1], q[0], q[1], r[0], r[1])]
    exact = (fp[2] - fp[0]) * (fp[5] - fp[1]) - (fp[3] - fp[1]) * (fp[4] - fp[0])
    return (exact > 0) - (exact < 0)


@dataclass(frozen=True)
class RectSpec:
    """Oriented rectangle: ``width`` runs along the frame x-axis at ``theta``."""

    center: Point2
    theta: float
    width: float
    height: float

    def __post_init__(self):
        object.__setattr__(self, "center", Point2(float(self.center[0]), float(self.center[1])))
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"rectangle needs positive extents, got {self.width} x {self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> list[Point2]:
        return rect_corners(self)

    def canonical(self) -> "RectSpec":
        """Same rectangle with theta folded into [0, pi/2)."""
        k = math.floor(self.theta / HALF_PI)
        theta = self.theta - k * HALF_PI
        if theta >= HALF_PI - 1e-12:
            theta, k = 0.0, k + 1
        w, h = (self.width, self.height) if k % 2 == 0 else (self.height, self.width)
        return RectSpec(self.center, max(theta, 0.0), w, h)

    @classmethod
    def from_frame_box(cls, x0, x1, y0, y1, theta) -> "RectSpec":
        """Rectangle ``[x0, x1] x [y0, y1]`` given in frame coordinates."""
        c = from_frame(((x0 + x1) * 0.5, (y0 + y1) * 0.5), theta)
        return cls(c, float(theta) % TWO_PI, x1 - x0, y1 - y0)


def rect_corners(r: RectSpec) -> list[Point2]:
    """Corners in counterclockwise order starting at the frame's lower-left."""
    (ax, ay), (bx, by) = axes(r.theta)
    hw, hh = r.width * 0.5, r.height * 0.5
    out = []
    for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        out.append(Point2(r.center.x + sx * hw * ax + sy * hh * bx, r.center.y + sx * hw * ay + sy * hh * by))
    return out


def same_rect(r1: RectSpec, r2: RectSpec, tol: float) -> bool:
    """True when the corner sets coincide within ``tol``."""
    a = sorted(rect_corners(r1))
    b = sorted(rect_corners(r2))
    # lexicographic sort can pair corners differently when x ties; match greedily
    used = [False] * 4
    for p in a:
        for j, q in enumerate(b):
            if not used[j] and abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol:
                used[j] = True
                break
        else:
            return False
    return True


def normalize_angle(theta: float) -> float:
    return float(theta) % TWO_PI


def polygon_area(ring: np.ndarray) -> float:
    """Signed shoelace area (positive for counterclockwise)."""
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
