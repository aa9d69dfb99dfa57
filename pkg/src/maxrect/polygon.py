"""Polygons with holes: storage, validation, reflex vertices, containment."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _accel
from .geom import EPS_REL, Point2, RectSpec, orient, polygon_area, rect_corners, to_frame_array


@dataclass(frozen=True)
class VertexRef:
    ring: int
    index: int
    point: Point2
    is_reflex: bool
    gid: int  # position in the concatenated vertex array


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    collinear: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class InvalidPolygon(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(report.errors))
        self.report = report


class PolygonShape:
    """Outer ring (counterclockwise) plus holes (clockwise).

    Vertices of all rings are concatenated; vertex ``i`` starts edge ``i``,
    which ends at vertex ``nxt[i]``.  With these orientations the interior
    is always to the left of an edge.
    """

    def __init__(self, outer, holes=()):
        self.outer = np.asarray(outer, dtype=float).reshape(-1, 2)
        self.holes = [np.asarray(h, dtype=float).reshape(-1, 2) for h in holes]
        rings = [self.outer] + self.holes
        self.rings = rings
        self.verts = np.vstack(rings)
        n = len(self.verts)
        self.ring_of = np.concatenate([np.full(len(r), i) for i, r in enumerate(rings)])
        self.index_in_ring = np.concatenate([np.arange(len(r)) for r in rings])
        starts = np.cumsum([0] + [len(r) for r in rings])[:-1]
        sizes = np.array([len(r) for r in rings])
        base = starts[self.ring_of]
        size = sizes[self.ring_of]
        self.nxt = base + (self.index_in_ring + 1) % size
        self.prv = base + (self.index_in_ring - 1) % size
        self.n = n
        self.E0 = self.verts
        self.E1 = self.verts[self.nxt]
        self.edges = tuple(np.ascontiguousarray(a) for a in (self.E0[:, 0], self.E0[:, 1], self.E1[:, 0], self.E1[:, 1]))
        lo, hi = self.verts.min(axis=0), self.verts.max(axis=0)
        self.bbox = (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))
        self.diameter = float(math.hypot(*(hi - lo)))
        self.eps = EPS_REL * max(self.diameter, 1e-300)
        self._report: ValidationReport | None = None

    @classmethod
    def from_rings(cls, outer, holes=(), fix_orientation=True) -> "PolygonShape":
        """Build a polygon, reversing rings that run the wrong way."""
        outer = np.asarray(outer, dtype=float).reshape(-1, 2)
        holes = [np.asarray(h, dtype=float).reshape(-1, 2) for h in holes]
        if fix_orientation:
            if polygon_area(outer) < 0:
                outer = outer[::-1]
            holes = [h[::-1] if polygon_area(h) > 0 else h for h in holes]
        return cls(outer, holes)

    def to_json(self) -> dict:
        return {"outer": self.outer.tolist(), "holes": [h.tolist() for h in self.holes]}

    @cached_property
    def reflex_mask(self) -> np.ndarray:
        a = self.verts[self.prv]
        b = self.verts
        c = self.verts[self.nxt]
        cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - b[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - b[:, 0])
        out = cross < 0
        # resolve near-zero cases exactly
        near = np.abs(cross) <= 1e-12 * self.diameter**2
        for i in np.nonzero(near)[0]:
            out[i] = orient(a[i], b[i], c[i]) < 0
        return out

    @property
    def reflex_ids(self) -> np.ndarray:
        return np.nonzero(self.reflex_mask)[0]

    @property
    def k(self) -> int:
        return int(self.reflex_mask.sum())

    @property
    def is_convex(self) -> bool:
        return not self.holes and self.k == 0

    @property
    def area(self) -> float:
        return sum(polygon_area(r) for r in self.rings)

    def vertex(self, gid: int) -> VertexRef:
        gid = int(gid)
        return VertexRef(
            int(self.ring_of[gid]),
            int(self.index_in_ring[gid]),
            Point2(*self.verts[gid]),
            bool(self.reflex_mask[gid]),
            gid,
        )

    def vertex_id(self, v) -> int:
        """Global id for a VertexRef, an int, or a coordinate pair."""
        if isinstance(v, VertexRef):
            return v.gid
        if isinstance(v, (int, np.integer)):
            return int(v)
        d = np.hypot(self.verts[:, 0] - v[0], self.verts[:, 1] - v[1])
        i = int(np.argmin(d))
        if d[i] > self.eps:
            raise ValueError(f"{tuple(v)} is not a vertex")
        return i

    def report(self) -> ValidationReport:
        if self._report is None:
            self._report = validate(self)
        return self._report

    def require_valid(self):
        rep = self.report()
        if not rep.ok:
            raise InvalidPolygon(rep)

    def classify(self, pts, tol=None) -> np.ndarray:
        """1 inside, 0 on the boundary, -1 outside for each point."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return _accel.classify_points(pts[:, 0], pts[:, 1], self.edges, self.eps if tol is None else tol)

    def frame_coords(self, theta: float) -> np.ndarray:
        return to_frame_array(self.verts, theta)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def _segments_touch(p: PolygonShape, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Closed-segment intersection test for edge pairs (vectorised + exact ties)."""
    a, b = p.E0[i], p.E1[i]
    c, d = p.E0[j], p.E1[j]

    def det(p0, p1, p2):
        return (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0])

    d1, d2, d3, d4 = det(a, b, c), det(a, b, d), det(c, d, a), det(c, d, b)
    scale = p.diameter**2 * 1e-12
    s1, s2, s3, s4 = (np.sign(x) for x in (d1, d2, d3, d4))
    res = (s1 * s2 < 0) & (s3 * s4 < 0)
    tight = np.nonzero(np.minimum.reduce([np.abs(d1), np.abs(d2), np.abs(d3), np.abs(d4)]) <= scale)[0]
    for t in tight:
        A, B, C, D = a[t], b[t], c[t], d[t]
        o = [orient(A, B, C), orient(A, B, D), orient(C, D, A), orient(C, D, B)]
        if o[0] * o[1] < 0 and o[2] * o[3] < 0:
            res[t] = True
            continue

        def on(P, Q, R):
            return min(P[0], Q[0]) <= R[0] <= max(P[0], Q[0]) and min(P[1], Q[1]) <= R[1] <= max(P[1], Q[1])

        res[t] = (
            (o[0] == 0 and on(A, B, C))
            or (o[1] == 0 and on(A, B, D))
            or (o[2] == 0 and on(C, D, A))
            or (o[3] == 0 and on(C, D, B))
        )
    return res


def validate(p: PolygonShape) -> ValidationReport:
    """Check simplicity, ring orientation, hole placement and general position."""
    rep = ValidationReport()
    for r, ring in enumerate(p.rings):
        name = "outer" if r == 0 else f"hole {r - 1}"
        if len(ring) < 3:
            rep.errors.append(f"{name} ring has fewer than 3 vertices")
        if not np.all(np.isfinite(ring)):
            rep.errors.append(f"{name} ring has non-finite coordinates")
    if rep.errors:
        return rep
    if polygon_area(p.outer) <= 0:
        rep.errors.append("outer ring orientation")
    for h, ring in enumerate(p.holes):
        if polygon_area(ring) >= 0:
            rep.errors.append(f"hole {h} ring orientation")

    n = p.n
    ii, jj = np.triu_indices(n, 1)
    adjacent = (p.nxt[ii] == jj) | (p.nxt[jj] == ii)
    nonadj = ~adjacent
    hit = _segments_touch(p, ii[nonadj], jj[nonadj])
    bad = set()
    for a, b in zip(ii[nonadj][hit], jj[nonadj][hit]):
        ra, rb = int(p.ring_of[a]), int(p.ring_of[b])
        bad.add((ra, rb))
    for ra, rb in sorted(bad):
        if ra == rb:
            name = "outer" if ra == 0 else f"hole {ra - 1}"
            rep.errors.append(f"{name} ring is not simple")
        else:
            rep.errors.append(f"rings {ra} and {rb} intersect")
    # adjacent edges folding back onto each other
    for a, b in zip(ii[adjacent], jj[adjacent]):
        s, m = (a, b) if p.nxt[a] == b else (b, a)
        P, Q, R = p.verts[s], p.verts[m], p.verts[p.nxt[m]]
        if orient(P, Q, R) == 0 and np.dot(Q - P, R - Q) < 0:
            rep.errors.append(f"ring {int(p.ring_of[s])} folds back at vertex {int(m)}")

    outer_only = PolygonShape(p.outer)
    for h, ring in enumerate(p.holes):
        if outer_only.classify(ring[:1], tol=0.0)[0] <= 0:
            rep.errors.append(f"hole {h} outside outer ring")
        for g, other in enumerate(p.holes):
            if g != h and PolygonShape(other[::-1]).classify(ring[:1], tol=0.0)[0] >= 0:
                rep.errors.append(f"hole {h} inside hole {g}")

    rep.collinear = collinear_triples(p)
    for t in rep.collinear:
        rep.warnings.append(f"general position: vertices {t} are collinear")
    return rep


def collinear_triples(p: PolygonShape, limit: int = 1000) -> list[tuple[int, int, int]]:
    """Vertex triples lying on one line (exact test on filtered candidates)."""
    v = p.verts
    n = len(v)
    out = []
    scale = 1e-10 * p.diameter**2
    for i in range(n - 2):
        a = v[i]
        rest = v[i + 1 :]
        dx = rest[:, 0] - a[0]
        dy = rest[:, 1] - a[1]
        cr = dx[:, None] * dy[None, :] - dy[:, None] * dx[None, :]
        js, ks = np.nonzero(np.triu(np.abs(cr) <= scale, 1))
        for j, k in zip(js, ks):
            J, K = i + 1 + j, i + 1 + k
            if orient(a, v[J], v[K]) == 0:
                out.append((i, int(J), int(K)))
                if len(out) >= limit:
                    return out
    return out


def reflex_vertices(p: PolygonShape) -> list[VertexRef]:
    """Vertices whose interior angle (measured inside P) exceeds pi."""
    p.require_valid()
    return [p.vertex(i) for i in p.reflex_ids]


# ---------------------------------------------------------------------------
# containment
# ---------------------------------------------------------------------------


def segments_in_polygon(p: PolygonShape, A: np.ndarray, B: np.ndarray, tol: float) -> np.ndarray:
    """For each segment A[i]B[i], whether it lies in closed P (within ``tol``)."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    m = len(A)
    rx = (B[:, 0] - A[:, 0])[:, None]
    ry = (B[:, 1] - A[:, 1])[:, None]
    sx = (p.E1[:, 0] - p.E0[:, 0])[None, :]
    sy = (p.E1[:, 1] - p.E0[:, 1])[None, :]
    wx = p.E0[:, 0][None, :] - A[:, 0][:, None]
    wy = p.E0[:, 1][None, :] - A[:, 1][:, None]
    den = rx * sy - ry * sx
    ok = np.abs(den) > 1e-14
    with np.errstate(invalid="ignore", divide="ignore"):
        t = (wx * sy - wy * sx) / np.where(ok, den, 1.0)
        s = (wx * ry - wy * rx) / np.where(ok, den, 1.0)
    hit = ok & (s >= -1e-9) & (s <= 1 + 1e-9) & (t > 0) & (t < 1)
    # collinear overlaps contribute their endpoints
    rl2 = np.maximum(rx * rx + ry * ry, 1e-300)
    par = ~ok & (np.abs(wx * ry - wy * rx) <= tol * np.sqrt(rl2))
    t0 = (wx * rx + wy * ry) / rl2
    t1 = ((p.E1[:, 0][None, :] - A[:, 0][:, None]) * rx + (p.E1[:, 1][None, :] - A[:, 1][:, None]) * ry) / rl2
    res = np.ones(m, dtype=bool)
    pts = []
    owner = []
    for i in range(m):
        ts = np.concatenate(([0.0, 1.0], t[i][hit[i]], t0[i][par[i]], t1[i][par[i]]))
        ts = np.unique(np.clip(ts, 0.0, 1.0))
        mids = np.concatenate((ts, 0.5 * (ts[1:] + ts[:-1])))
        pts.append(np.column_stack((A[i, 0] + mids * rx[i, 0], A[i, 1] + mids * ry[i, 0])))
        owner.append(np.full(len(mids), i))
    pts = np.vstack(pts)
    owner = np.concatenate(owner)
    cls = p.classify(pts, tol)
    res[np.unique(owner[cls < 0])] = False
    return res


def side_status(p: PolygonShape, r: RectSpec, tol: float) -> np.ndarray:
    """Containment flag for the bottom, right, top and left sides of ``r``."""
    c = np.array(rect_corners(r))
    return segments_in_polygon(p, c, np.roll(c, -1, axis=0), tol)


def holes_in_rect(p: PolygonShape, r: RectSpec, tol: float) -> list[int]:
    """Holes having a vertex strictly inside ``r`` shrunk by ``tol``."""
    out = []
    for h, ring in enumerate(p.holes):
        q = to_frame_array(ring, r.theta)
        c = to_frame_array(np.array([r.center]), r.theta)[0]
        inside = (np.abs(q[:, 0] - c[0]) < r.width / 2 - tol) & (np.abs(q[:, 1] - c[1]) < r.height / 2 - tol)
        if inside.any():
            out.append(h)
    return out


def contains_rect(p: PolygonShape, r: RectSpec, tol: float | None = None) -> bool:
    """True iff ``r`` lies in closed P, allowing ``tol`` of overshoot."""
    tol = p.eps if tol is None else tol
    if not side_status(p, r, tol).all():
        return False
    return not holes_in_rect(p, r, tol)


def contains_boxes(p: PolygonShape, theta, x0, x1, y0, y1, tol: float | None = None, chunk: int = 2048) -> np.ndarray:
    """Vectorised containment for frame boxes ``[x0, x1] x [y0, y1]`` at ``theta``.

    A box passes when its corners and center lie in closed P and no edge of
    P meets the box shrunk by ``tol`` on every side.
    """
    tol = p.eps if tol is None else tol
    theta, x0, x1, y0, y1 = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (theta, x0, x1, y0, y1)))
    theta, x0, x1, y0, y1 = (a.ravel() for a in (theta, x0, x1, y0, y1))
    m = len(theta)
    out = np.zeros(m, dtype=bool)
    for lo in range(0, m, chunk):
        sl = slice(lo, min(m, lo + chunk))
        out[sl] = _contains_chunk(p, theta[sl], x0[sl], x1[sl], y0[sl], y1[sl], tol)
    return out


def _contains_chunk(p, theta, x0, x1, y0, y1, tol):
    c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
    good = (x1 - x0 > 2 * tol) & (y1 - y0 > 2 * tol)
    # corners and center back in world coordinates
    fx = np.stack((x0, x1, x1, x0, 0.5 * (x0 + x1)), axis=1)
    fy = np.stack((y0, y0, y1, y1, 0.5 * (y0 + y1)), axis=1)
    wx = fx * c - fy * s
    wy = fx * s + fy * c
    cls = p.classify(np.column_stack((wx.ravel(), wy.ravel())), tol).reshape(-1, 5)
    good &= (cls >= 0).all(axis=1)
    # edges in each box frame, clipped against the shrunk box (Liang-Barsky)
    ax = p.E0[:, 0][None, :] * c + p.E0[:, 1][None, :] * s
    ay = -p.E0[:, 0][None, :] * s + p.E0[:, 1][None, :] * c
    bx = p.E1[:, 0][None, :] * c + p.E1[:, 1][None, :] * s
    by = -p.E1[:, 0][None, :] * s + p.E1[:, 1][None, :] * c
    dx, dy = bx - ax, by - ay
    t0 = np.zeros_like(ax)
    t1 = np.ones_like(ax)
    hit = np.ones(ax.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for pp, qq in (
            (-dx, ax - (x0[:, None] + tol)),
            (dx, (x1[:, None] - tol) - ax),
            (-dy, ay - (y0[:, None] + tol)),
            (dy, (y1[:, None] - tol) - ay),
        ):
            par = pp == 0
            hit &= ~(par & (qq <= 0))
            r = qq / np.where(par, 1.0, pp)
            t0 = np.where(~par & (pp < 0), np.maximum(t0, r), t0)
            t1 = np.where(~par & (pp > 0), np.minimum(t1, r), t1)
    hit &= t0 < t1
    good &= ~hit.any(axis=1)
    return good
