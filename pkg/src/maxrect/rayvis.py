"""Ray shooting, visibility regions and the precomputed event map."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import Polygon as ShapelyPolygon

from . import _accel
from .geom import TWO_PI, Point2
from .polygon import PolygonShape, VertexRef, segments_in_polygon

LEFT = (-1.0, 0.0)
RIGHT = (1.0, 0.0)
DOWN = (0.0, -1.0)
UP = (0.0, 1.0)


@dataclass(frozen=True)
class RayFoot:
    origin: Point2
    direction: tuple[float, float]
    foot: Point2
    edge: int  # edge index containing the foot
    vertex: int | None  # set when the foot coincides with a vertex

    @property
    def length(self) -> float:
        return math.hypot(self.foot.x - self.origin.x, self.foot.y - self.origin.y)


def shoot_many(p: PolygonShape, origins, dirs) -> tuple[np.ndarray, np.ndarray]:
    """Batch ray shooting.  Returns distances to the feet and hit edges."""
    origins = np.atleast_2d(np.asarray(origins, dtype=float))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if len(dirs) == 1 and len(origins) > 1:
        dirs = np.repeat(dirs, len(origins), axis=0)
    if len(origins) == 1 and len(dirs) > 1:
        origins = np.repeat(origins, len(dirs), axis=0)
    nrm = np.hypot(dirs[:, 0], dirs[:, 1])
    dirs = dirs / nrm[:, None]
    return _accel.ray_exit(origins[:, 0], origins[:, 1], dirs[:, 0], dirs[:, 1], p.edges, p.eps)


def shoot(p: PolygonShape, origin, direction) -> RayFoot:
    """First point where the ray from ``origin`` leaves P.

    When the origin is on the boundary and the ray points outward the
    foot is the origin itself.
    """
    origin = Point2(float(origin[0]), float(origin[1]))
    if p.classify([origin])[0] < 0:
        raise ValueError(f"ray origin {tuple(origin)} lies outside the polygon")
    d = np.asarray(direction, dtype=float)
    d = d / np.hypot(*d)
    t, e = shoot_many(p, [origin], [d])
    foot = Point2(origin.x + t[0] * d[0], origin.y + t[0] * d[1])
    edge = int(e[0])
    vertex = None
    if edge >= 0:
        for cand in (edge, int(p.nxt[edge])):
            if math.hypot(*(p.verts[cand] - foot)) <= 10 * p.eps:
                vertex = cand
                break
    return RayFoot(origin, (float(d[0]), float(d[1])), foot, edge, vertex)


# ---------------------------------------------------------------------------
# visibility
# ---------------------------------------------------------------------------


@dataclass
class VisRegion:
    source: VertexRef
    boundary: np.ndarray  # (m, 2) ring starting at the source
    provenance: list[str]  # per boundary edge i -> i+1: "edge" or "window"
    angles: np.ndarray  # polar angle of each boundary vertex (source gets nan)

    def polygon(self) -> ShapelyPolygon:
        return ShapelyPolygon(self.boundary)


def wedge(p: PolygonShape, v: int) -> tuple[float, float]:
    """Start angle and angular width of the interior wedge at vertex ``v``."""
    a = p.verts[p.nxt[v]] - p.verts[v]
    b = p.verts[p.prv[v]] - p.verts[v]
    start = math.atan2(a[1], a[0])
    width = (math.atan2(b[1], b[0]) - start) % TWO_PI
    return start, width


def visibility_region(p: PolygonShape, v) -> VisRegion:
    """Region of P visible from polygon vertex ``v`` by angular ray casting."""
    vid = p.vertex_id(v)
    src = p.verts[vid]
    start, width = wedge(p, vid)
    others = np.delete(np.arange(p.n), vid)
    d = p.verts[others] - src
    rel = (np.arctan2(d[:, 1], d[:, 0]) - start) % TWO_PI
    rel[rel > TWO_PI - 1e-12] = 0.0
    keep = rel <= width + 1e-12
    base = np.unique(np.concatenate(([0.0, width], rel[keep])))
    delta = 1e-7
    probe = np.concatenate((base, np.clip(base - delta, 0, width), np.clip(base + delta, 0, width)))
    dirs = np.column_stack((np.cos(start + probe), np.sin(start + probe)))
    t, _ = shoot_many(p, np.repeat(src[None, :], len(dirs), axis=0), dirs)
    nb = len(base)
    t_at, t_lo, t_hi = t[:nb], t[nb : 2 * nb], t[2 * nb :]
    # nearest vertex along each base direction, if any
    dist = np.hypot(d[:, 0], d[:, 1])
    probe_tol = 1e-4 * p.diameter
    pts = []
    angs = []
    for i, a in enumerate(base):
        ang = start + a
        u = np.array([math.cos(ang), math.sin(ang)])
        far = float(t_at[i])
        tol = 10 * p.eps
        on_ray = dist[keep & (np.abs(rel - a) <= 1e-12) & (dist <= far + tol)]
        # side probes drift by roughly delta * distance, so compare coarsely
        lo_short = t_lo[i] < far - probe_tol
        hi_short = t_hi[i] < far - probe_tol
        near = None
        if on_ray.size and (lo_short or hi_short):
            ref = min(t_lo[i], t_hi[i])
            near = float(on_ray[np.argmin(np.abs(on_ray - ref))])
        if near is None or far - near <= tol:
            seq = (far,)
        elif lo_short and hi_short:
            seq = (near,)
        elif lo_short:
            seq = (near, far)
        else:
            seq = (far, near)
        for s in seq:
            pts.append(src + s * u)
            angs.append(ang)
    ring = np.vstack([src] + pts)
    ang_arr = np.concatenate(([np.nan], np.asarray(angs)))
    # drop consecutive duplicates
    keep_pts = [0]
    for i in range(1, len(ring)):
        if np.hypot(*(ring[i] - ring[keep_pts[-1]])) > 10 * p.eps:
            keep_pts.append(i)
    ring = ring[keep_pts]
    ang_arr = ang_arr[keep_pts]
    prov = []
    for i in range(len(ring)):
        j = (i + 1) % len(ring)
        if i == 0 or j == 0:
            prov.append("edge")
        elif abs(ang_arr[i] - ang_arr[j]) <= 1e-12:
            prov.append("window")
        else:
            prov.append("edge")
    return VisRegion(p.vertex(vid), ring, prov, ang_arr)


# ---------------------------------------------------------------------------
# event map
# ---------------------------------------------------------------------------


def corner_on_segment(A, B, g0, g1, sa: float, sb: float):
    """Frames in which some point z of segment g0g1 sees A along ``sa``*x-axis
    and B along ``sb``*y-axis.

    All inputs may broadcast.  z lies on the circle with diameter AB.
    Returns ``(theta, z, valid)`` with a trailing axis of size 2 for the
    two circle/line intersections.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    g0 = np.asarray(g0, dtype=float)
    g1 = np.asarray(g1, dtype=float)
    c = 0.5 * (A + B)
    r2 = 0.25 * np.sum((A - B) ** 2, axis=-1)
    d = g1 - g0
    f = g0 - c
    qa = np.sum(d * d, axis=-1)
    qb = 2 * np.sum(f * d, axis=-1)
    qc = np.sum(f * f, axis=-1) - r2
    disc = qb * qb - 4 * qa * qc
    ok = disc >= 0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    out_t = []
    for sgn in (-1.0, 1.0):
        s = (-qb + sgn * sq) / (2 * qa)
        z = g0 + s[..., None] * d
        ax = sa * (A - z)
        theta = np.arctan2(ax[..., 1], ax[..., 0])
        by = B - z
        # y-axis = rot90(x-axis); sign of B along it must match sb
        cr = np.cos(theta) * by[..., 1] - np.sin(theta) * by[..., 0]
        lab = np.hypot(ax[..., 0], ax[..., 1])
        lbb = np.hypot(by[..., 0], by[..., 1])
        valid = ok & (s >= -1e-12) & (s <= 1 + 1e-12) & (cr * sb > 0) & (lab > 1e-12) & (lbb > 1e-12)
        out_t.append((theta % TWO_PI, z, valid))
    theta = np.stack([o[0] for o in out_t], axis=-1)
    z = np.stack([o[1] for o in out_t], axis=-2)
    valid = np.stack([o[2] for o in out_t], axis=-1)
    return theta, z, valid


@dataclass
class FootEvents:
    """Sorted orientations at which a foot's perpendicular ray meets a vertex."""

    theta: np.ndarray
    vertex: np.ndarray
    kind: np.ndarray  # 0: vertical ray from the left foot, 1: horizontal ray from the lower foot

    def __len__(self):
        return len(self.theta)

    def after(self, theta: float, kind: int | None = None) -> int:
        """Index of the first entry strictly after ``theta`` (circularly)."""
        if kind is None:
            th = self.theta
        else:
            th = self.theta[self.kind == kind]
        i = int(np.searchsorted(th, theta, side="right"))
        return i


@dataclass
class ChordList:
    """Pieces of the common visibility boundary inside the disk on pq."""

    angles: np.ndarray  # polar angle about the disk center, sorted
    items: list = field(default_factory=list)  # ("vertex", pt) or ("segment", (a, b))

    def __len__(self):
        return len(self.items)


@dataclass
class EventMap:
    vis: dict[int, VisRegion]
    C: dict[tuple[int, int], ChordList]
    L: dict[tuple[int, int], FootEvents]

    def foot_events(self, u: int, e: int) -> FootEvents:
        return self.L.get((u, e), _EMPTY_FOOT)


_EMPTY_FOOT = FootEvents(np.zeros(0), np.zeros(0, dtype=int), np.zeros(0, dtype=int))


def _disk_clip(a, b, c, r):
    """Portion of segment ab inside the closed disk (c, r) as parameters."""
    d = b - a
    f = a - c
    qa = d @ d
    qb = 2 * f @ d
    qc = f @ f - r * r
    disc = qb * qb - 4 * qa * qc
    if qa == 0 or disc < 0:
        return None
    s = math.sqrt(disc)
    t0 = max((-qb - s) / (2 * qa), 0.0)
    t1 = min((-qb + s) / (2 * qa), 1.0)
    return (t0, t1) if t0 <= t1 else None


def chord_list(p: PolygonShape, a: int, b: int, vis: dict[int, VisRegion]) -> ChordList:
    A, B = p.verts[a], p.verts[b]
    c = 0.5 * (A + B)
    r = 0.5 * math.hypot(*(A - B))
    both = vis[a].polygon().buffer(0).intersection(vis[b].polygon().buffer(0))
    ref = math.atan2(*(A - c)[::-1])
    angs = []
    items = []
    if both.is_empty:
        return ChordList(np.zeros(0), [])
    geoms = getattr(both, "geoms", [both])
    for g in geoms:
        if g.geom_type != "Polygon":
            continue
        ring = np.asarray(g.exterior.coords)
        for i in range(len(ring) - 1):
            s0, s1 = ring[i], ring[i + 1]
            clip = _disk_clip(s0, s1, c, r * (1 + 1e-12))
            if clip is None:
                continue
            q0 = s0 + clip[0] * (s1 - s0)
            q1 = s0 + clip[1] * (s1 - s0)
            mid = 0.5 * (q0 + q1)
            ang = (math.atan2(mid[1] - c[1], mid[0] - c[0]) - ref) % TWO_PI
            if np.hypot(*(q1 - q0)) <= p.eps:
                items.append(("vertex", q0))
            else:
                items.append(("segment", (q0, q1)))
            angs.append(ang)
    order = np.argsort(angs)
    return ChordList(np.asarray(angs)[order], [items[i] for i in order])


def foot_events_for(p: PolygonShape, u: int) -> dict[tuple[int, int], FootEvents]:
    """Orientation lists for the left and lower feet of ``u``, keyed by edge."""
    U = p.verts[u]
    W = p.verts
    E0, E1 = p.E0, p.E1
    n = p.n
    out_theta = {e: [] for e in range(n)}
    out_v = {e: [] for e in range(n)}
    out_k = {e: [] for e in range(n)}
    wi, ei = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    wi = wi.ravel()
    ei = ei.ravel()
    sel = wi != u
    wi, ei = wi[sel], ei[sel]
    # kind 0: z = left foot on e, u to its right, w straight below z
    # kind 1: z = lower foot on e, u straight above, w to its left
    for kind, (sa, sb) in enumerate(((1.0, -1.0), (-1.0, 1.0))):
        A = np.broadcast_to(U, (len(wi), 2)) if kind == 0 else W[wi]
        B = W[wi] if kind == 0 else np.broadcast_to(U, (len(wi), 2))
        theta, z, valid = corner_on_segment(A, B, E0[ei], E1[ei], sa, sb)
        for s in range(2):
            idx = np.nonzero(valid[:, s])[0]
            if idx.size == 0:
                continue
            th = theta[idx, s]
            zz = z[idx, s]
            c, sn = np.cos(th), np.sin(th)
            if kind == 0:
                d1 = np.column_stack((-c, -sn))  # from u leftward
                d2 = np.column_stack((sn, -c))  # from z downward
            else:
                d1 = np.column_stack((sn, -c))  # from u downward
                d2 = np.column_stack((-c, -sn))  # from z leftward
            o1 = np.broadcast_to(U, zz.shape)
            l1 = np.hypot(*(zz - U).T)
            l2 = np.hypot(*(W[wi[idx]] - zz).T)
            t1, e1 = shoot_many(p, o1, d1)
            good = (np.abs(t1 - l1) <= 1e3 * p.eps) & (e1 >= 0)
            if not good.any():
                continue
            idx, zz, d2, l2, th = idx[good], zz[good], d2[good], l2[good], th[good]
            t2, _ = shoot_many(p, zz, d2)
            good = t2 >= l2 - 1e3 * p.eps
            for j in np.nonzero(good)[0]:
                e = int(ei[idx[j]])
                out_theta[e].append(float(th[j]))
                out_v[e].append(int(wi[idx[j]]))
                out_k[e].append(kind)
    res = {}
    for e in range(n):
        if out_theta[e]:
            th = np.asarray(out_theta[e])
            o = np.argsort(th)
            res[(u, e)] = FootEvents(th[o], np.asarray(out_v[e])[o], np.asarray(out_k[e])[o])
    return res


def build_event_map(p: PolygonShape, with_chords: bool = True) -> EventMap:
    """Visibility regions, chord lists C and foot-event lists L for reflex vertices."""
    reflex = [int(i) for i in p.reflex_ids]
    vis = {u: visibility_region(p, u) for u in reflex}
    C = {}
    if with_chords:
        for i, a in enumerate(reflex):
            for b in reflex[i + 1 :]:
                seen = mutually_visible(p, a, b)
                C[(a, b)] = chord_list(p, a, b, vis) if seen else ChordList(np.zeros(0), [])
                C[(b, a)] = C[(a, b)]
    L = {}
    for u in reflex:
        L.update(foot_events_for(p, u))
    return EventMap(vis, C, L)


def mutually_visible(p: PolygonShape, a: int, b: int) -> bool:
    A, B = p.verts[a], p.verts[b]
    return bool(segments_in_polygon(p, A[None, :], B[None, :], p.eps)[0])


__all__ = [
    "RayFoot",
    "VisRegion",
    "EventMap",
    "FootEvents",
    "ChordList",
    "shoot",
    "shoot_many",
    "visibility_region",
    "build_event_map",
    "corner_on_segment",
    "mutually_visible",
]
