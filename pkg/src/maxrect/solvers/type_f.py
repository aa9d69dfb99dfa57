"""Rectangles held by corner-contacts only (types F1 and F2).

A set ``(e1, e2, el)`` puts the top-left corner on edge e1, the top-right
corner on e2 and the bottom-left corner on el.  At a fixed orientation the
top-left corner slides along e1 and both the width and the height are
affine in its position, so the area is a quadratic maximized in closed
form over the interval where every corner stays on its edge.  Clamping to
an end of that interval is the rule that puts a corner on an edge's end
vertex.  A fourth edge er for the bottom-right corner fixes the position
outright (type F2).

Candidate sets come from two event families: two mutually visible vertices
aligned along a side, and the foot of the left ray from u seeing a vertex
p straight below it.  The second family is solved per (u, p, edge) as a
circle/segment intersection, since the corner sees u and p at a right
angle.  Every set is then maximized over all orientations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _accel
from ..geom import HALF_PI, TWO_PI
from ..polygon import PolygonShape, segments_in_polygon
from ..rayvis import corner_on_segment, shoot_many
from ..search import INVPHI

SPACING = 0.003
XTOL = 1e-12


@dataclass
class FSets:
    sets: np.ndarray  # (m, 4): e1, e2, el, er (er = -1 for F1)
    events: int


def _dedup(rows: list[np.ndarray]) -> np.ndarray:
    if not rows:
        return np.zeros((0, 4), dtype=np.int64)
    a = np.vstack(rows).astype(np.int64)
    # a set is useless when one edge plays two corners
    ok = (a[:, 0] != a[:, 1]) & (a[:, 0] != a[:, 2]) & (a[:, 1] != a[:, 2])
    ok &= (a[:, 3] < 0) | ((a[:, 3] != a[:, 1]) & (a[:, 3] != a[:, 2]))
    return np.unique(a[ok & (a >= -1).all(axis=1) & (a[:, :3] >= 0).all(axis=1)], axis=0)


def _incident(p: PolygonShape, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return p.prv[v], v


def f_sets(p: PolygonShape) -> FSets:
    """Candidate corner-contact sets from both event families."""
    V = p.verts
    n = p.n
    tol = 1e3 * p.eps
    rows = []
    events = 0
    # family 1: u and v on a common side, v to the right of u
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    sel = ii != jj
    ii, jj = ii[sel], jj[sel]
    vis = segments_in_polygon(p, V[ii], V[jj], p.eps)
    ii, jj = ii[vis], jj[vis]
    events += len(ii)
    if len(ii):
        d = V[jj] - V[ii]
        X = d / np.hypot(d[:, 0], d[:, 1])[:, None]
        Y = np.column_stack((-X[:, 1], X[:, 0]))
        tl, el_ = shoot_many(p, V[ii], -X)
        tr, er_ = shoot_many(p, V[jj], X)
        left_opts = [(np.where(tl > tol, el_, -1), V[ii] - tl[:, None] * X)]
        right_opts = [(np.where(tr > tol, er_, -1), V[jj] + tr[:, None] * X)]
        for e in _incident(p, ii):
            left_opts.append((e, V[ii]))
        for e in _incident(p, jj):
            right_opts.append((e, V[jj]))
        downs_l = []
        for e1, z in left_opts:
            _, ed = shoot_many(p, z, -Y)
            downs_l.append((e1, ed))
        downs_r = []
        for e2, z in right_opts:
            _, ed = shoot_many(p, z, -Y)
            downs_r.append((e2, ed))
        for e1, edl in downs_l:
            for e2, edr in downs_r:
                ok = (e1 >= 0) & (e2 >= 0)
                rows.append(np.column_stack((e1, e2, edl, np.full_like(e1, -1)))[ok & (edl >= 0)])
                rows.append(np.column_stack((e2, edr, e1, np.full_like(e1, -1)))[ok & (edr >= 0)])
                rows.append(np.column_stack((e1, e2, edl, edr))[ok & (edl >= 0) & (edr >= 0)])
    # family 2: the left foot z of u on e1 sees p straight below
    uu, pp, ee = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    sel = (uu != pp) & (ee != uu) & (p.prv[uu] != ee)
    uu, pp, ee = uu[sel], pp[sel], ee[sel]
    th, z, valid = corner_on_segment(V[uu], V[pp], p.E0[ee], p.E1[ee], 1.0, -1.0)
    k_idx, s_idx = np.nonzero(valid)
    if len(k_idx):
        uu, pp, ee = uu[k_idx], pp[k_idx], ee[k_idx]
        th = th[k_idx, s_idx]
        z = z[k_idx, s_idx]
        X = np.column_stack((np.cos(th), np.sin(th)))
        Y = np.column_stack((-X[:, 1], X[:, 0]))
        t1, h1 = shoot_many(p, V[uu], -X)
        lu = np.hypot(*(V[uu] - z).T)
        ok = (np.abs(t1 - lu) <= tol) & (h1 == ee)
        t2, _ = shoot_many(p, z, -Y)
        lp = np.hypot(*(V[pp] - z).T)
        ok &= t2 >= lp - tol
        uu, pp, ee, X, Y = uu[ok], pp[ok], ee[ok], X[ok], Y[ok]
        events += len(uu)
        if len(uu):
            tr, e2 = shoot_many(p, V[uu], X)
            _, er = shoot_many(p, V[uu] + tr[:, None] * X, -Y)
            _, erp = shoot_many(p, V[pp], X)
            _, eld = shoot_many(p, V[pp], -Y)
            for el in (eld, p.prv[pp], pp):
                rows.append(np.column_stack((ee, e2, el, np.full_like(ee, -1))))
                rows.append(np.column_stack((ee, e2, el, er)))
                rows.append(np.column_stack((ee, e2, el, erp)))
    return FSets(_dedup(rows), events)


def f_eval(p: PolygonShape, Z: np.ndarray, theta: np.ndarray, tol: float | None = None):
    """Area and frame box of each set at each orientation (row-wise).

    Unrealizable rows get area ``-inf``.
    """
    tol = 1e-12 * p.diameter if tol is None else tol
    return _accel.f_rows(p.edges, Z, theta, tol)


def _convex_sets_at(q: np.ndarray, nxt: np.ndarray) -> list[tuple[int, int, int, int]]:
    """Template sets of a convex CCW polygon at one generic frame."""
    a, b = q, q[nxt]
    dx, dy = b[:, 0] - a[:, 0], b[:, 1] - a[:, 1]
    ylo, yhi = np.minimum(a[:, 1], b[:, 1]), np.maximum(a[:, 1], b[:, 1])
    xlo, xhi = np.minimum(a[:, 0], b[:, 0]), np.maximum(a[:, 0], b[:, 0])
    lower = np.nonzero(dx > 0)[0]
    ys = np.unique(q[:, 1])
    out = []
    for ya, yb in zip(ys[:-1], ys[1:]):
        ym = 0.5 * (ya + yb)
        cross = np.nonzero((ylo < ym) & (yhi > ym))[0]
        if len(cross) != 2:
            continue
        e1, e2 = (cross[0], cross[1]) if dy[cross[0]] < 0 else (cross[1], cross[0])

        def x_span(e):
            xs = a[e, 0] + (np.array([ya, yb]) - a[e, 1]) * dx[e] / dy[e]
            return xs.min(), xs.max()

        la, lb = x_span(e1)
        ra, rb = x_span(e2)
        els = lower[(xhi[lower] >= la) & (xlo[lower] <= lb)]
        ers = lower[(xhi[lower] >= ra) & (xlo[lower] <= rb)]
        for el in els:
            out.append((int(e1), int(e2), int(el), -1))
            for er in ers:
                out.append((int(e1), int(e2), int(el), int(er)))
    return out


def convex_f_sets(p: PolygonShape) -> FSets:
    """Template sets of a convex polygon by sweeping the frame.

    The left and right boundary edges at a height, and the lower edges under
    the top corners, only change when two vertices align horizontally or
    vertically.  One probe frame between consecutive alignments therefore
    sees every set.
    """
    if p.holes or not p.is_convex:
        raise ValueError("convex_f_sets needs a convex polygon without holes")
    V = p.verts
    i, j = np.triu_indices(len(V), k=1)
    phi = np.arctan2(V[j, 1] - V[i, 1], V[j, 0] - V[i, 0]) % HALF_PI
    ev = np.unique(np.concatenate([phi + k * HALF_PI for k in range(4)]) % TWO_PI)
    ev = ev[np.concatenate(([True], np.diff(ev) > 1e-13))]
    nxt_ev = np.concatenate((ev[1:], [ev[0] + TWO_PI]))
    probes = 0.5 * (ev + nxt_ev)
    found: set[tuple[int, int, int, int]] = set()
    for t in probes:
        found.update(_convex_sets_at(p.frame_coords(float(t)), p.nxt))
    sets = np.array(sorted(found), dtype=np.int64).reshape(-1, 4)
    return FSets(sets, len(probes))


def aligned_thetas(p: PolygonShape) -> np.ndarray:
    """Orientations that put some edge flush with a rectangle side."""
    d = p.E1 - p.E0
    ang = np.arctan2(d[:, 1], d[:, 0]) % HALF_PI
    return np.unique(np.concatenate([ang + k * HALF_PI for k in range(4)]) % TWO_PI)


def f_aligned(p: PolygonShape, sets: np.ndarray, floor: float = 0.0, chunk: int = 1 << 20):
    """Every set at every flush orientation; rows with area above ``floor``.

    A free corner that leaves P across an edge already holding a neighbouring
    corner does so exactly when that side lies along the edge.  Such maxima
    sit at these fixed orientations instead of at a fourth-corner event.
    """
    ths = aligned_thetas(p)
    m = len(sets)
    per = max(1, chunk // max(m, 1))
    out_t, out_v, out_b = [], [], []
    for lo in range(0, len(ths), per):
        t = ths[lo : lo + per]
        zz = np.tile(np.arange(m), len(t))
        tt = np.repeat(t, m)
        val, box = f_eval(p, sets[zz], tt)
        keep = val > floor
        out_t.append(tt[keep])
        out_v.append(val[keep])
        out_b.append(box[keep])
    if not out_t:
        return np.zeros(0), np.zeros(0), np.zeros((0, 4))
    return np.concatenate(out_t), np.concatenate(out_v), np.vstack(out_b)


@dataclass
class FBracket:
    z: int
    lo: float
    hi: float
    value: float


def f_brackets(p: PolygonShape, sets: np.ndarray, spacing: float = SPACING, floor: float = 0.0):
    """Seed maxima of every set over a periodic grid of orientations."""
    N = max(int(math.ceil(TWO_PI / spacing)), 8)
    step = TWO_PI / N
    grid = np.arange(N) * step
    zi, ki, vals = _accel.f_seed(p.edges, sets, grid, floor, 1e-12 * p.diameter)
    return [FBracket(int(z), grid[k] - step, grid[k] + step, float(v)) for z, k, v in zip(zi, ki, vals)]


def refine_f(p: PolygonShape, sets: np.ndarray, brackets: list[FBracket], xtol: float = XTOL):
    """Lockstep golden-section search; returns (theta, area, box) arrays."""
    if not brackets:
        return np.zeros(0), np.zeros(0), np.zeros((0, 4))
    Z = sets[[b.z for b in brackets]]
    a = np.array([b.lo for b in brackets])
    b = np.array([b.hi for b in brackets])
    a0, b0 = a.copy(), b.copy()

    def f(t):
        return f_eval(p, Z, t)[0]

    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a).max() > xtol:
        left = fc >= fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        nc = np.where(left, b - INVPHI * (b - a), d)
        nd = np.where(left, c, a + INVPHI * (b - a))
        fnew = f(np.where(left, nc, nd))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        c, d = nc, nd
    x = np.where(fc >= fd, c, d)
    # realizable-domain ends make the maximum sit at a jump; take the best
    # of the final bracket and the original ends
    cand = np.stack((x, a, b, a0, b0))
    vals = np.stack([f(t) for t in cand])
    k = np.argmax(vals, axis=0)
    th = cand[k, np.arange(len(x))]
    val, box = f_eval(p, Z, th)
    return th % TWO_PI, val, box
