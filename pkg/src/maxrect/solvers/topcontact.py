"""Rectangles with a reflex vertex on the top side.

For a reflex vertex u and an orientation theta in the range where u can
touch a top side, the left staircase of u at theta bounds the left side
of the rectangle and the left staircase at theta + pi/2, read in the frame
of theta, bounds its right side.  Both are piecewise linear in the height
of the bottom side, so for a fixed pair of pieces the area is a quadratic
in that height.  This module maximizes

    F_u(theta) = max over bottom heights y of (R(y) - L(y)) * (u_y - y)

over theta, one structure interval at a time: between two staircase
events every coordinate is a smooth function of theta.  All rectangles of
types B, C, D and E are found this way, since each has a side-contact.

Evaluation is vectorised over samples: sample ``j`` carries an orientation
and the indices of the two staircase states in force there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geom import HALF_PI, RectSpec
from ..rayvis import EventMap
from ..search import INVPHI
from ..staircase import (
    DELTA,
    ETA,
    OutsideInterval,
    StaircaseState,
    StaircaseSweep,
    build_staircase,
    top_contact_range,
)

SPACING = 0.003  # seed spacing inside structure intervals (radians)
MIN_SAMPLES = 3
XTOL = 1e-12


@dataclass
class Bracket:
    u: int
    lo: float
    hi: float
    left: int
    right: int
    value: float
    at_end: bool  # the seed maximum sits on a structure-interval boundary


@dataclass
class VertexContext:
    """Sweep results and state tables for one reflex vertex."""

    u: int
    lo: float
    hi: float
    states: list[StaircaseState]
    phis: np.ndarray | None = None
    # per state: (kind_b, upper, lower, edge) padded to a common width
    tab: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None
    events: int = 0
    brackets: list[Bracket] = field(default_factory=list)


def _state_table(states: list[StaircaseState], n: int):
    m = max(len(s.steps) for s in states)
    S = len(states)
    kb = np.zeros((S, m), dtype=bool)
    up = np.full((S, m), n, dtype=np.int64)  # padding points at a dummy column
    lo = np.full((S, m), n, dtype=np.int64)
    ed = np.zeros((S, m), dtype=np.int64)
    ok = np.zeros((S, m), dtype=bool)
    for i, st in enumerate(states):
        for j, s in enumerate(st.steps):
            kb[i, j] = s.kind == "B"
            up[i, j] = _col(s.upper, n)
            lo[i, j] = _col(s.lower, n)
            ed[i, j] = max(s.edge, 0)
            ok[i, j] = True
    feet = np.array([[s.eta_edge, s.delta_edge] for s in states], dtype=np.int64)
    return kb, up, lo, ed, ok, feet


def _col(elem: int, n: int) -> int:
    # vertex columns 0..n-1; n+1: left foot; n+2: lower foot
    if elem >= 0:
        return elem
    return n + 1 if elem == ETA else n + 2


class TopContactEngine:
    """Per-polygon driver: sweeps, seeds, refines and realizes."""

    def __init__(self, p, em: EventMap | None = None, spacing: float = SPACING, trace=None):
        self.p = p
        self.em = em
        self.spacing = spacing
        self.trace = trace
        self.ctx: dict[int, VertexContext] = {}
        self._E = np.stack((p.E0[:, 0], p.E0[:, 1], p.E1[:, 0], p.E1[:, 1]))

    # ---------------------------------------------------------------- sweep

    def sweep(self, u: int) -> VertexContext:
        p = self.p
        lo, hi = top_contact_range(p, u)
        sw = StaircaseSweep(p, u, self.em, trace=self.trace)
        sw.run()
        hist = sw.history
        phis = np.array([h[0] for h in hist])
        states = [h[1] for h in hist]
        ctx = VertexContext(u, lo, hi, states, phis, events=sw.stats.events)
        ctx.tab = _state_table(states, p.n)
        # structure breakpoints in theta
        bp = np.concatenate(([lo, hi], phis, phis - HALF_PI))
        bp = np.unique(bp[(bp > lo) & (bp < hi)])
        bp = np.concatenate(([lo], bp, [hi]))
        keep = np.concatenate(([True], np.diff(bp) > 1e-12))
        bp = bp[keep]
        bp[-1] = hi
        mids = 0.5 * (bp[:-1] + bp[1:])
        li = np.clip(np.searchsorted(phis, mids, side="right") - 1, 0, len(phis) - 1)
        ri = np.clip(np.searchsorted(phis, mids + HALF_PI, side="right") - 1, 0, len(phis) - 1)
        widths = np.diff(bp)
        cnt = np.maximum(np.ceil(widths / self.spacing).astype(int) + 1, MIN_SAMPLES)
        iv = np.repeat(np.arange(len(widths)), cnt)
        start = np.repeat(np.cumsum(cnt) - cnt, cnt)
        pos = (np.arange(cnt.sum()) - start) / np.repeat(cnt - 1, cnt)
        th = bp[iv] + pos * widths[iv]
        val, _ = self.evaluate(ctx, th, li[iv], ri[iv])
        # seed maxima inside each interval
        prev_same = np.concatenate(([False], iv[1:] == iv[:-1]))
        next_same = np.concatenate((iv[:-1] == iv[1:], [False]))
        vp = np.concatenate(([-np.inf], val[:-1]))
        vn = np.concatenate((val[1:], [-np.inf]))
        ge_prev = ~prev_same | (val >= vp)
        ge_next = ~next_same | (val >= vn)
        flat = (prev_same & (val == vp)) & (next_same & (val == vn))
        peak = ge_prev & ge_next & ~flat & (val > 0)
        for j in np.nonzero(peak)[0]:
            a = th[j - 1] if prev_same[j] else th[j]
            b = th[j + 1] if next_same[j] else th[j]
            k = iv[j]
            ctx.brackets.append(Bracket(u, a, b, int(li[k]), int(ri[k]), float(val[j]), not (prev_same[j] and next_same[j])))
        self.ctx[u] = ctx
        return ctx

    # ----------------------------------------------------------- evaluation

    def evaluate(self, ctx: VertexContext, theta, li, ri):
        """``F_u`` at each sample plus the maximizing frame box."""
        p = self.p
        n = p.n
        th = np.asarray(theta, dtype=float)
        li = np.asarray(li)
        ri = np.asarray(ri)
        c, s = np.cos(th)[:, None], np.sin(th)[:, None]
        V = p.verts
        VX = V[:, 0][None, :] * c + V[:, 1][None, :] * s
        VY = -V[:, 0][None, :] * s + V[:, 1][None, :] * c
        ex0, ey0, ex1, ey1 = self._E
        AX = ex0[None, :] * c + ey0[None, :] * s
        AY = -ex0[None, :] * s + ey0[None, :] * c
        BX = ex1[None, :] * c + ey1[None, :] * s
        BY = -ex1[None, :] * s + ey1[None, :] * c
        ux, uy = VX[:, ctx.u], VY[:, ctx.u]
        rows = np.arange(len(th))
        kb, up, lo, ed, ok, feet = ctx.tab

        def x_at_y(e, y):
            ax, ay, bx, by = AX[rows, e], AY[rows, e], BX[rows, e], BY[rows, e]
            return ax + (y - ay) * (bx - ax) / (by - ay)

        def y_at_x(e, x):
            ax, ay, bx, by = AX[rows, e], AY[rows, e], BX[rows, e], BY[rows, e]
            return ay + (x - ax) * (by - ay) / (bx - ax)

        with np.errstate(divide="ignore", invalid="ignore"):
            # element tables: vertices, a dummy, then the two feet
            fl, fr = feet[li], feet[ri]
            lx = np.column_stack((VX, np.zeros_like(ux), x_at_y(fl[:, 0], uy), ux))
            ly = np.column_stack((VY, np.zeros_like(ux), uy, y_at_x(fl[:, 1], ux)))
            # right staircase, frame theta + pi/2: its left foot is our lower
            # foot and its lower foot our right foot
            rx = np.column_stack((VX, np.zeros_like(ux), ux, x_at_y(fr[:, 1], uy)))
            ry = np.column_stack((VY, np.zeros_like(ux), y_at_x(fr[:, 0], ux), uy))
            L = self._left_pieces(rows, lx, ly, kb[li], up[li], lo[li], ed[li], ok[li], AX, AY, BX, BY, uy)
            R = self._right_pieces(rows, rx, ry, kb[ri], up[ri], lo[ri], ed[ri], ok[ri], AX, AY, BX, BY, uy)
            return self._pair_max(L, R, uy)

    @staticmethod
    def _edge_line(rows, e, AX, AY, BX, BY, uy):
        r = rows[:, None]
        ax, ay, bx, by = AX[r, e], AY[r, e], BX[r, e], BY[r, e]
        k = (bx - ax) / (by - ay)
        # x = A + K d with d = u_y - y
        return ax + (uy[:, None] - ay) * k, -k, (ax, ay, bx, by)

    def _left_pieces(self, rows, ex, ey, kb, up, lo, ed, ok, AX, AY, BX, BY, uy):
        r = rows[:, None]
        ax, ay = ex[r, up], ey[r, up]
        by = ey[r, lo]
        A, K, (qx, qy, px, py) = self._edge_line(rows, ed, AX, AY, BX, BY, uy)
        ye = qy + (ax - qx) * (py - qy) / (px - qx)
        ye = np.where(kb, np.clip(ye, by, ay), by)
        # V(upper) from ye up to the upper element, then the oblique edge
        vA, vK, vlo, vhi = ax, np.zeros_like(ax), ye, ay
        oA, oK, olo, ohi = A, K, by, ye
        okO = ok & kb
        return (
            np.concatenate((vA, oA), axis=1),
            np.concatenate((vK, oK), axis=1),
            np.concatenate((np.where(ok, vlo, np.inf), np.where(okO, olo, np.inf)), axis=1),
            np.concatenate((vhi, ohi), axis=1),
        )

    def _right_pieces(self, rows, ex, ey, kb, up, lo, ed, ok, AX, AY, BX, BY, uy):
        r = rows[:, None]
        ay = ey[r, up]
        bx, by = ex[r, lo], ey[r, lo]
        A, K, (qx, qy, px, py) = self._edge_line(rows, ed, AX, AY, BX, BY, uy)
        ye = qy + (bx - qx) * (py - qy) / (px - qx)
        ye = np.where(kb, np.clip(ye, ay, by), ay)
        # oblique edge from the upper element's height, then V(lower)
        vA, vK, vlo, vhi = bx, np.zeros_like(bx), ye, by
        oA, oK, olo, ohi = A, K, ay, ye
        okO = ok & kb
        return (
            np.concatenate((vA, oA), axis=1),
            np.concatenate((vK, oK), axis=1),
            np.concatenate((np.where(ok, vlo, np.inf), np.where(okO, olo, np.inf)), axis=1),
            np.concatenate((vhi, ohi), axis=1),
        )

    @staticmethod
    def _pair_max(L, R, uy):
        LA, LK, Llo, Lhi = (a[:, :, None] for a in L)
        RA, RK, Rlo, Rhi = (a[:, None, :] for a in R)
        U = uy[:, None, None]
        d0 = np.maximum(U - np.minimum(np.minimum(Lhi, Rhi), U), 0.0)
        d1 = U - np.maximum(Llo, Rlo)
        A0 = RA - LA
        C = RK - LK
        with np.errstate(divide="ignore", invalid="ignore"):
            ds = np.where(C < 0, np.clip(-A0 / (2 * C), d0, d1), d1)
        val = (A0 + C * ds) * ds
        val = np.where((d1 >= d0) & np.isfinite(val), val, -np.inf)
        T = val.shape[0]
        flatv = val.reshape(T, -1)
        k = np.argmax(flatv, axis=1)
        best = flatv[np.arange(T), k]
        i, j = np.unravel_index(k, val.shape[1:])
        t = np.arange(T)
        d = ds[t, i, j]
        x0 = LA[t, i, 0] + LK[t, i, 0] * d
        x1 = RA[t, 0, j] + RK[t, 0, j] * d
        box = np.column_stack((x0, x1, uy - d, uy))
        return best, box

    # ----------------------------------------------------------- refinement

    def refine(self, brackets: list[Bracket], xtol: float = XTOL):
        """Golden-section search on every bracket at once."""
        if not brackets:
            return np.zeros(0), np.zeros(0)
        by_u: dict[int, list[int]] = {}
        for i, b in enumerate(brackets):
            by_u.setdefault(b.u, []).append(i)
        th_out = np.zeros(len(brackets))
        val_out = np.zeros(len(brackets))
        for u, idx in by_u.items():
            ctx = self.ctx[u]
            li = np.array([brackets[i].left for i in idx])
            ri = np.array([brackets[i].right for i in idx])
            a = np.array([brackets[i].lo for i in idx])
            b = np.array([brackets[i].hi for i in idx])

            def f(t):
                return self.evaluate(ctx, t, li, ri)[0]

            fa, fb = f(a), f(b)
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
            fx = np.maximum(fc, fd)
            # endpoints of the original brackets
            a0 = np.array([brackets[i].lo for i in idx])
            b0 = np.array([brackets[i].hi for i in idx])
            fa0, fb0 = f(a0), f(b0)
            pick = np.argmax(np.stack((fx, fa0, fb0)), axis=0)
            th = np.choose(pick, (x, a0, b0))
            th_out[idx] = th
            val_out[idx] = np.choose(pick, (fx, fa0, fb0))
        return th_out, val_out

    def realize(self, u: int, theta: float, left: int, right: int) -> list[RectSpec]:
        """Frame boxes at ``theta`` from fresh staircases and from the swept states.

        The two agree away from the ends of the valid range; at an end the
        fresh build may be impossible or differ, so both are returned and
        the caller keeps whichever passes containment.
        """
        ctx = self.ctx[u]
        boxes = []
        try:
            sl = build_staircase(self.p, u, theta)
            sr = build_staircase(self.p, u, theta + HALF_PI)
            tmp = VertexContext(u, ctx.lo, ctx.hi, [sl, sr])
            tmp.tab = _state_table(tmp.states, self.p.n)
            boxes.append(self.evaluate(tmp, [theta], [0], [1]))
        except OutsideInterval:
            pass
        boxes.append(self.evaluate(ctx, [theta], [left], [right]))
        out: list[RectSpec] = []
        for val, box in boxes:
            x0, x1, y0, y1 = box[0]
            if np.isfinite(val[0]) and val[0] > 0 and x1 > x0 and y1 > y0:
                r = RectSpec.from_frame_box(x0, x1, y0, y1, theta)
                if not any(abs(q.center.x - r.center.x) + abs(q.center.y - r.center.y) + abs(q.area - r.area) < 1e-15 for q in out):
                    out.append(r)
        return out


def top_contact_brackets(p, em=None, spacing: float = SPACING, trace=None) -> TopContactEngine:
    eng = TopContactEngine(p, em, spacing, trace)
    for u in p.reflex_ids:
        eng.sweep(int(u))
    return eng


