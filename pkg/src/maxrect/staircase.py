"""Staircases of reflex vertices and their maintenance under rotation.

In the frame at angle ``phi`` the staircase of ``u`` is the frontier of
points q below-left of u whose box with diagonal uq fits in P.  Read as
a function of height y it is

    L(y) = max over edges of the rightmost point of the edge inside the
           strip (y, u_y) and left of u,

for y between the lower foot and u.  :func:`build_staircase` evaluates
that envelope directly; :class:`StaircaseSweep` keeps the combinatorial
chain current while ``phi`` grows, driven by closed-form certificates.

Extremal elements are polygon vertex ids (>= 0) or the tokens ``ETA``
(left foot of u) and ``DELTA`` (lower foot of u).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .geom import TWO_PI
from .polygon import PolygonShape, segments_in_polygon
from .rayvis import EventMap, corner_on_segment, foot_events_for, shoot_many

ETA = -1
DELTA = -2

KIND_ORDER = {"ray": 0, "shift": 1, "step": 2, "double": 3, "t-align": 4}


@dataclass(frozen=True)
class Step:
    upper: int
    lower: int
    kind: str  # "A": hinge, "B": oblique segment on ``edge``
    edge: int = -1


@dataclass(frozen=True)
class StaircaseState:
    owner: int
    theta: float
    steps: tuple[Step, ...]
    eta_edge: int
    delta_edge: int

    def signature(self):
        return (self.eta_edge, self.delta_edge, self.steps)

    def extremal(self) -> list[int]:
        if not self.steps:
            return []
        return [self.steps[0].upper] + [s.lower for s in self.steps]

    def tips(self, p: PolygonShape) -> list[int]:
        return [v for v in self.extremal() if v >= 0 and p.reflex_mask[v]]

    def oblique_edges(self) -> list[int]:
        return [s.edge for s in self.steps if s.kind == "B"]


@dataclass(frozen=True)
class EventRecord:
    theta: float
    kind: str
    payload: tuple = ()

    def sort_key(self):
        return (self.theta, KIND_ORDER.get(self.kind, 9), self.payload)


class OutsideInterval(ValueError):
    """The lower-left quadrant at u is not locally inside P at this angle."""


def frame_axes(phi: float):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([c, s]), np.array([-s, c])


def lower_left_range(p: PolygonShape, u: int) -> tuple[float, float]:
    """Angles phi (lo < hi, lo in [0, 2pi)) where the open lower-left
    quadrant at u lies locally inside P."""
    U = p.verts[u]
    d_in = p.verts[p.prv[u]] - U
    d_out = p.verts[p.nxt[u]] - U
    s = math.atan2(d_in[1], d_in[0])
    w = (math.atan2(d_out[1], d_out[0]) - s) % TWO_PI
    lo = (s + w - math.pi) % TWO_PI
    return lo, lo + 1.5 * math.pi - w


def top_contact_range(p: PolygonShape, u: int) -> tuple[float, float]:
    """Angles where both edges at u point upward: u can touch a top side."""
    U = p.verts[u]
    d_in = p.verts[p.prv[u]] - U
    d_out = p.verts[p.nxt[u]] - U
    s = math.atan2(d_in[1], d_in[0])
    w = (math.atan2(d_out[1], d_out[0]) - s) % TWO_PI
    lo = (s + w - math.pi) % TWO_PI
    return lo, lo + math.pi - w


def _in_range(phi, lo, hi):
    return (phi - lo) % TWO_PI <= hi - lo


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


@dataclass
class Piece:
    kind: str  # "V": vertical at x of ``owner``; "O": along edge ``edge``
    owner: int
    edge: int
    y_top: float
    y_bot: float
    start_vertex: int = -3  # for "O": vertex where the piece begins, if any
    end_vertex: int = -3  # for "O": vertex where the piece ends, if any


def _clip_edges(XY0, XY1, ux, uy, ylo):
    """Clip edges to x <= ux, ylo <= y <= uy.  Returns clipped endpoints and
    flags telling whether each clipped end is an original endpoint."""
    d = XY1 - XY0
    t0 = np.zeros(len(d))
    t1 = np.ones(len(d))
    keep = np.ones(len(d), dtype=bool)
    for pcoef, q in ((d[:, 0], ux - XY0[:, 0]), (-d[:, 1], XY0[:, 1] - ylo), (d[:, 1], uy - XY0[:, 1])):
        par = pcoef == 0
        keep &= ~(par & (q < 0))
        with np.errstate(divide="ignore", invalid="ignore"):
            r = q / pcoef
        pos = ~par & (pcoef > 0)
        neg = ~par & (pcoef < 0)
        t1 = np.where(pos, np.minimum(t1, r), t1)
        t0 = np.where(neg, np.maximum(t0, r), t0)
    keep &= t0 <= t1
    A = XY0 + t0[:, None] * d
    B = XY0 + t1[:, None] * d
    return A, B, keep, t0 == 0.0, t1 == 1.0


def _envelope(p: PolygonShape, u: int, phi: float):
    """Feet of u and the pieces of L(y) from top to bottom."""
    X, Y = frame_axes(phi)
    V = p.verts
    U = V[u]
    t, e = shoot_many(p, np.array([U, U]), np.array([-X, -Y]))
    tol = 1e3 * p.eps
    if t[0] <= tol or t[1] <= tol or e[0] < 0 or e[1] < 0:
        raise OutsideInterval(f"lower-left quadrant at vertex {u} not inside P at {phi:.6g}")
    eta_edge, delta_edge = int(e[0]), int(e[1])
    F = np.column_stack((V @ X, V @ Y))
    ux, uy = F[u]
    eta_x = ux - t[0]
    delta_y = uy - t[1]
    XY0 = F
    XY1 = F[p.nxt]
    A, B, keep, a_orig, b_orig = _clip_edges(XY0, XY1, ux, uy, delta_y)
    ytol = 1e-12 * max(p.diameter, 1.0)
    ctol = 10 * ytol
    # drop the degenerate point pieces at u itself and strips at or above u_y
    maxx = np.maximum(A[:, 0], B[:, 0])
    keep &= maxx >= eta_x - tol
    keep &= np.minimum(A[:, 1], B[:, 1]) < uy - ytol
    idx = np.nonzero(keep)[0]
    consts = []  # (y_start, x, owner)
    obls = []  # (y_top, y_bot, x_top, x_bot, edge, top_vertex, bot_vertex)
    for i in idx:
        a, b = A[i], B[i]
        ao, bo = a_orig[i], b_orig[i]
        va = int(i) if ao else -3
        vb = int(p.nxt[i]) if bo else -3
        if a[1] < b[1]:
            a, b, va, vb = b, a, vb, va
        # a is the upper end now
        if a[1] - b[1] <= ytol:
            if a[0] >= b[0]:
                consts.append((a[1], a[0], va))
            else:
                consts.append((b[1], b[0], vb))
        elif a[0] < b[0]:
            obls.append((a[1], b[1], a[0], b[0], int(i), va, vb))
            if vb >= 0:
                consts.append((b[1], b[0], vb))
        else:
            owner = va
            if owner < 0 and int(i) == eta_edge and abs(a[1] - uy) <= tol:
                owner = ETA
            consts.append((a[1], a[0], owner))
    # sweep slabs top-down
    ys = {uy, delta_y}
    ys.update(c[0] for c in consts)
    for o in obls:
        ys.add(o[0])
        ys.add(o[1])
    ys = sorted((y for y in ys if delta_y - ytol <= y <= uy + ytol), reverse=True)
    consts.sort(key=lambda c: -c[0])
    ci = 0
    best_x, best_owner = -math.inf, -3
    pieces: list[Piece] = []

    def emit(pc: Piece):
        if pc.y_top - pc.y_bot <= ytol:
            return
        if pieces:
            last = pieces[-1]
            if last.kind == pc.kind and last.owner == pc.owner and last.edge == pc.edge:
                last.y_bot = pc.y_bot
                last.end_vertex = pc.end_vertex
                return
        pieces.append(pc)

    obl_arr = np.array(obls) if obls else np.zeros((0, 7))
    for k in range(len(ys) - 1):
        yh, yl = ys[k], ys[k + 1]
        if yh - yl <= ytol:
            continue
        while ci < len(consts) and consts[ci][0] >= yh - ytol:
            if consts[ci][1] > best_x + ctol or (consts[ci][1] > best_x - ctol and best_owner == -3):
                best_x, best_owner = consts[ci][1], consts[ci][2]
            ci += 1
        ob = None
        if len(obl_arr):
            act = (obl_arr[:, 0] >= yh - ytol) & (obl_arr[:, 1] <= yl + ytol)
            if act.any():
                sub = obl_arr[act]
                ym = 0.5 * (yh + yl)
                xm = sub[:, 2] + (sub[:, 0] - ym) / (sub[:, 0] - sub[:, 1]) * (sub[:, 3] - sub[:, 2])
                j = int(np.argmax(xm))
                ob = sub[j]

        def x_of(o, y):
            return o[2] + (o[0] - y) / (o[0] - o[1]) * (o[3] - o[2])

        if ob is None or x_of(ob, yl) <= best_x + ctol:
            emit(Piece("V", best_owner, -1, yh, yl))
            continue
        oe, ot, obv = int(ob[4]), int(ob[5]), int(ob[6])
        xh = x_of(ob, yh)
        start_v = ot if abs(ob[0] - yh) <= ytol else -3
        end_v = obv if abs(ob[1] - yl) <= ytol else -3
        if xh >= best_x - ctol:
            emit(Piece("O", -3, oe, yh, yl, start_v, end_v))
        else:
            ys_ = ob[0] - (best_x - ob[2]) / (ob[3] - ob[2]) * (ob[0] - ob[1])
            emit(Piece("V", best_owner, -1, yh, ys_))
            emit(Piece("O", -3, oe, ys_, yl, -3, end_v))
    return eta_edge, delta_edge, float(t[0]), float(t[1]), pieces


def _pieces_to_steps(pieces: list[Piece]) -> tuple[Step, ...]:
    steps = []
    upper = ETA
    obl = -1
    prev = None
    for pc in pieces:
        if prev is not None:
            if prev.kind == "V":
                if pc.kind == "V":
                    steps.append(Step(upper, pc.owner, "B" if obl >= 0 else "A", obl))
                    upper, obl = pc.owner, -1
                elif pc.start_vertex >= 0 and pc.start_vertex != prev.owner:
                    # jump onto a new oblique starting at its top vertex
                    steps.append(Step(upper, pc.start_vertex, "B" if obl >= 0 else "A", obl))
                    upper, obl = pc.start_vertex, pc.edge
                else:
                    obl = pc.edge
            else:
                w = pc.owner if pc.kind == "V" else pc.start_vertex
                if w < 0:
                    w = prev.end_vertex
                steps.append(Step(upper, w, "B", obl))
                upper = w
                obl = pc.edge if pc.kind == "O" else -1
        elif pc.kind == "O":
            obl = pc.edge
        prev = pc
    steps.append(Step(upper, DELTA, "B" if obl >= 0 else "A", obl))
    return tuple(steps)


def build_staircase(p: PolygonShape, u, theta: float) -> StaircaseState:
    """Combinatorial staircase of reflex vertex ``u`` in the frame at ``theta``."""
    u = p.vertex_id(u)
    if not p.reflex_mask[u]:
        raise OutsideInterval(f"vertex {u} is not reflex")
    lo, hi = lower_left_range(p, u)
    if not _in_range(theta, lo, hi):
        raise OutsideInterval(f"angle {theta:.6g} outside the valid interval of vertex {u}")
    eta_e, delta_e, _, _, pieces = _envelope(p, u, theta)
    return StaircaseState(u, float(theta), _pieces_to_steps(pieces), eta_e, delta_e)


def staircase_pieces(p: PolygonShape, u: int, theta: float):
    """Feet and envelope pieces (for plotting and tests)."""
    return _envelope(p, u, theta)


# ---------------------------------------------------------------------------
# maintenance
# ---------------------------------------------------------------------------


def _next_mod(base: np.ndarray, period: float, after: float) -> np.ndarray:
    """Smallest angle congruent to ``base`` modulo ``period`` that is > after."""
    return after + ((base - after) % period)


@dataclass
class SweepStats:
    events: int = 0
    changes: int = 0
    ray: int = 0
    shift: int = 0
    step: int = 0
    noop: int = 0
    rebuilds: int = 0


@dataclass
class _Slot:
    step: Step
    uid: int


class StaircaseSweep:
    """Event-driven staircase of ``u`` over an angular range.

    ``history`` collects ``(phi, state)`` pairs: ``state`` holds from
    ``phi`` up to the next entry.
    """

    EPS_ANGLE = 1e-7
    BATCH = 1e-7
    NUMERIC_WINDOW = 0.1

    def __init__(self, p: PolygonShape, u: int, em: EventMap | None = None, trace=None):
        self.p = p
        self.u = int(u)
        self.em = em
        self._own_feet = None
        self.trace = trace
        self.stats = SweepStats()
        lo, hi = lower_left_range(p, self.u)
        self.lo = lo + self.EPS_ANGLE
        self.hi = hi - self.EPS_ANGLE
        U = p.verts[self.u]
        others = np.arange(p.n)
        seen = segments_in_polygon(p, np.repeat(U[None, :], p.n, axis=0), p.verts, p.eps)
        seen[self.u] = False
        self.visible = others[seen]
        self._uid = 0
        self._queue: list = []
        self._seq = 0
        self.history: list[tuple[float, StaircaseState]] = []
        self.phi = self.lo
        self.slots: list[_Slot] = []
        self.eta_edge = -1
        self.delta_edge = -1
        self._feet_version = 0
        self._alive: set[int] = set()
        self._nrm = np.column_stack((-(p.E1[:, 1] - p.E0[:, 1]), p.E1[:, 0] - p.E0[:, 0]))
        self._off = np.einsum("ij,ij->i", self._nrm, p.E0)
        self._ln2 = np.einsum("ij,ij->i", p.E1 - p.E0, p.E1 - p.E0)

    # -- state -------------------------------------------------------------

    def state(self) -> StaircaseState:
        return StaircaseState(self.u, self.phi, tuple(s.step for s in self.slots), self.eta_edge, self.delta_edge)

    def _new_uid(self) -> int:
        self._uid += 1
        self._alive.add(self._uid)
        return self._uid

    def _push(self, theta, kind, payload):
        if theta > self.hi:
            return
        self._seq += 1
        heapq.heappush(self._queue, (theta, KIND_ORDER[kind], self._seq, kind, payload))

    # -- certificates ------------------------------------------------------

    def _coord(self, elem: int, phi, which: str):
        """x or y coordinate of an extremal element at ``phi`` (scalar or array),
        assuming the feet stay on their current edges."""
        phi = np.asarray(phi, dtype=float)
        c, s = np.cos(phi), np.sin(phi)
        p = self.p
        if elem >= 0 or (elem == ETA and which == "y") or (elem == DELTA and which == "x"):
            v = p.verts[elem if elem >= 0 else self.u]
            out = v[0] * c + v[1] * s if which == "x" else -v[0] * s + v[1] * c
        else:
            U = p.verts[self.u]
            e = self.eta_edge if elem == ETA else self.delta_edge
            a, b = p.E0[e], p.E1[e]
            ax, ay = a[0] * c + a[1] * s, -a[0] * s + a[1] * c
            bx, by = b[0] * c + b[1] * s, -b[0] * s + b[1] * c
            ux, uy = U[0] * c + U[1] * s, -U[0] * s + U[1] * c
            with np.errstate(divide="ignore", invalid="ignore"):
                if elem == ETA:
                    out = ax + (uy - ay) / (by - ay) * (bx - ax)
                else:
                    out = ay + (ux - ax) / (bx - ax) * (by - ay)
        return out if np.ndim(out) else float(out)

    def _schedule_step(self, idx: int):
        slot = self.slots[idx]
        st = slot.step
        a, b = st.upper, st.lower
        p = self.p
        V = p.verts
        phi = self.phi + self.BATCH
        cands = []
        tol = 1e3 * p.eps
        if a >= 0:
            d = V - V[a]
            th = _next_mod(np.arctan2(d[:, 1], d[:, 0]) + 0.5 * math.pi, math.pi, phi)
            for j in np.argsort(th):
                if j == a or th[j] > self.hi:
                    continue
                X, Y = frame_axes(th[j])
                wy = V[j] @ Y
                if wy < V[a] @ Y and wy > self._coord_safe(b, th[j], "y") - tol:
                    cands.append(th[j])
                    break
        if b >= 0:
            d = V - V[b]
            th = _next_mod(np.arctan2(d[:, 1], d[:, 0]), math.pi, phi)
            for j in np.argsort(th):
                if j == b or th[j] > self.hi:
                    continue
                X, Y = frame_axes(th[j])
                wx = V[j] @ X
                if wx < V[b] @ X and wx > self._coord_safe(a, th[j], "x") - tol:
                    cands.append(th[j])
                    break
        if a >= 0 and b >= 0:
            theta, _, valid = corner_on_segment(V[b][None, :], V[a][None, :], p.E0, p.E1, 1.0, 1.0)
            nxt = _next_mod(theta, TWO_PI, phi)
            nxt = nxt[valid]
            if nxt.size:
                cands.append(float(nxt.min()))
        else:
            t = self._numeric_hinge(a, b, phi)
            cands.append(t)
        # an edge at a or b, or the oblique edge, turning axis-parallel
        touch = {st.edge} if st.kind == "B" else set()
        for v in (a, b):
            if v >= 0:
                touch.update((v, int(p.prv[v])))
        if touch:
            ed = p.E1[list(touch)] - p.E0[list(touch)]
            th = _next_mod(np.arctan2(ed[:, 1], ed[:, 0]), 0.5 * math.pi, phi)
            cands.append(float(th.min()))
        if a == ETA:
            cands.append(self._foot_event(0, phi))
        if b == DELTA:
            cands.append(self._foot_event(1, phi))
        cands = [c for c in cands if c <= self.hi]
        if cands:
            self._push(min(cands), "step", (slot.uid,))

    def _coord_safe(self, elem, phi, which):
        v = self._coord(elem, phi, which)
        return v if math.isfinite(v) else -math.inf

    def _foot_event(self, kind: int, phi: float) -> float:
        """Next orientation at which a vertex crosses the segment hanging off
        a foot, read from the precomputed foot-event lists."""
        edge = self.eta_edge if kind == 0 else self.delta_edge
        if self.em is not None:
            fe = self.em.foot_events(self.u, edge)
        else:
            if self._own_feet is None:
                self._own_feet = foot_events_for(self.p, self.u)
            fe = self._own_feet.get((self.u, edge))
        if fe is None or len(fe) == 0:
            return math.inf
        th = fe.theta[fe.kind == kind]
        if th.size == 0:
            return math.inf
        nxt = _next_mod(th, TWO_PI, phi)
        return float(nxt.min())

    def _numeric_hinge(self, a: int, b: int, phi: float) -> float:
        """Next angle where the hinge (a_x, b_y) meets an edge, when a or b
        is a foot.  Sampled over a short window; when nothing is found the
        window end is returned so the step gets rechecked there."""
        p = self.p
        end = min(phi + self.NUMERIC_WINDOW, self.hi)
        if end <= phi:
            return math.inf
        grid = np.linspace(phi, end, 17)
        nrm = self._nrm
        off = self._off

        def hinge(t):
            t = np.asarray(t, dtype=float)
            hx, hy = self._coord(a, t, "x"), self._coord(b, t, "y")
            c, s = np.cos(t), np.sin(t)
            return np.stack((hx * c - hy * s, hx * s + hy * c), axis=-1)

        H = hinge(grid)
        vals = H @ nrm.T - off
        pos = ((H[:, None, :] - p.E0[None]) * (p.E1 - p.E0)[None]).sum(axis=2) / self._ln2
        inside = (pos > -0.05) & (pos < 1.05)
        cross = (vals[:-1] * vals[1:] < 0) & (inside[:-1] | inside[1:])
        if not cross.any():
            return end
        best = end
        rows, cols = np.nonzero(cross)
        for i in np.unique(rows):
            if grid[i] >= best:
                break
            for j in cols[rows == i]:
                f = lambda t, j=j: float(nrm[j] @ hinge(t) - off[j])  # noqa: E731
                try:
                    r = brentq(f, grid[i], grid[i + 1], xtol=1e-13)
                except ValueError:
                    continue
                best = min(best, r)
        return best

    def _schedule_ray(self):
        p = self.p
        V = p.verts
        U = V[self.u]
        phi = self.phi + self.BATCH
        vis = self.visible
        cands = []
        d = V[vis] - U
        if vis.size:
            # left ray passes a visible vertex
            th = _next_mod(np.arctan2(-d[:, 1], -d[:, 0]), TWO_PI, phi)
            cands.append(th.min())
            # lower ray passes a visible vertex
            th = _next_mod(np.arctan2(d[:, 1], d[:, 0]) + 0.5 * math.pi, TWO_PI, phi)
            cands.append(th.min())
        for e in (self.eta_edge, self.delta_edge):
            ed = p.E1[e] - p.E0[e]
            cands.append(float(_next_mod(np.array([math.atan2(ed[1], ed[0])]), 0.5 * math.pi, phi)[0]))
        c = min(cands)
        if c <= self.hi:
            self._push(c, "ray", ("feet", self._feet_version))

    # -- driving -----------------------------------------------------------

    def start(self):
        eta_e, delta_e, _, _, pieces = _envelope(self.p, self.u, self.phi)
        self.eta_edge, self.delta_edge = eta_e, delta_e
        self.slots = [_Slot(s, self._new_uid()) for s in _pieces_to_steps(pieces)]
        self.history.append((self.phi, self.state()))
        for i in range(len(self.slots)):
            self._schedule_step(i)
        self._schedule_ray()

    def _valid(self, kind, payload) -> bool:
        if kind == "ray":
            return payload[1] == self._feet_version
        return all(uid in self._alive for uid in payload)

    def next_event_angle(self) -> float:
        while self._queue:
            theta, _, _, kind, payload = self._queue[0]
            if self._valid(kind, payload):
                return theta
            heapq.heappop(self._queue)
        return math.inf

    def advance_to(self, phi_target: float) -> list[EventRecord]:
        """Process every event up to ``phi_target``."""
        out = []
        while True:
            t = self.next_event_angle()
            if t > phi_target or t > self.hi:
                break
            out.extend(self._process_batch(t))
        return out

    def run(self) -> list[EventRecord]:
        if not self.history:
            self.start()
        return self.advance_to(self.hi)

    def _process_batch(self, t: float) -> list[EventRecord]:
        batch = []
        while self._queue and self._queue[0][0] <= t + self.BATCH:
            theta, _, _, kind, payload = heapq.heappop(self._queue)
            if self._valid(kind, payload):
                batch.append((theta, kind, payload))
        if not batch:
            return []
        te = max(b[0] for b in batch)
        return self.process_event(EventRecord(te, batch[0][1], tuple(b[2] for b in batch)))

    def process_event(self, ev: EventRecord) -> list[EventRecord]:
        """Apply one (batched) event: rebuild at just past ``ev.theta`` and
        splice the changed part of the chain."""
        self.stats.events += 1
        # step a little further when the rebuild lands on a near-degenerate
        # configuration (an extremal element that is neither vertex nor foot)
        for mult in (1.0, 3.0, 10.0, 30.0):
            phi_new = min(ev.theta + mult * self.BATCH, self.hi)
            try:
                eta_e, delta_e, _, _, pieces = _envelope(self.p, self.u, phi_new)
            except OutsideInterval:
                self.phi = phi_new
                return []
            self.stats.rebuilds += 1
            new_steps = _pieces_to_steps(pieces)
            if all(s.upper >= DELTA and s.lower >= DELTA for s in new_steps):
                break
        old_steps = [s.step for s in self.slots]
        i = 0
        while i < min(len(old_steps), len(new_steps)) and old_steps[i] == new_steps[i]:
            i += 1
        j = 0
        while (
            j < min(len(old_steps), len(new_steps)) - i
            and old_steps[len(old_steps) - 1 - j] == new_steps[len(new_steps) - 1 - j]
        ):
            j += 1
        feet_changed = (eta_e, delta_e) != (self.eta_edge, self.delta_edge)
        self.phi = phi_new
        removed = old_steps[i : len(old_steps) - j]
        added = new_steps[i : len(new_steps) - j]
        named = {uid for pl in ev.payload if pl and pl[0] != "feet" for uid in pl}
        feet_named = any(pl and pl[0] == "feet" for pl in ev.payload)
        records = []
        changed = bool(removed or added or feet_changed)
        if changed:
            self.stats.changes += 1
            for s in self.slots[i : len(self.slots) - j]:
                self._alive.discard(s.uid)
            new_slots = [_Slot(s, self._new_uid()) for s in added]
            self.slots[i : len(self.slots) - j] = new_slots
            kind = self._label(removed, added, feet_changed)
            if feet_changed:
                self.stats.ray += 1
                self.stats.shift += max(len(removed), len(added))
            else:
                self.stats.step += 1
            self.eta_edge, self.delta_edge = eta_e, delta_e
            records.append(EventRecord(ev.theta, kind, (tuple(removed), tuple(added))))
            if self.trace is not None:
                self.trace.write(f"{ev.theta:.12f} {kind} u={self.u} -{len(removed)} +{len(added)}\n")
            for k in range(i, i + len(new_slots)):
                self._schedule_step(k)
            self.history.append((ev.theta, self.state()))
        else:
            self.stats.noop += 1
        # certificates consumed by this batch but still standing get renewed
        for k, s in enumerate(self.slots):
            if s.uid in named:
                self._alive.discard(s.uid)
                s.uid = self._new_uid()
                self._schedule_step(k)
        if feet_changed or feet_named:
            self._feet_version += 1
            self._schedule_ray()
            self._reschedule_feet_steps()
        return records

    def _reschedule_feet_steps(self):
        for k in {0, len(self.slots) - 1}:
            s = self.slots[k]
            self._alive.discard(s.uid)
            s.uid = self._new_uid()
            self._schedule_step(k)

    @staticmethod
    def _label(removed, added, feet_changed) -> str:
        if feet_changed:
            return "ray"
        if len(removed) == 2 and len(added) == 1:
            return "step-merge"
        if len(removed) == 1 and len(added) == 2:
            return "step-split"
        if len(removed) == 1 and len(added) == 1:
            r, a = removed[0], added[0]
            if (r.upper, r.lower) == (a.upper, a.lower):
                return "hinge-oblique"
            return "tip-vanish"
        return "step"

    def state_at(self, phi: float) -> StaircaseState:
        """Structure in force at ``phi`` (from the recorded history)."""
        keys = [h[0] for h in self.history]
        i = int(np.searchsorted(keys, phi, side="right")) - 1
        return self.history[max(i, 0)][1]


def double_lookup(pair: tuple[StaircaseState, StaircaseState], p: PolygonShape, t: int, theta: float):
    """For a tip ``t`` of the first staircase: the upper tip of the step of
    the perpendicular staircase at t's height, and the edge holding the
    left foot of t.

    The perpendicular staircase lives in the frame ``theta + pi/2``; its
    steps run bottom-to-top in the frame ``theta``.  At an exact tie the
    upper step wins.
    """
    left, right = pair
    if t not in left.tips(p):
        raise ValueError(f"vertex {t} is not a tip")
    X, Y = frame_axes(theta)
    ty = p.verts[t] @ Y
    f = None
    # in frame theta, right-staircase extremal elements go upward along the chain
    ext = right.extremal()
    for s in right.steps:
        lo_y = _elem_y_theta(p, right, s.upper, theta)
        hi_y = _elem_y_theta(p, right, s.lower, theta)
        if lo_y <= ty <= hi_y:
            f = s.lower
            if ty < hi_y:
                break
    del ext
    g = int(shoot_many(p, p.verts[t][None, :], (-X)[None, :])[1][0])
    return f, g


def _elem_y_theta(p: PolygonShape, st: StaircaseState, elem: int, theta: float) -> float:
    """Height in frame ``theta`` of an element of a staircase built at theta + pi/2."""
    X, Y = frame_axes(theta)
    U = p.verts[st.owner]
    if elem >= 0:
        return float(p.verts[elem] @ Y)
    Xp, Yp = frame_axes(theta + 0.5 * math.pi)
    if elem == DELTA:
        # lower foot of the perpendicular frame lies on the ray u + s * X
        t = shoot_many(p, U[None, :], (-Yp)[None, :])[0][0]
        return float((U - t * Yp) @ Y)
    return float(U @ Y)


@dataclass
class SweepTrace:
    lines: list[str] = field(default_factory=list)

    def write(self, s: str):
        self.lines.append(s)
