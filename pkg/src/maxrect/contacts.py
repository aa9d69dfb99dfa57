"""Contacts, determining sets and their realization at a fixed orientation.

A determining set (DS) is a set of contacts that pins down, at every
orientation theta, a largest axis-aligned rectangle in the frame of theta.
Each contact contributes one or two linear equations on the frame box
``(x0, x1, y0, y1)``; realization solves that system and, when one degree
of freedom is left, maximizes the (quadratic) area along it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .geom import HALF_PI, RectSpec, to_frame_array
from .polygon import PolygonShape, contains_rect
from .search import local_maxima

SIDES = ("top", "right", "bottom", "left")
CORNERS = ("tl", "tr", "br", "bl")
TYPES = ("A", "B1", "B2", "B3", "C1", "C2", "C3", "D1", "D2", "E1", "E2", "E3", "F1", "F2")

_SIDE_VEC = {"top": (0, 1), "right": (1, 0), "bottom": (0, -1), "left": (-1, 0)}
_CORNER_VEC = {"tl": (-1, 1), "tr": (1, 1), "br": (1, -1), "bl": (-1, -1)}
_VEC_SIDE = {v: k for k, v in _SIDE_VEC.items()}
_VEC_CORNER = {v: k for k, v in _CORNER_VEC.items()}
# box variable indices (x0, x1, y0, y1) of each corner
_CORNER_VARS = {"tl": (0, 3), "tr": (1, 3), "br": (1, 2), "bl": (0, 2)}
_SIDE_ENDS = {"top": ("tl", "tr"), "right": ("tr", "br"), "bottom": ("br", "bl"), "left": ("bl", "tl")}
_OPP_SIDE = {"top": "bottom", "bottom": "top", "left": "right", "right": "left"}
_OPP_CORNER = {"tl": "br", "br": "tl", "tr": "bl", "bl": "tr"}
_CORNER_SIDES = {c: tuple(s for s, ends in _SIDE_ENDS.items() if c in ends) for c in CORNERS}


class Unrealizable(ValueError):
    """The contacts of a DS cannot be met together at this orientation."""


@dataclass(frozen=True)
class Contact:
    """A side-contact ("sc") of a reflex vertex or a corner-contact ("cc").

    ``element`` is ``("vertex", gid)`` or ``("edge", eid)``; it is ``None``
    only in templates produced by :func:`enumerate_bcs`.
    """

    kind: str
    element: tuple[str, int] | None
    label: str

    def __post_init__(self):
        if self.kind == "sc":
            if self.label not in SIDES:
                raise ValueError(f"side-contact needs a side label, got {self.label!r}")
            if self.element is not None and self.element[0] != "vertex":
                raise ValueError("side-contacts are made by vertices")
        elif self.kind == "cc":
            if self.label not in CORNERS:
                raise ValueError(f"corner-contact needs a corner label, got {self.label!r}")
        else:
            raise ValueError(f"unknown contact kind {self.kind!r}")


def sc(gid: int, side: str) -> Contact:
    return Contact("sc", ("vertex", int(gid)), side)


def cc_edge(eid: int, corner: str) -> Contact:
    return Contact("cc", ("edge", int(eid)), corner)


def cc_vertex(gid: int, corner: str) -> Contact:
    return Contact("cc", ("vertex", int(gid)), corner)


@dataclass(frozen=True)
class DetSet:
    type: str
    contacts: tuple[Contact, ...]

    def __post_init__(self):
        object.__setattr__(self, "contacts", tuple(self.contacts))

    @property
    def sides(self) -> set[str]:
        return {c.label for c in self.contacts if c.kind == "sc"}

    @property
    def corners(self) -> set[str]:
        return {c.label for c in self.contacts if c.kind == "cc"}

    def elements(self) -> list[tuple[str, int]]:
        return [c.element for c in self.contacts if c.element is not None]

    def key(self) -> tuple:
        return tuple(sorted((c.kind, c.element or ("", -1), c.label) for c in self.contacts))


@dataclass(frozen=True)
class FeasibleInterval:
    lo: float
    hi: float
    provenance: tuple = ()

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")


@dataclass(frozen=True)
class AngleParams:
    """Angles and lengths feeding a closed-form area expression.

    Lengths along the line through u and v are signed (measured in the
    direction from u to v), which keeps the formulas valid on both sides of
    their figure's configuration.
    """

    kind: str
    alpha: float
    beta: float
    gamma: float
    lengths: Mapping[str, float] = field(default_factory=dict)


# ---------------------------------------------------------------- realization


def _frame_point(p: PolygonShape, gid: int, theta: float) -> np.ndarray:
    return to_frame_array(p.verts[gid : gid + 1], theta)[0]


def _frame_edge(p: PolygonShape, eid: int, theta: float):
    ab = to_frame_array(np.vstack((p.E0[eid], p.E1[eid])), theta)
    return ab[0], ab[1]


def _system(Z: DetSet, theta: float, p: PolygonShape):
    """Equations ``M X = r`` and inequalities ``G X >= h`` of a DS."""
    M, r, G, h = [], [], [], []
    scv = [c.element for c in Z.contacts if c.kind == "sc"]
    if len(set(scv)) != len(scv):
        raise ValueError("a vertex cannot touch two sides")
    for c in Z.contacts:
        if c.element is None:
            raise ValueError("template contact has no element")
        kind, idx = c.element
        if c.kind == "sc":
            v = _frame_point(p, idx, theta)
            row = np.zeros(4)
            if c.label in ("top", "bottom"):
                row[3 if c.label == "top" else 2] = 1.0
                M.append(row)
                r.append(v[1])
                G.append([-1, 0, 0, 0]), h.append(-v[0])
                G.append([0, 1, 0, 0]), h.append(v[0])
            else:
                row[1 if c.label == "right" else 0] = 1.0
                M.append(row)
                r.append(v[0])
                G.append([0, 0, -1, 0]), h.append(-v[1])
                G.append([0, 0, 0, 1]), h.append(v[1])
            continue
        ix, iy = _CORNER_VARS[c.label]
        if kind == "vertex":
            w = _frame_point(p, idx, theta)
            for var, val in ((ix, w[0]), (iy, w[1])):
                row = np.zeros(4)
                row[var] = 1.0
                M.append(row)
                r.append(val)
            continue
        a, b = _frame_edge(p, idx, theta)
        d = b - a
        row = np.zeros(4)
        row[ix], row[iy] = -d[1], d[0]
        M.append(row)
        r.append(-d[1] * a[0] + d[0] * a[1])
        # corner stays within the segment
        g = np.zeros(4)
        g[ix], g[iy] = d[0], d[1]
        G.append(g), h.append(d @ a)
        G.append(-g), h.append(-(d @ b))
    G.append([-1, 1, 0, 0]), h.append(0.0)
    G.append([0, 0, -1, 1]), h.append(0.0)
    return np.array(M, float).reshape(-1, 4), np.array(r, float), np.array(G, float), np.array(h, float)


def solve_box(Z: DetSet, theta: float, p: PolygonShape, tol: float | None = None):
    """Frame box ``(x0, x1, y0, y1)`` realizing ``Z`` at ``theta``, or None."""
    tol = 1e-9 * p.diameter if tol is None else tol
    M, r, G, h = _system(Z, theta, p)
    if len(M) < 3:
        raise ValueError(f"{Z.type}: {len(M)} equations cannot determine a rectangle")
    U, S, Vt = np.linalg.svd(M)
    rank = int((S > 1e-12 * max(S[0], 1.0)).sum())
    X = Vt.T[:, :rank] @ ((U[:, :rank].T @ r) / S[:rank])
    if np.abs(M @ X - r).max(initial=0.0) > tol:
        return None
    if rank == 4:
        if (G @ X - h).min() < -tol:
            return None
        return X
    if rank != 3:
        return None
    nv = Vt[3]
    # feasible t for X + t nv
    gn = G @ nv
    slack = G @ X - h
    lo, hi = -np.inf, np.inf
    for a, s in zip(gn, slack):
        if abs(a) < 1e-15:
            if s < -tol:
                return None
            continue
        t = -s / a
        if a > 0:
            lo = max(lo, t - tol / abs(a))
        else:
            hi = min(hi, t + tol / abs(a))
    if lo > hi:
        return None
    w0, wt = X[1] - X[0], nv[1] - nv[0]
    h0, ht = X[3] - X[2], nv[3] - nv[2]
    qa = wt * ht
    cands = [t for t in (lo, hi) if np.isfinite(t)]
    if abs(qa) > 1e-18:
        t = -(w0 * ht + h0 * wt) / (2 * qa)
        if lo <= t <= hi:
            cands.append(t)
    # unbounded direction with growing area: no largest rectangle
    for t_end, sgn in ((lo, -1), (hi, 1)):
        if not np.isfinite(t_end) and (qa > 0 or (qa == 0 and sgn * (w0 * ht + h0 * wt) > 0)):
            return None
    if not cands:
        return None
    best = max(cands, key=lambda t: (w0 + wt * t) * (h0 + ht * t))
    return X + best * nv


def realize(Z: DetSet, theta: float, p: PolygonShape, check: bool = True) -> RectSpec | None:
    """Largest frame-aligned rectangle meeting every contact of ``Z`` at ``theta``.

    Returns None when the contacts cannot be met together or, with
    ``check``, when the rectangle is not contained in P.
    """
    X = solve_box(Z, theta, p)
    if X is None or X[1] - X[0] <= 0 or X[3] - X[2] <= 0:
        return None
    r = RectSpec.from_frame_box(X[0], X[1], X[2], X[3], theta)
    if check and not contains_rect(p, r, 1e2 * p.eps):
        return None
    return r


def area_at(Z: DetSet, theta: float, p: PolygonShape) -> float:
    X = solve_box(Z, theta, p)
    if X is None:
        raise Unrealizable(f"{Z.type} has no realization at theta={theta}")
    return float((X[1] - X[0]) * (X[3] - X[2]))


def _area_or_ninf(Z: DetSet, p: PolygonShape) -> Callable[[float], float]:
    def f(t):
        X = solve_box(Z, t, p)
        return -np.inf if X is None else float((X[1] - X[0]) * (X[3] - X[2]))

    return f


def maximize_area(Z: DetSet, J: FeasibleInterval, p: PolygonShape, samples: int = 64) -> list[float]:
    """Orientations in ``J`` where ``Z``'s area is locally maximal, plus both ends."""
    f = _area_or_ninf(Z, p)
    found = [t for t, v in local_maxima(f, J.lo, J.hi, samples) if np.isfinite(v)]
    return sorted(set([J.lo, J.hi] + found))


def feasible_interval(
    Z: DetSet,
    theta_event: float,
    appeared: Mapping,
    feasible: Callable[[float], bool] | None = None,
    tol: float = 1e-12,
) -> FeasibleInterval | None:
    """Interval ending at ``theta_event`` on which all of Z's elements coexist.

    ``appeared`` maps each element to the latest orientation at which it
    appeared.  When ``feasible`` is given, the start is pushed forward by
    bisection to where the realization first becomes feasible.
    """
    lo = max((appeared[e] for e in Z.elements()), default=theta_event)
    hi = theta_event
    if lo > hi:
        return None
    prov = ("appear", "event")
    if feasible is not None:
        if not feasible(hi):
            return None
        if not feasible(lo):
            a, b = lo, hi
            while b - a > tol:
                m = 0.5 * (a + b)
                if feasible(m):
                    b = m
                else:
                    a = m
            lo = b
            prov = ("feasibility", "event")
    return FeasibleInterval(lo, hi, prov)


# ------------------------------------------------------------ classification


def classify(sides: Iterable[str], corners: Iterable[str]) -> str:
    """Canonical type of a contact pattern, by the template it matches."""
    S, C = set(sides), set(corners)
    if len(S) == 4:
        return "B1"
    for c in CORNERS:
        if set(_CORNER_SIDES[c]) <= S and _OPP_CORNER[c] in C:
            return "B2" if len(S) >= 3 else "B3"
    for e in SIDES:
        if e in S and set(_SIDE_ENDS[e]) <= C:
            if _OPP_SIDE[e] in S:
                return "D2"
            return "D1"
    for e in SIDES:
        if e in S and set(_SIDE_ENDS[_OPP_SIDE[e]]) <= C:
            if len(S) >= 2:
                return "E2"
            return "E3" if C & set(_SIDE_ENDS[e]) else "E1"
    for c in CORNERS:
        if c in C and _OPP_CORNER[c] in C:
            es = [s for s in _CORNER_SIDES[c] + _CORNER_SIDES[_OPP_CORNER[c]] if s in S]
            if es:
                if len(S) == 1:
                    return "C1"
                return "C3" if _OPP_SIDE[es[0]] in S else "C2"
    if not S:
        if len(C) == 4:
            return "F2"
        if len(C) == 3:
            return "F1"
        if len(C) == 2 and _OPP_CORNER[next(iter(C))] in C:
            return "A"
    return "B3" if len(S) >= 2 else "F1"


def detect_contacts(p: PolygonShape, r: RectSpec, tol: float | None = None) -> DetSet:
    """Contacts that rectangle ``r`` makes with the boundary of P."""
    tol = 1e-7 * p.diameter if tol is None else tol
    theta = r.theta
    q = p.frame_coords(theta)
    cx, cy = to_frame_array(np.array([r.center]), theta)[0]
    x0, x1 = cx - r.width / 2, cx + r.width / 2
    y0, y1 = cy - r.height / 2, cy + r.height / 2
    out = []
    for g in p.reflex_ids:
        vx, vy = q[g]
        inx = x0 + tol < vx < x1 - tol
        iny = y0 + tol < vy < y1 - tol
        if inx and abs(vy - y1) <= tol:
            out.append(sc(g, "top"))
        elif inx and abs(vy - y0) <= tol:
            out.append(sc(g, "bottom"))
        elif iny and abs(vx - x0) <= tol:
            out.append(sc(g, "left"))
        elif iny and abs(vx - x1) <= tol:
            out.append(sc(g, "right"))
    a, b = q, q[p.nxt]
    d = b - a
    L2 = np.maximum((d * d).sum(axis=1), 1e-300)
    for label, (ix, iy) in _CORNER_VARS.items():
        pt = np.array(((x0, x1)[ix], (y0, y1)[iy - 2]))
        dv = np.hypot(*(q - pt).T)
        if dv.min() <= tol:
            out.append(cc_vertex(int(dv.argmin()), label))
            continue
        t = np.clip(((pt - a) * d).sum(axis=1) / L2, 0, 1)
        de = np.hypot(*(a + t[:, None] * d - pt).T)
        if de.min() <= tol:
            out.append(cc_edge(int(de.argmin()), label))
    S = {c.label for c in out if c.kind == "sc"}
    C = {c.label for c in out if c.kind == "cc"}
    return DetSet(classify(S, C), tuple(out))


def enumerate_bcs(Z: DetSet) -> list[DetSet]:
    """Breaking-configuration templates owned by ``Z``'s type.

    Each adds one contact (an sc on a free side or a cc on a free corner)
    whose element is left open.  Type A squares and both F subtypes own no
    BCs; theirs are counted under the D, E and F2 types.  D1 plus the last
    free corner belongs to E3.
    """
    if Z.type in ("A", "F1", "F2"):
        return []
    S, C = Z.sides, Z.corners
    out = []
    for s in SIDES:
        if s not in S:
            out.append(Contact("sc", None, s))
    for c in CORNERS:
        if c not in C:
            if Z.type == "D1":
                continue
            out.append(Contact("cc", None, c))
    res = []
    for extra in out:
        cs = Z.contacts + (extra,)
        t = classify({c.label for c in cs if c.kind == "sc"}, {c.label for c in cs if c.kind == "cc"})
        res.append(DetSet(t, cs))
    return res


# ------------------------------------------------------------------ formulas


def _dihedral():
    mats = []
    for k in range(4):
        c, s = round(math.cos(k * HALF_PI)), round(math.sin(k * HALF_PI))
        R = np.array([[c, -s], [s, c]])
        mats.append(R)
        mats.append(R @ np.array([[0, 1], [1, 0]]))
    return mats


_D4 = _dihedral()


def _relabel(label: str, T: np.ndarray) -> str:
    if label in _SIDE_VEC:
        return _VEC_SIDE[tuple(int(v) for v in T @ np.array(_SIDE_VEC[label]))]
    return _VEC_CORNER[tuple(int(v) for v in T @ np.array(_CORNER_VEC[label]))]


_CANON = {
    "B1": ({"top", "right", "bottom", "left"}, set()),
    "B2": ({"top", "right", "bottom"}, {"bl"}),
    "B3": ({"top", "right"}, {"bl"}),
}


def _canonical(Z: DetSet):
    want = _CANON.get(Z.type)
    if want is None:
        raise ValueError(f"no closed-form area for type {Z.type}")
    for T in _D4:
        lab = [(_relabel(c.label, T), c) for c in Z.contacts]
        S = {l for l, c in lab if c.kind == "sc"}
        C = {l for l, c in lab if c.kind == "cc"}
        if (S, C) == want:
            return T, {l: c for l, c in lab}
    raise ValueError(f"contacts do not match the {Z.type} template")


def _ray_angle(a, b, c) -> float:
    """Angle at ``a`` between rays a->b and a->c."""
    u, v = b - a, c - a
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u @ v)


def angle_params(Z: DetSet, theta: float, p: PolygonShape) -> AngleParams:
    """Read the angles and lengths of a B-type formula off the realization."""
    X = solve_box(Z, theta, p)
    if X is None:
        raise Unrealizable(Z.type)
    T, lab = _canonical(Z)

    def pt(c: Contact):
        return T @ _frame_point(p, c.element[1], theta)

    u, v = pt(lab["top"]), pt(lab["right"])
    gamma = math.atan2(u[1] - v[1], v[0] - u[0])
    uv = float(np.hypot(*(v - u)))
    # box corners in the canonical frame
    c0, c1 = T @ np.array([X[0], X[2]]), T @ np.array([X[1], X[3]])
    bl = np.minimum(c0, c1)
    if Z.type == "B1":
        pp, q = pt(lab["left"]), pt(lab["bottom"])
        return AngleParams(
            "B1", _ray_angle(u, v, pp), _ray_angle(v, u, q), gamma,
            {"uv": uv, "up": float(np.hypot(*(pp - u))), "qv": float(np.hypot(*(v - q)))},
        )
    if Z.type == "B3":
        return AngleParams("B3", _ray_angle(u, v, bl), 0.0, gamma, {"uv": uv, "uc": float(np.hypot(*(bl - u)))})
    q = pt(lab["bottom"])
    a, b = _frame_edge(p, lab["bl"].element[1], theta)
    a, b = T @ a, T @ b
    # w: the edge's supporting line meets line uv
    d1, d2 = (v - u) / uv, b - a
    den = d1[0] * d2[1] - d1[1] * d2[0]
    s = ((a[0] - u[0]) * d2[1] - (a[1] - u[1]) * d2[0]) / den
    w = u + s * d1
    psi = math.atan2(bl[1] - w[1], w[0] - bl[0])
    beta = math.atan2(u[1] - q[1], q[0] - u[0]) - gamma
    return AngleParams(
        "B2", gamma - psi, beta, gamma,
        {"uq": float(np.hypot(*(q - u))), "uw": float(s), "vw": float(s - uv), "uv": uv},
    )


def b1_area(a: AngleParams) -> float:
    L = a.lengths
    g = a.gamma
    return (L["uv"] * math.cos(g) + L["up"] * math.cos(math.pi - (a.alpha + g))) * (
        L["uv"] * math.sin(g) + L["qv"] * math.cos(HALF_PI - (a.beta - g))
    )


def b2_area(a: AngleParams) -> float:
    L = a.lengths
    g = a.gamma
    hgt = L["uq"] * math.sin(a.beta + g)
    return hgt * ((L["uw"] * math.sin(g) - hgt) / math.tan(g - a.alpha) - L["vw"] * math.cos(g))


def b3_area(a: AngleParams) -> float:
    L = a.lengths
    g = a.gamma
    return L["uc"] * math.sin(a.alpha + g) * (L["uc"] * math.cos(math.pi - (a.alpha + g)) + L["uv"] * math.cos(g))


FORMULAS = {"B1": b1_area, "B2": b2_area, "B3": b3_area}


def formula_area(Z: DetSet, theta: float, p: PolygonShape) -> float:
    """Area of ``Z`` at ``theta`` from the closed-form B-type expressions."""
    return FORMULAS[Z.type](angle_params(Z, theta, p))
