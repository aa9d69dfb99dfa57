"""Top-level optimizer: runs the type solvers and merges their candidates.

Squares on convex-vertex diagonals come first since they are exact and
cheap.  The top-contact engine then covers every rectangle with a reflex
vertex on a side, and the corner-contact sets cover the rest.  Each stage
only refines seeds within ``prune`` of the best area known so far, and
every candidate is re-checked for containment before it can win.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from ..contacts import DetSet, detect_contacts
from ..geom import RectSpec, same_rect, to_frame_array
from ..polygon import PolygonShape, contains_boxes, contains_rect
from .topcontact import TopContactEngine
from .type_a import type_a_squares
from .type_f import convex_f_sets, f_aligned, f_brackets, f_sets, refine_f

TYPE_LETTERS = "ABCDEF"
PRUNE = 0.1  # refine seeds whose value is within this fraction of the best
TIE = 1e-8  # relative area tolerance for "equally large"
DEDUP = 1e-6  # corner distance, in diameters, under which two optima are one
SNAP = 1e-7  # band, in diameters, inside which a vertex pulls a side in
F_BATCH = 512
ENGINE_BATCH = 128
ALIGNED_BATCH = 4096


@dataclass(frozen=True)
class Candidate:
    rect: RectSpec
    det_set: DetSet | None
    origin: str  # maximal | breaking | endpoint
    source: str  # A | engine | F

    @property
    def area(self) -> float:
        return self.rect.area


@dataclass
class SolveOptions:
    types: frozenset[str] = frozenset(TYPE_LETTERS)
    report_all: bool = True
    max_optima: int = 64
    prune: float = PRUNE
    threads: int = 1
    trace: IO[str] | None = None
    convex_fast_path: bool = False


@dataclass
class SolveResult:
    best_area: float
    rects: list[RectSpec]
    types: list[str]
    stats: dict = field(default_factory=dict)
    candidates: list[Candidate] = field(default_factory=list)

    @property
    def best(self) -> RectSpec | None:
        return self.rects[0] if self.rects else None


# ------------------------------------------------------------------ stages


def _a_candidates(p: PolygonShape, stats: dict) -> list[Candidate]:
    sq = type_a_squares(p)
    nconv = p.n - p.k
    stats["A"] = {"tested": nconv * (nconv - 1) // 2, "verified": len(sq)}
    return [Candidate(r, None, "maximal", "A") for _, _, r in sq]


def _engine(p: PolygonShape, em=None, threads: int = 1, trace=None) -> TopContactEngine:
    eng = TopContactEngine(p, em, trace=trace)
    us = [int(u) for u in p.reflex_ids]
    if threads > 1 and len(us) > 1:
        with ThreadPoolExecutor(threads) as ex:
            list(ex.map(eng.sweep, us))
    else:
        for u in us:
            eng.sweep(u)
    return eng


def _engine_candidates(eng: TopContactEngine, floor: float, prune: float, stats: dict) -> list[Candidate]:
    # seeds near the ends of a vertex's range can overstate F_u, so pruning
    # is against verified areas only, refining the most promising first
    p = eng.p
    brs = sorted((b for ctx in eng.ctx.values() for b in ctx.brackets), key=lambda b: -b.value)
    out: list[Candidate] = []
    best = floor
    tested = 0
    for lo in range(0, len(brs), ENGINE_BATCH):
        batch = brs[lo : lo + ENGINE_BATCH]
        if batch[0].value < (1.0 - prune) * best:
            break
        batch = [b for b in batch if b.value >= (1.0 - prune) * best]
        tested += len(batch)
        th, val = eng.refine(batch)
        for b, t, v in zip(batch, th, val):
            if not np.isfinite(v) or v <= 0:
                continue
            origin = "endpoint" if t in (b.lo, b.hi) else "maximal"
            for r in eng.realize(b.u, float(t), b.left, b.right):
                if contains_rect(p, r):
                    out.append(Candidate(r, None, origin, "engine"))
                    best = max(best, r.area)
    stats["engine"] = {
        "events": int(sum(c.events for c in eng.ctx.values())),
        "brackets": len(brs),
        "tested": tested,
        "verified": len(out),
    }
    return out


def _f_candidates(p: PolygonShape, sets: np.ndarray, events: int, floor: float, prune: float, stats: dict) -> list[Candidate]:
    cut = (1.0 - prune) * floor
    brs = sorted(f_brackets(p, sets, floor=cut), key=lambda b: -b.value)
    out: list[Candidate] = []
    best = floor
    tested = 0

    def accept(th, val, box, origins):
        nonlocal best
        ok = np.isfinite(val) & (box[:, 1] > box[:, 0]) & (box[:, 3] > box[:, 2])
        ok[ok] = contains_boxes(p, th[ok], box[ok, 0], box[ok, 1], box[ok, 2], box[ok, 3])
        for i in np.nonzero(ok)[0]:
            r = RectSpec.from_frame_box(*box[i], th[i])
            out.append(Candidate(r, None, origins[i], "F"))
            best = max(best, r.area)

    for lo in range(0, len(brs), F_BATCH):
        batch = brs[lo : lo + F_BATCH]
        if batch[0].value < (1.0 - prune) * best:
            break
        tested += len(batch)
        th, val, box = refine_f(p, sets, batch)
        accept(th, val, box, ["breaking" if sets[b.z, 3] >= 0 else "maximal" for b in batch])
    # flush orientations; the values are exact, so prune against the best directly
    th, val, box = f_aligned(p, sets, floor=cut)
    order = np.argsort(-val)
    th, val, box = th[order], val[order], box[order]
    for lo in range(0, len(val), ALIGNED_BATCH):
        if val[lo] < best * (1.0 - TIE):
            break
        sl = slice(lo, lo + ALIGNED_BATCH)
        tested += len(val[sl])
        accept(th[sl], val[sl], box[sl], ["breaking"] * len(val[sl]))
    stats["F"] = {"sets": len(sets), "events": int(events), "brackets": len(brs), "tested": tested, "verified": len(out)}
    return out


def _snap(p: PolygonShape, r: RectSpec) -> RectSpec:
    """Pull each side onto any vertex lying just inside it.

    Overdetermined optima are realized from a refined angle, so a contact
    vertex can end up a few ulps of angle inside the box.  Moving the side
    onto it costs far less than the tie tolerance.
    """
    band = SNAP * p.diameter
    q = to_frame_array(p.verts, r.theta)
    cx, cy = to_frame_array(np.array([r.center]), r.theta)[0]
    x0, x1 = cx - r.width / 2, cx + r.width / 2
    y0, y1 = cy - r.height / 2, cy + r.height / 2
    qx, qy = q[:, 0], q[:, 1]
    moved = False
    for _ in range(4):
        inside = (qx > x0) & (qx < x1) & (qy > y0) & (qy < y1)
        if not inside.any():
            break
        gaps = np.stack((qx - x0, x1 - qx, qy - y0, y1 - qy))[:, inside]
        side, k = np.unravel_index(np.argmin(gaps), gaps.shape)
        if gaps[side, k] > band:
            return r
        v = q[inside][k]
        if side == 0:
            x0 = v[0]
        elif side == 1:
            x1 = v[0]
        elif side == 2:
            y0 = v[1]
        else:
            y1 = v[1]
        moved = True
    return RectSpec.from_frame_box(x0, x1, y0, y1, r.theta) if moved else r


def _tag(p: PolygonShape, c: Candidate) -> Candidate:
    if c.det_set is not None:
        return c
    return Candidate(c.rect, detect_contacts(p, c.rect), c.origin, c.source)


def _finalize(p: PolygonShape, cands: list[Candidate], opts: SolveOptions, stats: dict) -> SolveResult:
    cands = sorted(cands, key=lambda c: -c.area)
    filtered = set(opts.types) != set(TYPE_LETTERS)
    tol = DEDUP * p.diameter
    best = 0.0
    picked: list[Candidate] = []
    for c in cands:
        if picked and c.area < best * (1.0 - TIE):
            break
        c = _tag(p, Candidate(_snap(p, c.rect), c.det_set, c.origin, c.source))
        # the engine covers B..E at once; A and F are gated by stage
        if filtered and c.source == "engine" and c.det_set.type[0] not in opts.types:
            continue
        if not contains_rect(p, c.rect):
            continue
        if not picked:
            best = c.area
        if any(same_rect(c.rect, q.rect, tol) for q in picked):
            continue
        picked.append(c)
        if len(picked) >= (opts.max_optima if opts.report_all else 1):
            break
    by_type: dict[str, int] = {}
    for c in picked:
        by_type[c.det_set.type] = by_type.get(c.det_set.type, 0) + 1
    stats["optima_by_type"] = by_type
    stats["candidates"] = len(cands)
    return SolveResult(
        best_area=best,
        rects=[c.rect.canonical() for c in picked],
        types=[c.det_set.type for c in picked],
        stats=stats,
        candidates=picked,
    )


# -------------------------------------------------------------- top level


def _options(options: SolveOptions | None, kw) -> SolveOptions:
    opts = options or SolveOptions()
    for k, v in kw.items():
        setattr(opts, k, v)
    opts.types = frozenset(opts.types)
    if not opts.types or not opts.types <= set(TYPE_LETTERS):
        raise ValueError(f"type filter must be a nonempty subset of {TYPE_LETTERS}, got {sorted(opts.types)}")
    return opts


def solve(p: PolygonShape, options: SolveOptions | None = None, em=None, **kw) -> SolveResult:
    """Largest rectangle(s) contained in P, over all orientations."""
    p.require_valid()
    opts = _options(options, kw)
    if opts.convex_fast_path and p.is_convex:
        return solve_convex(p, opts)
    stats: dict = {}
    cands: list[Candidate] = []
    if "A" in opts.types:
        cands += _a_candidates(p, stats)
    floor = max((c.area for c in cands), default=0.0)
    if set("BCDE") & opts.types and p.k:
        eng = _engine(p, em, opts.threads, opts.trace)
        cands += _engine_candidates(eng, floor, opts.prune, stats)
        floor = max((c.area for c in cands), default=0.0)
    if "F" in opts.types:
        fs = f_sets(p)
        cands += _f_candidates(p, fs.sets, fs.events, floor, opts.prune, stats)
    return _finalize(p, cands, opts, stats)


def solve_convex(p: PolygonShape, options: SolveOptions | None = None, **kw) -> SolveResult:
    """Convex polygons only: squares plus corner-contact sets from the frame sweep."""
    p.require_valid()
    if not p.is_convex:
        raise ValueError("solve_convex needs a convex polygon without holes")
    opts = _options(options, kw)
    stats: dict = {}
    cands = _a_candidates(p, stats)
    floor = max((c.area for c in cands), default=0.0)
    fs = convex_f_sets(p)
    cands += _f_candidates(p, fs.sets, fs.events, floor, opts.prune, stats)
    return _finalize(p, cands, opts, stats)


# ------------------------------------------------------- per-type entries


def solve_type_a(p: PolygonShape) -> list[Candidate]:
    return [_tag(p, c) for c in _a_candidates(p, {})]


def _engine_typed(p: PolygonShape, letters: str, em=None) -> list[Candidate]:
    if not p.k:
        return []
    cands = _engine_candidates(_engine(p, em), 0.0, 1.0, {})
    return [c for c in (_tag(p, c) for c in cands) if c.det_set.type[0] in letters]


def solve_type_b(p: PolygonShape, em=None) -> list[Candidate]:
    return _engine_typed(p, "B", em)


def solve_type_cd(p: PolygonShape, em=None) -> list[Candidate]:
    return _engine_typed(p, "CD", em)


def solve_type_e(p: PolygonShape, em=None) -> list[Candidate]:
    return _engine_typed(p, "E", em)


def solve_type_f(p: PolygonShape) -> list[Candidate]:
    fs = f_sets(p)
    return [_tag(p, c) for c in _f_candidates(p, fs.sets, fs.events, 0.0, 1.0, {})]


__all__ = [
    "Candidate",
    "SolveOptions",
    "SolveResult",
    "solve",
    "solve_convex",
    "solve_type_a",
    "solve_type_b",
    "solve_type_cd",
    "solve_type_e",
    "solve_type_f",
]

