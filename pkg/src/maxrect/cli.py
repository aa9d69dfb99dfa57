"""Command-line front end.

Reads ``{"outer": [[x, y], ...], "holes": [[[x, y], ...], ...]}``, solves,
and prints one JSON record.  Exit codes: 0 success, 1 I/O failure,
2 invalid polygon, 3 solver area below the oracle bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import _accel
from .geom import RectSpec, rect_corners
from .oracle import sweep_oracle
from .polygon import InvalidPolygon, PolygonShape
from .solvers.core import PRUNE, TYPE_LETTERS, SolveResult, solve

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_ORACLE = 0, 1, 2, 3


@dataclass
class RunConfig:
    input: Path
    types: frozenset[str] = frozenset(TYPE_LETTERS)
    report_all: bool = False
    oracle_check: tuple[int, float] | None = None
    svg: Path | None = None
    prune: float = PRUNE
    threads: int = 1
    trace: Path | None = None

    def __post_init__(self):
        if not self.types:
            raise ValueError("type filter is empty")
        if self.oracle_check is not None and self.oracle_check[0] < 1:
            raise ValueError("oracle check needs M >= 1")


def load_polygon(path: Path) -> PolygonShape:
    doc = json.loads(Path(path).read_text())
    return PolygonShape.from_rings(doc["outer"], doc.get("holes", []))


def write_polygon(p: PolygonShape, path: Path) -> None:
    Path(path).write_text(json.dumps(p.to_json()))


def _rect_record(r: RectSpec, kind: str) -> dict:
    return {
        "area": r.area,
        "center": [r.center.x, r.center.y],
        "theta": r.theta,
        "width": float(r.width),
        "height": float(r.height),
        "type": kind,
        "corners": [[c.x, c.y] for c in rect_corners(r)],
    }


def result_record(res: SolveResult, report_all: bool) -> dict:
    out: dict = {"area": float(res.best_area), "optima": len(res.rects)}
    if res.rects:
        out.update(_rect_record(res.rects[0], res.types[0]))
        out["area"] = float(res.best_area)
    if report_all:
        out["rects"] = [_rect_record(r, t) for r, t in zip(res.rects, res.types)]
    out["stats"] = res.stats
    out["backend"] = _accel.BACKEND
    return out


def emit_svg(p: PolygonShape, res: SolveResult, path: Path) -> None:
    x0, y0, x1, y1 = p.bbox
    pad = 0.05 * max(x1 - x0, y1 - y0)
    vx, vy, vw, vh = x0 - pad, -(y1 + pad), x1 - x0 + 2 * pad, y1 - y0 + 2 * pad
    sw = 0.004 * max(vw, vh)

    def ring_d(pts) -> str:
        return "M " + " L ".join(f"{x:.12g} {y:.12g}" for x, y in pts) + " Z"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx:.12g} {vy:.12g} {vw:.12g} {vh:.12g}">',
        '<g transform="scale(1,-1)">',
        f'<path d="{" ".join(ring_d(r) for r in p.rings)}" fill="#dde6f0" fill-rule="evenodd" '
        f'stroke="#34495e" stroke-width="{sw:.6g}"/>',
    ]
    for r in res.rects:
        parts.append(f'<path d="{ring_d(rect_corners(r))}" fill="none" stroke="#c0392b" stroke-width="{sw:.6g}"/>')
    parts += ["</g>", "</svg>"]
    Path(path).write_text("\n".join(parts) + "\n")


def run(cfg: RunConfig) -> int:
    try:
        p = load_polygon(cfg.input)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot read {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        p.require_valid()
    except InvalidPolygon as exc:
        print(json.dumps({"valid": False, "errors": exc.report.errors, "warnings": exc.report.warnings}))
        return EXIT_INVALID
    trace = None
    try:
        if cfg.trace is not None:
            trace = open(cfg.trace, "w")
        res = solve(p, types=cfg.types, report_all=cfg.report_all, prune=cfg.prune, threads=cfg.threads, trace=trace)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        if trace is not None:
            trace.close()
    rec = result_record(res, cfg.report_all)
    code = EXIT_OK
    if cfg.oracle_check is not None:
        M, h = cfg.oracle_check
        orc = sweep_oracle(p, M, h)
        passed = res.best_area >= orc.area_lower_bound * (1 - 1e-9)
        rec["oracle"] = {"M": M, "h": h, "area_lower_bound": orc.area_lower_bound, "passed": passed}
        if not passed:
            code = EXIT_ORACLE
    if cfg.svg is not None:
        try:
            emit_svg(p, res, cfg.svg)
        except OSError as exc:
            print(f"error: cannot write {cfg.svg}: {exc}", file=sys.stderr)
            return EXIT_IO
    print(json.dumps(rec, default=float))
    return code


def _types(s: str) -> frozenset[str]:
    if s.strip().lower() == "all":
        return frozenset(TYPE_LETTERS)
    out = frozenset(t.strip().upper() for t in s.split(",") if t.strip())
    if not out or not out <= set(TYPE_LETTERS):
        raise argparse.ArgumentTypeError(f"types must be a comma list from {','.join(TYPE_LETTERS)} or 'all'")
    return out


def parse_args(argv=None) -> RunConfig:
    ap = argparse.ArgumentParser(prog="maxrect", description="Largest rectangle inside a polygon with holes.")
    ap.add_argument("--input", required=True, type=Path, help="polygon JSON file")
    ap.add_argument("--types", type=_types, default=frozenset(TYPE_LETTERS), help="rectangle types to search, e.g. A,F")
    ap.add_argument("--all", action="store_true", help="report every optimal rectangle")
    ap.add_argument("--oracle-check", nargs=2, metavar=("M", "H"), help="compare against the sampled oracle")
    ap.add_argument("--svg", type=Path, help="write an SVG drawing")
    ap.add_argument("--prune", type=float, default=PRUNE, help="refine seeds within this fraction of the best")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--trace", type=Path, help="dump staircase events here")
    a = ap.parse_args(argv)
    oc = None
    if a.oracle_check is not None:
        try:
            oc = (int(a.oracle_check[0]), float(a.oracle_check[1]))
        except ValueError:
            ap.error("--oracle-check takes an integer M and a number H")
        if oc[0] < 1 or not oc[1] > 0:
            ap.error("--oracle-check needs M >= 1 and H > 0")
    return RunConfig(a.input, a.types, a.all, oc, a.svg, a.prune, max(1, a.threads), a.trace)


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
