"""Time the accelerated kernels under numba and under the numpy fallback.

Each backend runs in its own interpreter because the backend is chosen at
import time from MAXRECT_DISABLE_NUMBA.  Usage:

    python benchmarks/bench_kernels.py [--repeat 5] [--n 40] [--solve]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _best(fn, repeat: int) -> float:
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def worker(repeat: int, n: int, with_solve: bool) -> dict:
    import numpy as np

    from maxrect import _accel
    from maxrect.corpus import random_star
    from maxrect.geom import to_frame_array
    from maxrect.solvers.type_f import f_sets

    rng = np.random.default_rng(0)
    p = random_star(rng, n)
    edges = p.edges
    pts = rng.uniform(-1, 1, (200_000, 2))
    px, py = np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1])
    ang = rng.uniform(0, 2 * np.pi, 20_000)
    ox, oy = np.zeros_like(ang), np.zeros_like(ang)
    dx, dy = np.cos(ang), np.sin(ang)
    mask = rng.uniform(size=(400, 400)) < 0.97
    Z = f_sets(p).sets
    theta = rng.uniform(0, 2 * np.pi, len(Z))
    grid = np.arange(0.0, 2 * np.pi, 0.003)

    def raster():
        q0 = to_frame_array(p.E0, 0.3)
        q1 = to_frame_array(p.E1, 0.3)
        e = tuple(np.ascontiguousarray(a) for a in (q0[:, 0], q0[:, 1], q1[:, 0], q1[:, 1]))
        blocked = np.zeros((200, 200), dtype=np.bool_)
        _accel.mark_edge_cells(blocked, e, -1.0, -1.0, 0.01)

    out = {
        "backend": _accel.BACKEND,
        "n": p.n,
        "classify_points (2e5 pts)": _best(lambda: _accel.classify_points(px, py, edges, 1e-12), repeat),
        "ray_exit (2e4 rays)": _best(lambda: _accel.ray_exit(ox, oy, dx, dy, edges, 1e-12), repeat),
        "mark_edge_cells (200x200)": _best(raster, repeat),
        "largest_rect (400x400)": _best(lambda: _accel.largest_rect(mask), repeat),
        f"f_rows ({len(Z)} sets)": _best(lambda: _accel.f_rows(edges, Z, theta, 1e-12), repeat),
        f"f_seed ({len(Z)} sets x {len(grid)} angles)": _best(lambda: _accel.f_seed(edges, Z, grid, 0.0, 1e-12), max(1, repeat // 2)),
    }
    if with_solve:
        from maxrect.solvers.core import solve

        out["solve (end to end)"] = _best(lambda: solve(p), 1)
    return out


def run_backend(disable: bool, args) -> dict:
    env = dict(os.environ)
    env["MAXRECT_DISABLE_NUMBA"] = "1" if disable else "0"
    cmd = [sys.executable, __file__, "--worker", "--repeat", str(args.repeat), "--n", str(args.n)]
    if args.solve:
        cmd.append("--solve")
    done = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(done.stdout.strip().splitlines()[-1])


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=40, help="polygon size")
    ap.add_argument("--solve", action="store_true", help="also time a full solve")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.worker:
        print(json.dumps(worker(args.repeat, args.n, args.solve)))
        return
    fast = run_backend(False, args)
    slow = run_backend(True, args)
    if fast["backend"] != "numba":
        print("numba is not available; both runs used numpy", file=sys.stderr)
    keys = [k for k in fast if k not in ("backend", "n")]
    w = max(len(k) for k in keys)
    print(f"polygon n={fast['n']}, best of {args.repeat}")
    print(f"{'kernel':<{w}}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}")
    for k in keys:
        print(f"{k:<{w}}  {fast[k]:>10.4f}  {slow[k]:>10.4f}  {slow[k] / fast[k]:>7.1f}x")


if __name__ == "__main__":
    main()
