"""Hot loops shared by the solver and the oracle.

Each kernel exists twice: a numba ``@njit`` version and a plain numpy
version.  Setting ``MAXRECT_DISABLE_NUMBA=1`` in the environment (before
import) selects the numpy path, as does a missing numba install.  Both
paths take the same arguments and return the same arrays.

Edges are passed as four flat float64 arrays ``ex0, ey0, ex1, ey1``.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("MAXRECT_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag in CI
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _classify_point(px, py, ex0, ey0, ex1, ey1, tol):
        n = ex0.shape[0]
        inside = False
        tol2 = tol * tol
        for i in range(n):
            ax = ex0[i]
            ay = ey0[i]
            bx = ex1[i]
            by = ey1[i]
            dx = bx - ax
            dy = by - ay
            ll = dx * dx + dy * dy
            if ll > 0.0:
                t = ((px - ax) * dx + (py - ay) * dy) / ll
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            qx = ax + t * dx - px
            qy = ay + t * dy - py
            if qx * qx + qy * qy <= tol2:
                return 0
            if (ay > py) != (by > py):
                xc = ax + (py - ay) * dx / dy
                if px < xc:
                    inside = not inside
        return 1 if inside else -1

    @njit(cache=True)
    def _classify_points_nb(px, py, ex0, ey0, ex1, ey1, tol):
        m = px.shape[0]
        out = np.empty(m, dtype=np.int8)
        for j in range(m):
            out[j] = _classify_point(px[j], py[j], ex0, ey0, ex1, ey1, tol)
        return out

    @njit(cache=True)
    def _ray_exit_nb(ox, oy, dx, dy, ex0, ey0, ex1, ey1, tol):
        m = ox.shape[0]
        n = ex0.shape[0]
        t_out = np.empty(m)
        e_out = np.empty(m, dtype=np.int64)
        ts = np.empty(2 * n + 1)
        es = np.empty(2 * n + 1, dtype=np.int64)
        for j in range(m):
            px = ox[j]
            py = oy[j]
            rx = dx[j]
            ry = dy[j]
            cnt = 0
            for i in range(n):
                ax = ex0[i]
                ay = ey0[i]
                sx = ex1[i] - ax
                sy = ey1[i] - ay
                den = rx * sy - ry * sx
                wx = ax - px
                wy = ay - py
                slen = np.sqrt(sx * sx + sy * sy)
                if abs(den) > 1e-14 * slen:
                    t = (wx * sy - wy * sx) / den
                    s = (wx * ry - wy * rx) / den
                    ts_tol = tol / slen if slen > 0 else 0.0
                    if s >= -ts_tol and s <= 1.0 + ts_tol and t >= -tol:
                        ts[cnt] = max(t, 0.0)
                        es[cnt] = i
                        cnt += 1
                else:
                    # parallel: only collinear overlap matters
                    if abs(wx * ry - wy * rx) <= tol:
                        t0 = wx * rx + wy * ry
                        t1 = (ex1[i] - px) * rx + (ey1[i] - py) * ry
                        if t0 >= -tol:
                            ts[cnt] = max(t0, 0.0)
                            es[cnt] = i
                            cnt += 1
                        if t1 >= -tol:
                            ts[cnt] = max(t1, 0.0)
                            es[cnt] = i
                            cnt += 1
            if cnt == 0:
                t_out[j] = 0.0
                e_out[j] = -1
                continue
            order = np.argsort(ts[:cnt])
            st = ts[:cnt][order]
            se = es[:cnt][order]
            # march gaps; stop at the first gap whose midpoint is outside
            found = False
            prev = 0.0
            prev_e = -1
            k = 0
            while k < cnt:
                cur = st[k]
                if cur - prev > tol:
                    mx = px + 0.5 * (prev + cur) * rx
                    my = py + 0.5 * (prev + cur) * ry
                    if _classify_point(mx, my, ex0, ey0, ex1, ey1, tol) < 0:
                        t_out[j] = prev
                        e_out[j] = prev_e
                        found = True
                        break
                    prev = cur
                    prev_e = se[k]
                elif prev_e < 0:
                    prev_e = se[k]
                k += 1
            if not found:
                t_out[j] = prev
                e_out[j] = prev_e
        return t_out, e_out

    @njit(cache=True)
    def _mark_edge_cells_nb(blocked, ex0, ey0, ex1, ey1, x0, y0, h):
        ny, nx = blocked.shape
        for i in range(ex0.shape[0]):
            ax = (ex0[i] - x0) / h
            ay = (ey0[i] - y0) / h
            bx = (ex1[i] - x0) / h
            by = (ey1[i] - y0) / h
            if ax > bx:
                ax, bx = bx, ax
                ay, by = by, ay
            c0 = int(np.floor(ax))
            c1 = int(np.floor(bx))
            for c in range(max(c0 - 1, 0), min(c1 + 1, nx - 1) + 1):
                lo = max(ax, float(c))
                hi = min(bx, float(c + 1))
                if lo > hi + 1e-9:
                    continue
                if bx - ax > 1e-15:
                    ya = ay + (lo - ax) * (by - ay) / (bx - ax)
                    yb = ay + (hi - ax) * (by - ay) / (bx - ax)
                else:
                    ya = ay
                    yb = by
                if ya > yb:
                    ya, yb = yb, ya
                r0 = int(np.floor(ya - 1e-9))
                r1 = int(np.floor(yb + 1e-9))
                for r in range(max(r0, 0), min(r1, ny - 1) + 1):
                    blocked[r, c] = True

    @njit(cache=True)
    def _largest_rect_nb(mask):
        ny, nx = mask.shape
        heights = np.zeros(nx + 1, dtype=np.int64)
        stack = np.empty(nx + 2, dtype=np.int64)
        best = 0
        br0 = 0
        br1 = 0
        bc0 = 0
        bc1 = 0
        for r in range(ny):
            for c in range(nx):
                if mask[r, c]:
                    heights[c] += 1
                else:
                    heights[c] = 0
            top = 0
            for c in range(nx + 1):
                hc = heights[c] if c < nx else 0
                while top > 0 and heights[stack[top - 1]] >= hc:
                    hgt = heights[stack[top - 1]]
                    top -= 1
                    left = stack[top - 1] + 1 if top > 0 else 0
                    area = hgt * (c - left)
                    if area > best:
                        best = area
                        br0 = r - hgt + 1
                        br1 = r + 1
                        bc0 = left
                        bc1 = c
                stack[top] = c
                top += 1
        return best, br0, br1, bc0, bc1

    @njit(cache=True)
    def _f_one_nb(ex0, ey0, ex1, ey1, e1, e2, el, er, c, s, tol):
        ninf = -np.inf
        px = ex0[e1] * c + ey0[e1] * s
        py = -ex0[e1] * s + ey0[e1] * c
        d1x = ex1[e1] * c + ey1[e1] * s - px
        d1y = -ex1[e1] * s + ey1[e1] * c - py
        qx = ex0[e2] * c + ey0[e2] * s
        qy = -ex0[e2] * s + ey0[e2] * c
        d2x = ex1[e2] * c + ey1[e2] * s - qx
        d2y = -ex1[e2] * s + ey1[e2] * c - qy
        rx = ex0[el] * c + ey0[el] * s
        ry = -ex0[el] * s + ey0[el] * c
        dlx = ex1[el] * c + ey1[el] * s - rx
        dly = -ex1[el] * s + ey1[el] * c - ry
        if d2y == 0.0 or dlx == 0.0:
            return ninf, 0.0, 0.0, 0.0, 0.0
        t0 = (py - qy) / d2y
        t1 = d1y / d2y
        xr0 = qx + t0 * d2x
        xr1 = t1 * d2x
        w0 = (px - rx) / dlx
        w1 = d1x / dlx
        yb0 = ry + w0 * dly
        yb1 = w1 * dly
        W0 = xr0 - px
        W1 = xr1 - d1x
        H0 = py - yb0
        H1 = d1y - yb1
        lo = 0.0
        hi = 1.0
        for j in range(6):
            if j == 0:
                g0, g1, sl = t0, t1, 1e-12
            elif j == 1:
                g0, g1, sl = 1.0 - t0, -t1, 1e-12
            elif j == 2:
                g0, g1, sl = w0, w1, 1e-12
            elif j == 3:
                g0, g1, sl = 1.0 - w0, -w1, 1e-12
            elif j == 4:
                g0, g1, sl = W0, W1, tol
            else:
                g0, g1, sl = H0, H1, tol
            g0 = g0 + sl
            if g1 > 0.0:
                lo = max(lo, -g0 / g1)
            elif g1 < 0.0:
                hi = min(hi, -g0 / g1)
            elif g0 < 0.0:
                return ninf, 0.0, 0.0, 0.0, 0.0
        if not lo <= hi:
            return ninf, 0.0, 0.0, 0.0, 0.0
        if er >= 0:
            sx = ex0[er] * c + ey0[er] * s
            sy = -ex0[er] * s + ey0[er] * c
            drx = ex1[er] * c + ey1[er] * s - sx
            dry = -ex1[er] * s + ey1[er] * c - sy
            c1 = xr1 * dry - yb1 * drx
            if c1 == 0.0:
                return ninf, 0.0, 0.0, 0.0, 0.0
            sb = -((xr0 - sx) * dry - (yb0 - sy) * drx) / c1
            bx = xr0 + xr1 * sb
            by = yb0 + yb1 * sb
            r4 = ((bx - sx) * drx + (by - sy) * dry) / (drx * drx + dry * dry)
            if not (sb >= lo and sb <= hi and r4 >= -1e-12 and r4 <= 1.0 + 1e-12):
                return ninf, 0.0, 0.0, 0.0, 0.0
        else:
            qa = W1 * H1
            qb = W0 * H1 + W1 * H0
            sv = lo
            if qa < 0.0:
                sv = min(max(-qb / (2.0 * qa), lo), hi)
            if (W0 + W1 * hi) * (H0 + H1 * hi) > (W0 + W1 * sv) * (H0 + H1 * sv):
                sb = hi
            else:
                sb = sv
        wd = W0 + W1 * sb
        ht = H0 + H1 * sb
        val = wd * ht
        if not (np.isfinite(val) and wd >= 0.0 and ht >= 0.0):
            return ninf, 0.0, 0.0, 0.0, 0.0
        return val, px + d1x * sb, xr0 + xr1 * sb, yb0 + yb1 * sb, py + d1y * sb

    @njit(cache=True)
    def _f_rows_nb(ex0, ey0, ex1, ey1, Z, theta, tol):
        m = Z.shape[0]
        val = np.empty(m)
        box = np.empty((m, 4))
        for i in range(m):
            v, x0, x1, y0, y1 = _f_one_nb(
                ex0, ey0, ex1, ey1, Z[i, 0], Z[i, 1], Z[i, 2], Z[i, 3], np.cos(theta[i]), np.sin(theta[i]), tol
            )
            val[i] = v
            box[i, 0] = x0
            box[i, 1] = x1
            box[i, 2] = y0
            box[i, 3] = y1
        return val, box

    @njit(cache=True)
    def _f_seed_nb(ex0, ey0, ex1, ey1, Z, cg, sg, floor, tol, cap):
        m = Z.shape[0]
        N = cg.shape[0]
        zo = np.empty(cap, dtype=np.int64)
        ko = np.empty(cap, dtype=np.int64)
        vo = np.empty(cap)
        row = np.empty(N)
        cnt = 0
        for i in range(m):
            any_up = False
            for k in range(N):
                v = _f_one_nb(ex0, ey0, ex1, ey1, Z[i, 0], Z[i, 1], Z[i, 2], Z[i, 3], cg[k], sg[k], tol)[0]
                row[k] = v
                if v > floor:
                    any_up = True
            if not any_up:
                continue
            for k in range(N):
                v = row[k]
                if v <= floor:
                    continue
                vp = row[k - 1]
                vn = row[(k + 1) % N]
                if v >= vp and v >= vn and not (v == vp and v == vn):
                    if cnt == cap:
                        return zo, ko, vo, -1
                    zo[cnt] = i
                    ko[cnt] = k
                    vo[cnt] = v
                    cnt += 1
        return zo, ko, vo, cnt

# ---------------------------------------------------------------------------
# numpy fallbacks
# ---------------------------------------------------------------------------


def _classify_points_np(px, py, ex0, ey0, ex1, ey1, tol):
    px = np.asarray(px, dtype=float)[:, None]
    py = np.asarray(py, dtype=float)[:, None]
    dx = ex1 - ex0
    dy = ey1 - ey0
    ll = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(ll > 0, ((px - ex0) * dx + (py - ey0) * dy) / np.where(ll > 0, ll, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    qx = ex0 + t * dx - px
    qy = ey0 + t * dy - py
    on = np.any(qx * qx + qy * qy <= tol * tol, axis=1)
    straddle = (ey0 > py) != (ey1 > py)
    with np.errstate(invalid="ignore", divide="ignore"):
        xc = ex0 + (py - ey0) * dx / np.where(dy != 0, dy, 1.0)
    crossings = np.sum(straddle & (px < xc), axis=1)
    out = np.where(crossings % 2 == 1, 1, -1).astype(np.int8)
    out[on] = 0
    return out


def _ray_exit_np(ox, oy, dx, dy, ex0, ey0, ex1, ey1, tol):
    m = len(ox)
    t_out = np.zeros(m)
    e_out = np.full(m, -1, dtype=np.int64)
    sx = ex1 - ex0
    sy = ey1 - ey0
    slen = np.hypot(sx, sy)
    for j in range(m):
        px, py, rx, ry = ox[j], oy[j], dx[j], dy[j]
        den = rx * sy - ry * sx
        wx = ex0 - px
        wy = ey0 - py
        ts_list = []
        es_list = []
        ok = np.abs(den) > 1e-14 * slen
        with np.errstate(invalid="ignore", divide="ignore"):
            t = (wx * sy - wy * sx) / np.where(ok, den, 1.0)
            s = (wx * ry - wy * rx) / np.where(ok, den, 1.0)
            stol = np.where(slen > 0, tol / np.where(slen > 0, slen, 1.0), 0.0)
        hit = ok & (s >= -stol) & (s <= 1 + stol) & (t >= -tol)
        ts_list.append(np.maximum(t[hit], 0.0))
        es_list.append(np.nonzero(hit)[0])
        par = ~ok & (np.abs(wx * ry - wy * rx) <= tol)
        if np.any(par):
            t0 = wx * rx + wy * ry
            t1 = (ex1 - px) * rx + (ey1 - py) * ry
            for tt in (t0, t1):
                sel = par & (tt >= -tol)
                ts_list.append(np.maximum(tt[sel], 0.0))
                es_list.append(np.nonzero(sel)[0])
        ts = np.concatenate(ts_list)
        es = np.concatenate(es_list)
        if ts.size == 0:
            continue
        order = np.argsort(ts, kind="stable")
        st = ts[order]
        se = es[order]
        # collapse clusters, keeping the first edge of each
        prev = 0.0
        prev_e = -1
        firsts = []
        for k in range(len(st)):
            if st[k] - prev > tol:
                firsts.append((prev, prev_e, st[k]))
                prev = st[k]
                prev_e = se[k]
            elif prev_e < 0:
                prev_e = se[k]
        if firsts:
            mids = np.array([(a + c) * 0.5 for a, _, c in firsts])
            cls = _classify_points_np(px + mids * rx, py + mids * ry, ex0, ey0, ex1, ey1, tol)
            bad = np.nonzero(cls < 0)[0]
            if bad.size:
                a, ae, _ = firsts[bad[0]]
                t_out[j] = a
                e_out[j] = ae
                continue
        t_out[j] = prev
        e_out[j] = prev_e
    return t_out, e_out


def _mark_edge_cells_np(blocked, ex0, ey0, ex1, ey1, x0, y0, h):
    ny, nx = blocked.shape
    for i in range(len(ex0)):
        ax, ay = (ex0[i] - x0) / h, (ey0[i] - y0) / h
        bx, by = (ex1[i] - x0) / h, (ey1[i] - y0) / h
        if ax > bx:
            ax, bx, ay, by = bx, ax, by, ay
        cs = np.arange(max(int(np.floor(ax)) - 1, 0), min(int(np.floor(bx)) + 1, nx - 1) + 1)
        if cs.size == 0:
            continue
        lo = np.maximum(ax, cs.astype(float))
        hi = np.minimum(bx, cs + 1.0)
        sel = lo <= hi + 1e-9
        cs, lo, hi = cs[sel], lo[sel], hi[sel]
        if bx - ax > 1e-15:
            ya = ay + (lo - ax) * (by - ay) / (bx - ax)
            yb = ay + (hi - ax) * (by - ay) / (bx - ax)
        else:
            ya = np.full(cs.shape, ay)
            yb = np.full(cs.shape, by)
        r0 = np.floor(np.minimum(ya, yb) - 1e-9).astype(int)
        r1 = np.floor(np.maximum(ya, yb) + 1e-9).astype(int)
        for c, a, b in zip(cs, r0, r1):
            a = max(a, 0)
            b = min(b, ny - 1)
            if a <= b:
                blocked[a : b + 1, c] = True


def _largest_rect_np(mask):
    ny, nx = mask.shape
    heights = np.zeros(nx + 1, dtype=np.int64)
    best = (0, 0, 0, 0, 0)
    for r in range(ny):
        heights[:nx] = np.where(mask[r], heights[:nx] + 1, 0)
        stack = []
        for c in range(nx + 1):
            hc = heights[c]
            while stack and heights[stack[-1]] >= hc:
                hgt = heights[stack.pop()]
                left = stack[-1] + 1 if stack else 0
                area = int(hgt) * (c - left)
                if area > best[0]:
                    best = (area, r - int(hgt) + 1, r + 1, left, c)
            stack.append(c)
    return best


def _f_rows_np(ex0, ey0, ex1, ey1, Z, theta, tol):
    c, s = np.cos(theta), np.sin(theta)

    def frame_edge(e):
        ax = ex0[e] * c + ey0[e] * s
        ay = -ex0[e] * s + ey0[e] * c
        bx = ex1[e] * c + ey1[e] * s
        by = -ex1[e] * s + ey1[e] * c
        return ax, ay, bx - ax, by - ay

    e1, e2, el, er = Z[:, 0], Z[:, 1], Z[:, 2], Z[:, 3]
    Px, Py, D1x, D1y = frame_edge(e1)
    Qx, Qy, D2x, D2y = frame_edge(e2)
    Rx, Ry, Dlx, Dly = frame_edge(el)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        t0, t1 = (Py - Qy) / D2y, D1y / D2y
        xr0, xr1 = Qx + t0 * D2x, t1 * D2x
        W0, W1 = xr0 - Px, xr1 - D1x
        w0, w1 = (Px - Rx) / Dlx, D1x / Dlx
        yb0, yb1 = Ry + w0 * Dly, w1 * Dly
        H0, H1 = Py - yb0, D1y - yb1
        lo = np.zeros_like(theta)
        hi = np.ones_like(theta)
        good = (D2y != 0) & (Dlx != 0)
        for g0, g1, slack in (
            (t0, t1, 1e-12), (1 - t0, -t1, 1e-12), (w0, w1, 1e-12), (1 - w0, -w1, 1e-12), (W0, W1, tol), (H0, H1, tol)
        ):
            g0 = g0 + slack
            r = -g0 / g1
            pos, neg = g1 > 0, g1 < 0
            lo = np.where(pos, np.maximum(lo, r), lo)
            hi = np.where(neg, np.minimum(hi, r), hi)
            good &= (g1 != 0) | (g0 >= 0)
        good &= lo <= hi
        qa = W1 * H1
        qb = W0 * H1 + W1 * H0
        sv = np.where(qa < 0, np.clip(-qb / (2 * qa), lo, hi), lo)

        def area(x):
            return (W0 + W1 * x) * (H0 + H1 * x)

        s_best = np.where(area(hi) > area(sv), hi, sv)
        is4 = er >= 0
        if is4.any():
            Sx, Sy, Drx, Dry = frame_edge(np.maximum(er, 0))
            c0 = (xr0 - Sx) * Dry - (yb0 - Sy) * Drx
            c1 = xr1 * Dry - yb1 * Drx
            s4 = -c0 / c1
            bx, by = xr0 + xr1 * s4, yb0 + yb1 * s4
            r4 = ((bx - Sx) * Drx + (by - Sy) * Dry) / (Drx * Drx + Dry * Dry)
            ok4 = (c1 != 0) & (s4 >= lo) & (s4 <= hi) & (r4 >= -1e-12) & (r4 <= 1 + 1e-12)
            good &= ~is4 | ok4
            s_best = np.where(is4, s4, s_best)
        wd, ht = W0 + W1 * s_best, H0 + H1 * s_best
        val = wd * ht
        good &= np.isfinite(val) & (wd >= 0) & (ht >= 0)
        val = np.where(good, val, -np.inf)
        box = np.column_stack((Px + D1x * s_best, xr0 + xr1 * s_best, yb0 + yb1 * s_best, Py + D1y * s_best))
    box[~good] = 0.0
    return val, box


def _f_seed_np(ex0, ey0, ex1, ey1, Z, grid, floor, tol, chunk=1 << 20):
    N = len(grid)
    per = max(1, chunk // N)
    zs, ks, vs = [], [], []
    for lo in range(0, len(Z), per):
        Zc = Z[lo : lo + per]
        m = len(Zc)
        val, _ = _f_rows_np(ex0, ey0, ex1, ey1, np.repeat(Zc, N, axis=0), np.tile(grid, m), tol)
        val = val.reshape(m, N)
        vp = np.roll(val, 1, axis=1)
        vn = np.roll(val, -1, axis=1)
        peak = (val >= vp) & (val >= vn) & ~((val == vp) & (val == vn)) & (val > floor)
        zi, ki = np.nonzero(peak)
        zs.append(zi + lo)
        ks.append(ki)
        vs.append(val[zi, ki])
    if not zs:
        return np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0)
    return np.concatenate(zs), np.concatenate(ks), np.concatenate(vs)

# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def _f(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def classify_points(px, py, edges, tol):
    """Classify points against the closed polygon given by ``edges``.

    Returns int8 codes: 1 inside, 0 within ``tol`` of the boundary, -1 outside.
    """
    ex0, ey0, ex1, ey1 = edges
    px, py = _f(np.atleast_1d(px)), _f(np.atleast_1d(py))
    if HAVE_NUMBA:
        return _classify_points_nb(px, py, ex0, ey0, ex1, ey1, float(tol))
    return _classify_points_np(px, py, ex0, ey0, ex1, ey1, float(tol))


def ray_exit(ox, oy, dx, dy, edges, tol):
    """Distance along each ray to where it first leaves the closed polygon.

    Directions must be unit vectors.  Returns ``(t, edge_index)``; the edge
    index is -1 when the ray meets no edge (origin outside).
    """
    ex0, ey0, ex1, ey1 = edges
    args = [_f(np.atleast_1d(a)) for a in (ox, oy, dx, dy)]
    if HAVE_NUMBA:
        return _ray_exit_nb(*args, ex0, ey0, ex1, ey1, float(tol))
    return _ray_exit_np(*args, ex0, ey0, ex1, ey1, float(tol))


def mark_edge_cells(blocked, edges, x0, y0, h):
    """Set ``blocked[r, c]`` for every grid cell an edge touches (in place)."""
    ex0, ey0, ex1, ey1 = edges
    if HAVE_NUMBA:
        _mark_edge_cells_nb(blocked, ex0, ey0, ex1, ey1, float(x0), float(y0), float(h))
    else:
        _mark_edge_cells_np(blocked, ex0, ey0, ex1, ey1, float(x0), float(y0), float(h))


def largest_rect(mask):
    """Largest all-true axis-aligned block of a boolean grid.

    Returns ``(cells, r0, r1, c0, c1)`` with half-open row/column ranges.
    """
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    if HAVE_NUMBA:
        return tuple(int(v) for v in _largest_rect_nb(mask))
    return _largest_rect_np(mask)

def f_rows(edges, Z, theta, tol):
    """Corner-contact rectangle of each set row at its own orientation.

    Row ``(e1, e2, el, er)`` puts the top-left, top-right and bottom-left
    corners on those edges (``er >= 0`` also pins bottom-right).  Returns
    ``(area, box)`` with ``box`` rows ``(x0, x1, y0, y1)`` in the frame;
    unrealizable rows get area ``-inf``.
    """
    ex0, ey0, ex1, ey1 = edges
    Z = np.ascontiguousarray(Z, dtype=np.int64)
    theta = _f(np.broadcast_to(np.asarray(theta, dtype=float), (len(Z),)))
    if HAVE_NUMBA:
        return _f_rows_nb(ex0, ey0, ex1, ey1, Z, theta, float(tol))
    return _f_rows_np(ex0, ey0, ex1, ey1, Z, theta, float(tol))


def f_seed(edges, Z, grid, floor, tol):
    """Periodic-grid local maxima of every set above ``floor``.

    Returns ``(set_index, grid_index, area)`` arrays.
    """
    ex0, ey0, ex1, ey1 = edges
    Z = np.ascontiguousarray(Z, dtype=np.int64)
    grid = _f(grid)
    if not HAVE_NUMBA:
        return _f_seed_np(ex0, ey0, ex1, ey1, Z, grid, float(floor), float(tol))
    cg, sg = np.cos(grid), np.sin(grid)
    cap = 16 * len(Z) + 1024
    while True:
        zo, ko, vo, cnt = _f_seed_nb(ex0, ey0, ex1, ey1, Z, cg, sg, float(floor), float(tol), cap)
        if cnt >= 0:
            return zo[:cnt], ko[:cnt], vo[:cnt]
        cap *= 4
