"""One-dimensional maximization helpers shared by the solvers."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], a: float, b: float, xtol: float = 1e-12, maxit: int = 200):
    """Golden-section search for a maximum of ``f`` on ``[a, b]``.

    The endpoints are compared at the end, so a monotone function returns
    the better endpoint rather than a point near it.
    """
    fa, fb = f(a), f(b)
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > xtol and it < maxit:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
        it += 1
    x, fx = (c, fc) if fc >= fd else (d, fd)
    return max(((x, fx), (a, fa), (b, fb)), key=lambda t: t[1])


def local_maxima(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    samples: int = 64,
    xtol: float = 1e-12,
    vf: Callable[[np.ndarray], np.ndarray] | None = None,
) -> list[tuple[float, float]]:
    """Local maxima of ``f`` on ``[lo, hi]`` from a uniform seed.

    Sign changes of the central-difference derivative bracket each interior
    maximum; golden section then refines it.  ``vf`` is an optional
    vectorised twin of ``f`` used for the seed.
    """
    if hi <= lo:
        return [(lo, f(lo))]
    ts = np.linspace(lo, hi, samples)
    vals = vf(ts) if vf is not None else np.array([f(t) for t in ts])
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    out = []
    for i in range(1, samples - 1):
        if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1] and vals[i] > -np.inf:
            if vals[i] == vals[i - 1] and vals[i] == vals[i + 1]:
                continue
            out.append(golden_max(f, ts[i - 1], ts[i + 1], xtol))
    return out
